//! Exact Darboux-integrability analysis of polynomial vector fields.
//!
//! The crate is layered bottom-up:
//!
//! * [`arith`]: rationals, sparse multivariate polynomials, rational functions
//! * [`linalg`]: fraction-free linear algebra, characteristic polynomials, rational roots
//! * [`sysparse`]: the `.vf` system language and canonical rendering
//! * [`lie`]: Lie derivative, divergence, Jacobians, independence testing
//! * [`darboux`]: Darboux polynomial verification and search
//! * [`integrability`]: Jacobian multipliers, first integrals, the Cramer construction

pub mod arith;
pub mod darboux;
pub mod integrability;
pub mod lie;
pub mod linalg;
pub mod sysparse;

pub use arith::{Monomial, Poly, Rat, RatFunc, Vars};
pub use linalg::{QMatrix, UniPoly};
pub use sysparse::{parse_system, render_poly, render_ratfunc, SystemSpec, VectorField};
