//! Jacobian multipliers and first integrals built from Darboux data, the
//! logarithmic normal form `w0 + sum c_i ln w_i`, and the reconstruction of
//! a multiplier from `n - 1` rational first integrals by Cramer's rule.

mod cramer;
mod elementary;
mod multiplier;

pub use cramer::{cramer_multiplier, euler_identity_residual, CramerData, CramerOutcome};
pub use elementary::{
    solve_log_coefficients, verify_elementary_first_integral, ElementaryIntegralExpr, LogCoefficients,
};
pub use multiplier::{
    first_integral_exponents, multiplier_exponents, verify_jacobian_multiplier,
    verify_log_derivative_multiplier, FirstIntegralCertificate, MultiplierCertificate,
    MultiplierOutcome, MultiplierVerdict,
};

use crate::arith::RatFunc;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IntegrabilityError {
    #[error("pair {index} is not a verified Darboux pair of the field")]
    UnverifiedPair { index: usize },
    #[error("argument uses a different variable context than the field")]
    Context,
    #[error("expected {expected} values, found {found}")]
    Length { expected: usize, found: usize },
    #[error("the zero function is not an admissible argument")]
    ZeroFunction,
    #[error("integral {index} is not a first integral: X(H) = {residual}")]
    NotFirstIntegral { index: usize, residual: RatFunc },
    #[error("variable index {0} out of range")]
    Pivot(usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
