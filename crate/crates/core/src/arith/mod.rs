//! Exact rationals, sparse multivariate polynomials and rational functions.

mod monomial;
mod poly;
mod rat;
mod ratfunc;

pub use monomial::{count_monomials_up_to, monomials_up_to, Monomial};
pub use poly::{poly_arith, Poly, PolyOp, Vars};
pub use rat::{fmt_rat, gcd_numerators, is_integer, lcm_denominators, make_primitive, parse_rat, rat, rat_frac, Rat};
pub use ratfunc::{ratfunc_arith, ratfunc_equal, RatFunc, RatFuncOp};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("variable contexts differ: [{}] vs [{}]", .left.join(", "), .right.join(", "))]
    ContextMismatch { left: Vec<String>, right: Vec<String> },
    #[error("division by zero")]
    DivisionByZero,
    #[error("not divisible")]
    NotDivisible,
}
