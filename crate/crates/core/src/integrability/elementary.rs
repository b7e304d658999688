use std::collections::HashMap;

use crate::arith::{Monomial, Poly, Rat, RatFunc};
use crate::lie::lie_derivative_rf;
use crate::linalg::{solve_affine, AffineResult, QMatrix};
use crate::sysparse::VectorField;

use super::IntegrabilityError;

/// `H = w0 + sum c_i ln w_i` with rational `w_i` and rational constants.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementaryIntegralExpr {
    pub w0: RatFunc,
    pub terms: Vec<(Rat, RatFunc)>,
}

impl ElementaryIntegralExpr {
    /// `X(H) = X(w0) + sum c_i X(w_i)/w_i`.
    pub fn derivative_along(&self, field: &VectorField) -> Result<RatFunc, IntegrabilityError> {
        let mut acc = lie_derivative_rf(field, &self.w0);
        for (c, w) in &self.terms {
            acc = acc.checked_add(&log_derivative(field, w)?.scale(c)).map_err(|_| IntegrabilityError::Context)?;
        }
        Ok(acc)
    }
}

fn log_derivative(field: &VectorField, w: &RatFunc) -> Result<RatFunc, IntegrabilityError> {
    if w.vars() != field.vars() {
        return Err(IntegrabilityError::Context);
    }
    if w.is_zero() {
        return Err(IntegrabilityError::ZeroFunction);
    }
    Ok(lie_derivative_rf(field, w).checked_div(w).expect("nonzero"))
}

/// Exact check of `X(w0) + sum c_i X(w_i)/w_i = 0`.
pub fn verify_elementary_first_integral(
    field: &VectorField,
    expr: &ElementaryIntegralExpr,
) -> Result<bool, IntegrabilityError> {
    if expr.w0.vars() != field.vars() {
        return Err(IntegrabilityError::Context);
    }
    Ok(expr.derivative_along(field)?.is_zero())
}

#[derive(Clone, Debug, PartialEq)]
pub enum LogCoefficients {
    Solved { particular: Vec<Rat>, homogeneous: Vec<Vec<Rat>> },
    NoSolution,
}

/// All `c` in Q^p with `X(w0) + sum c_i X(w_i)/w_i = 0`, as an affine space.
///
/// Every term is brought over one common denominator (the product of the
/// distinct denominators) and the numerators are matched coefficientwise.
pub fn solve_log_coefficients(
    field: &VectorField,
    w0: &RatFunc,
    ws: &[RatFunc],
) -> Result<LogCoefficients, IntegrabilityError> {
    if w0.vars() != field.vars() {
        return Err(IntegrabilityError::Context);
    }
    let mut terms = vec![lie_derivative_rf(field, w0)];
    for w in ws {
        terms.push(log_derivative(field, w)?);
    }
    let mut common = Poly::one(field.vars());
    for t in &terms {
        if t.is_zero() || t.den().is_one() {
            continue;
        }
        if common.exact_div(t.den()).is_err() {
            common = &common * t.den();
        }
    }
    let numerators: Vec<Poly> = terms
        .iter()
        .map(|t| t.num() * &common.exact_div(t.den()).expect("common denominator"))
        .collect();

    let mut rows: Vec<Monomial> = numerators.iter().flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
    rows.sort_by(|a, b| b.cmp(a));
    rows.dedup();
    let index: HashMap<Monomial, usize> = rows.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let columns: Vec<Vec<Rat>> = numerators[1..].iter().map(|p| p.coefficients_in(&index).unwrap()).collect();
    let rhs: Vec<Rat> = numerators[0].coefficients_in(&index).unwrap().into_iter().map(|v| -v).collect();
    let m = QMatrix::from_columns(rows.len(), &columns);
    Ok(match solve_affine(&m, &rhs).expect("dimensions agree") {
        AffineResult::Solved(s) => {
            debug_assert!(s.particular.len() == ws.len());
            LogCoefficients::Solved { particular: s.particular, homogeneous: s.homogeneous }
        }
        AffineResult::Inconsistent { .. } => LogCoefficients::NoSolution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::sysparse::parse_ratfunc;

    fn shear() -> VectorField {
        VectorField::parse(&["x", "y"], &["1", "y"]).unwrap()
    }

    fn rf(f: &VectorField, s: &str) -> RatFunc {
        parse_ratfunc(s, f.vars()).unwrap()
    }

    #[test]
    fn solve_examples() {
        let x = shear();
        assert_eq!(
            solve_log_coefficients(&x, &rf(&x, "-x"), &[rf(&x, "y")]).unwrap(),
            LogCoefficients::Solved { particular: vec![rat(1)], homogeneous: vec![] }
        );
        assert_eq!(
            solve_log_coefficients(&x, &rf(&x, "x"), &[rf(&x, "y")]).unwrap(),
            LogCoefficients::Solved { particular: vec![rat(-1)], homogeneous: vec![] }
        );
        let d = VectorField::parse(&["x", "y"], &["x", "2*y"]).unwrap();
        let out = solve_log_coefficients(&d, &RatFunc::zero(d.vars()), &[rf(&d, "x"), rf(&d, "y")]).unwrap();
        assert_eq!(out, LogCoefficients::Solved { particular: vec![rat(0), rat(0)], homogeneous: vec![vec![rat(2), rat(-1)]] });
    }

    #[test]
    fn inconsistent_log_system() {
        let x = shear();
        assert_eq!(
            solve_log_coefficients(&x, &rf(&x, "x^2"), &[rf(&x, "y")]).unwrap(),
            LogCoefficients::NoSolution
        );
    }

    #[test]
    fn rational_log_arguments() {
        // X = (x, y): H = ln(x/y) is a first integral
        let lin = VectorField::parse(&["x", "y"], &["x", "y"]).unwrap();
        let out = solve_log_coefficients(&lin, &RatFunc::zero(lin.vars()), &[rf(&lin, "x/y"), rf(&lin, "x+y")]).unwrap();
        assert_eq!(out, LogCoefficients::Solved { particular: vec![rat(0), rat(0)], homogeneous: vec![vec![rat(1), rat(0)]] });
    }

    #[test]
    fn verify_examples() {
        let x = shear();
        let good = ElementaryIntegralExpr { w0: rf(&x, "-x"), terms: vec![(rat(1), rf(&x, "y"))] };
        assert!(verify_elementary_first_integral(&x, &good).unwrap());
        let bad = ElementaryIntegralExpr { w0: rf(&x, "x"), terms: vec![(rat(1), rf(&x, "y"))] };
        assert!(!verify_elementary_first_integral(&x, &bad).unwrap());
        let rot = VectorField::parse(&["x", "y"], &["y", "-x"]).unwrap();
        let log_free = ElementaryIntegralExpr { w0: rf(&rot, "x^2 + y^2"), terms: vec![] };
        assert!(verify_elementary_first_integral(&rot, &log_free).unwrap());
    }

    #[test]
    fn zero_log_argument_rejected() {
        let x = shear();
        let e = ElementaryIntegralExpr { w0: rf(&x, "x"), terms: vec![(rat(1), RatFunc::zero(x.vars()))] };
        assert_eq!(verify_elementary_first_integral(&x, &e), Err(IntegrabilityError::ZeroFunction));
    }
}
