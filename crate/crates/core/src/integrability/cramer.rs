use crate::arith::{Poly, RatFunc};
use crate::lie::{functionally_independent, lie_derivative_rf, Independence};
use crate::sysparse::VectorField;

use super::multiplier::{verify_jacobian_multiplier, MultiplierVerdict};
use super::IntegrabilityError;

/// Determinant data behind a Jacobian multiplier recovered from `n - 1`
/// rational first integrals.
///
/// With `p` the pivot variable, `lambda` is the Jacobian determinant of the
/// integrals over the remaining variables (in their declared order), and
/// `lambdas[i]` is the same determinant with the column of variable
/// `lambda_vars[i]` replaced by the pivot column. Then `h = P_p / lambda`,
/// `h * lambdas[i] = -P_s` for `s = lambda_vars[i]`, and `J = 1/h`
/// satisfies `X(J) = -J div X`.
#[derive(Clone, Debug, PartialEq)]
pub struct CramerData {
    pub integrals: Vec<RatFunc>,
    pub pivot: usize,
    pub lambda: RatFunc,
    pub lambda_vars: Vec<usize>,
    pub lambdas: Vec<RatFunc>,
    pub h: RatFunc,
    pub multiplier: RatFunc,
    /// The multiplier identity holds but `J` is constant.
    pub constant_warning: bool,
    pub independence: Option<Independence>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CramerOutcome {
    Data(CramerData),
    /// Every pivot gives a vanishing determinant: the integrals are
    /// functionally dependent.
    DegenerateInput,
}

/// Rows of Jacobian numerators over a per-row denominator:
/// `dH_j/dx_i = rows[j][i] / dens[j]`.
struct JacobianNumerators {
    rows: Vec<Vec<Poly>>,
    dens: Vec<Poly>,
}

fn jacobian_numerators(h: &[RatFunc], nvars: usize) -> JacobianNumerators {
    let mut rows = Vec::with_capacity(h.len());
    let mut dens = Vec::with_capacity(h.len());
    for f in h {
        let (n, d) = (f.num(), f.den());
        if d.is_one() {
            rows.push((0..nvars).map(|i| n.diff(i)).collect());
            dens.push(d.clone());
        } else {
            rows.push((0..nvars).map(|i| &(d * &n.diff(i)) - &(n * &d.diff(i))).collect());
            dens.push(d * d);
        }
    }
    JacobianNumerators { rows, dens }
}

impl JacobianNumerators {
    fn common_den(&self, vars: &crate::arith::Vars) -> Poly {
        self.dens.iter().fold(Poly::one(vars), |acc, d| &acc * d)
    }

    /// Numerator determinant over `cols`, optionally with the column at
    /// position `replace` swapped for variable `with`.
    fn minor(&self, cols: &[usize], replace: Option<(usize, usize)>, vars: &crate::arith::Vars) -> Poly {
        let m: Vec<Vec<Poly>> = self
            .rows
            .iter()
            .map(|row| {
                cols.iter()
                    .enumerate()
                    .map(|(pos, &c)| match replace {
                        Some((at, with)) if at == pos => row[with].clone(),
                        _ => row[c].clone(),
                    })
                    .collect()
            })
            .collect();
        poly_det(m, vars)
    }
}

/// Fraction-free (Bareiss) determinant over the polynomial ring.
fn poly_det(mut m: Vec<Vec<Poly>>, vars: &crate::arith::Vars) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(vars);
    }
    let mut negate = false;
    let mut prev = Poly::one(vars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return Poly::zero(vars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn check_integrals(field: &VectorField, h: &[RatFunc]) -> Result<(), IntegrabilityError> {
    let n = field.dim();
    if h.len() + 1 != n {
        return Err(IntegrabilityError::Length { expected: n - 1, found: h.len() });
    }
    if h.iter().any(|f| f.vars() != field.vars()) {
        return Err(IntegrabilityError::Context);
    }
    Ok(())
}

/// Recovers a Jacobian multiplier from `n - 1` rational first integrals.
///
/// Pivots are tried from the last variable down to the first; the first one
/// with a nonzero determinant is used. All identities of [`CramerData`] are
/// checked exactly before returning.
pub fn cramer_multiplier(
    field: &VectorField,
    h: &[RatFunc],
    seed: u64,
) -> Result<CramerOutcome, IntegrabilityError> {
    check_integrals(field, h)?;
    for (index, f) in h.iter().enumerate() {
        let residual = lie_derivative_rf(field, f);
        if !residual.is_zero() {
            return Err(IntegrabilityError::NotFirstIntegral { index, residual });
        }
    }
    let independence = if h.is_empty() {
        None
    } else {
        Some(functionally_independent(h, seed).expect("validated integrals"))
    };
    let vars = field.vars();
    let n = field.dim();
    let jac = jacobian_numerators(h, n);
    let common = jac.common_den(vars);

    for pivot in (0..n).rev() {
        let cols: Vec<usize> = (0..n).filter(|&c| c != pivot).collect();
        let det = jac.minor(&cols, None, vars);
        if det.is_zero() {
            continue;
        }
        let p_pivot = field.component(pivot);
        if p_pivot.is_zero() {
            return Err(IntegrabilityError::Invariant("pivot component vanishes with nonzero determinant".into()));
        }
        let lambda = RatFunc::new(det.clone(), common.clone()).expect("nonzero");
        let lambdas: Vec<RatFunc> = (0..cols.len())
            .map(|pos| RatFunc::new(jac.minor(&cols, Some((pos, pivot)), vars), common.clone()).expect("nonzero"))
            .collect();
        let hfun = RatFunc::new(p_pivot * &common, det).expect("nonzero determinant");
        let multiplier = hfun.inv().expect("nonzero h");

        let p_rf = RatFunc::from_poly(p_pivot.clone());
        if hfun.checked_mul(&lambda).unwrap() != p_rf {
            return Err(IntegrabilityError::Invariant("h * Lambda != P_pivot".into()));
        }
        for (&s, ls) in cols.iter().zip(&lambdas) {
            if hfun.checked_mul(ls).unwrap() != RatFunc::from_poly(-field.component(s)) {
                return Err(IntegrabilityError::Invariant(format!("h * Lambda_{s} != -P_{s}")));
            }
        }
        if !multiplier.checked_mul(&hfun).unwrap().is_one() {
            return Err(IntegrabilityError::Invariant("J * h != 1".into()));
        }
        let constant_warning = match verify_jacobian_multiplier(field, &multiplier)? {
            MultiplierVerdict::Verified => false,
            MultiplierVerdict::ConstantWarning => true,
            MultiplierVerdict::Failed { residual } => {
                return Err(IntegrabilityError::Invariant(format!("X(J) + J div X = {residual}")));
            }
        };
        return Ok(CramerOutcome::Data(CramerData {
            integrals: h.to_vec(),
            pivot,
            lambda,
            lambda_vars: cols,
            lambdas,
            h: hfun,
            multiplier,
            constant_warning,
            independence,
        }));
    }
    Ok(CramerOutcome::DegenerateInput)
}

/// `sum_{s != p} d_s Lambda_s - d_p Lambda` for the pivot `p`, computed
/// exactly. It vanishes identically for any integrals; the function exists
/// to check that on concrete inputs.
///
/// Both determinants are kept over the common denominator `Q` of the
/// Jacobian rows, so the residual is `R / Q^2` with
/// `R = sum_s (Q d_s M_s - M_s d_s Q) - (Q d_p M - M d_p Q)`.
pub fn euler_identity_residual(h: &[RatFunc], pivot: usize) -> Result<RatFunc, IntegrabilityError> {
    let vars = h.first().ok_or(IntegrabilityError::Length { expected: 1, found: 0 })?.vars().clone();
    let n = vars.len();
    if h.len() + 1 != n {
        return Err(IntegrabilityError::Length { expected: n - 1, found: h.len() });
    }
    if h.iter().any(|f| f.vars() != &vars) {
        return Err(IntegrabilityError::Context);
    }
    if pivot >= n {
        return Err(IntegrabilityError::Pivot(pivot));
    }
    let jac = jacobian_numerators(h, n);
    let q = jac.common_den(&vars);
    let cols: Vec<usize> = (0..n).filter(|&c| c != pivot).collect();
    let quotient_rule_num = |m: &Poly, var: usize| &(&q * &m.diff(var)) - &(m * &q.diff(var));

    let m = jac.minor(&cols, None, &vars);
    let mut acc = -quotient_rule_num(&m, pivot);
    for (pos, &s) in cols.iter().enumerate() {
        let ms = jac.minor(&cols, Some((pos, pivot)), &vars);
        acc = &acc + &quotient_rule_num(&ms, s);
    }
    Ok(RatFunc::new(acc, &q * &q).expect("nonzero denominator"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, Vars};
    use crate::sysparse::parse_ratfunc;

    fn rf(v: &Vars, s: &str) -> RatFunc {
        parse_ratfunc(s, v).unwrap()
    }

    fn data(o: CramerOutcome) -> CramerData {
        match o {
            CramerOutcome::Data(d) => d,
            CramerOutcome::DegenerateInput => panic!("degenerate"),
        }
    }

    #[test]
    fn diag3() {
        let x = VectorField::parse(&["x", "y", "z"], &["x", "y", "z"]).unwrap();
        let v = x.vars();
        let d = data(cramer_multiplier(&x, &[rf(v, "x/y"), rf(v, "y/z")], 0).unwrap());
        assert_eq!(d.pivot, 2);
        assert_eq!(d.lambda.to_string(), "1/(y*z)");
        assert_eq!(d.h.to_string(), "y*z^2");
        assert_eq!(d.multiplier.to_string(), "1/(y*z^2)");
        assert_eq!(d.lambdas[0], rf(v, "-x/(y*z^2)"));
        assert!(!d.constant_warning);
    }

    #[test]
    fn planar() {
        let x = VectorField::parse(&["x", "y"], &["x", "y"]).unwrap();
        let v = x.vars();
        let d = data(cramer_multiplier(&x, &[rf(v, "x/y")], 0).unwrap());
        assert_eq!(d.lambda.to_string(), "1/y");
        assert_eq!(d.h.to_string(), "y^2");
        assert_eq!(d.multiplier.to_string(), "1/y^2");
    }

    #[test]
    fn rotation_gives_constant_multiplier() {
        let x = VectorField::parse(&["x", "y"], &["y", "-x"]).unwrap();
        let v = x.vars();
        let d = data(cramer_multiplier(&x, &[rf(v, "x^2 + y^2")], 0).unwrap());
        assert_eq!(d.lambda.to_string(), "2*x");
        assert_eq!(d.h.constant_value(), Some(crate::arith::rat_frac(-1, 2)));
        assert_eq!(d.multiplier.constant_value(), Some(rat(-2)));
        assert!(d.constant_warning);
    }

    #[test]
    fn pivot_falls_back_when_last_column_degenerates() {
        // Neither integral depends on y, so the (x, y) minor vanishes.
        let x = VectorField::parse(&["x", "y", "z"], &["0", "1", "0"]).unwrap();
        let v = x.vars();
        let d = data(cramer_multiplier(&x, &[rf(v, "x/z"), rf(v, "x*z")], 3).unwrap());
        assert_eq!(d.pivot, 1);
        assert_eq!(d.lambda_vars, vec![0, 2]);
    }

    #[test]
    fn errors_and_degenerate_input() {
        let x = VectorField::parse(&["x", "y", "z"], &["x", "y", "z"]).unwrap();
        let v = x.vars();
        assert!(matches!(
            cramer_multiplier(&x, &[rf(v, "x/y")], 0),
            Err(IntegrabilityError::Length { expected: 2, found: 1 })
        ));
        assert!(matches!(
            cramer_multiplier(&x, &[rf(v, "x"), rf(v, "y/z")], 0),
            Err(IntegrabilityError::NotFirstIntegral { index: 0, .. })
        ));
        assert_eq!(
            cramer_multiplier(&x, &[rf(v, "x/y"), rf(v, "x^2/y^2")], 0).unwrap(),
            CramerOutcome::DegenerateInput
        );
    }

    #[test]
    fn euler_examples() {
        let v = Vars::new(["x", "y", "z"]);
        assert!(euler_identity_residual(&[rf(&v, "x/y"), rf(&v, "y/z")], 2).unwrap().is_zero());
        for p in 0..3 {
            assert!(euler_identity_residual(&[rf(&v, "x+y+z"), rf(&v, "x-y")], p).unwrap().is_zero());
        }
        assert_eq!(euler_identity_residual(&[rf(&v, "x")], 0), Err(IntegrabilityError::Length { expected: 2, found: 1 }));
        assert_eq!(euler_identity_residual(&[rf(&v, "x"), rf(&v, "y")], 3), Err(IntegrabilityError::Pivot(3)));
    }

    #[test]
    fn bareiss_determinant() {
        let v = Vars::new(["x", "y"]);
        let p = |s: &str| crate::sysparse::parse_poly(s, &v).unwrap();
        let m = vec![
            vec![p("0"), p("x"), p("1")],
            vec![p("y"), p("0"), p("x")],
            vec![p("1"), p("y"), p("0")],
        ];
        // 0*(0 - xy) - x*(0 - x) + 1*(y^2 - 0) = x^2 + y^2
        assert_eq!(poly_det(m, &v), p("x^2 + y^2"));
    }
}
