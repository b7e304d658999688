use std::collections::HashMap;

use num_integer::binomial;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{is_integer, Monomial, Poly, Rat, RatFunc};
use crate::darboux::DarbouxPair;
use crate::lie::{divergence, lie_derivative, lie_derivative_rf};
use crate::linalg::{nullspace, solve_affine, AffineResult, QMatrix};
use crate::sysparse::VectorField;

use super::IntegrabilityError;

/// Exponents `l` with `sum l_i k_i = -div X`; the multiplier is
/// `prod f_i^l_i` and is materialized only for integer exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierCertificate {
    pub pairs: Vec<DarbouxPair>,
    pub exponents: Vec<Rat>,
    /// Basis of the cofactor relations `sum l_i k_i = 0`; each direction is
    /// a Darboux first integral.
    pub homogeneous: Vec<Vec<Rat>>,
    pub multiplier: Option<RatFunc>,
    /// The multiplier identity was confirmed exactly, through `J` itself
    /// when materialized and through logarithmic derivatives otherwise.
    pub residual_checked: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MultiplierOutcome {
    Certificate(MultiplierCertificate),
    /// The cofactor equations are inconsistent; `monomial` is the first
    /// coefficient (in descending order) that cannot be matched.
    NoSolution { monomial: Monomial },
}

/// Exponents `lambda` with `sum lambda_i k_i = 0`, giving the first integral
/// `H = sum lambda_i ln f_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct FirstIntegralCertificate {
    pub pairs: Vec<DarbouxPair>,
    pub lambdas: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MultiplierVerdict {
    Verified,
    Failed { residual: RatFunc },
    /// The identity holds but `J` is constant.
    ConstantWarning,
}

fn check_pairs(field: &VectorField, pairs: &[DarbouxPair]) -> Result<(), IntegrabilityError> {
    for (index, p) in pairs.iter().enumerate() {
        if p.f.vars() != field.vars() || p.k.vars() != field.vars() {
            return Err(IntegrabilityError::Context);
        }
        if p.f.is_constant() || lie_derivative(field, &p.f) != &p.k * &p.f {
            return Err(IntegrabilityError::UnverifiedPair { index });
        }
    }
    Ok(())
}

/// Coefficient matrix of the cofactors (one column per pair) over the
/// monomials of the cofactors and `extra`, rows in descending order.
fn cofactor_system(pairs: &[DarbouxPair], extra: &Poly) -> (QMatrix, Vec<Rat>, Vec<Monomial>) {
    let mut rows: Vec<Monomial> = pairs
        .iter()
        .flat_map(|p| p.k.terms().map(|(m, _)| m.clone()))
        .chain(extra.terms().map(|(m, _)| m.clone()))
        .collect();
    rows.sort_by(|a, b| b.cmp(a));
    rows.dedup();
    let index: HashMap<Monomial, usize> = rows.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let columns: Vec<Vec<Rat>> = pairs.iter().map(|p| p.k.coefficients_in(&index).unwrap()).collect();
    let rhs = extra.coefficients_in(&index).unwrap();
    (QMatrix::from_columns(rows.len(), &columns), rhs, rows)
}

/// Solves `sum l_i k_i = -div X`.
///
/// When the solution set is a line or larger, the representative with the
/// smallest max-norm is returned (ties broken lexicographically).
pub fn multiplier_exponents(
    field: &VectorField,
    pairs: &[DarbouxPair],
) -> Result<MultiplierOutcome, IntegrabilityError> {
    check_pairs(field, pairs)?;
    let div = divergence(field);
    let (m, rhs, rows) = cofactor_system(pairs, &-&div);
    let sol = match solve_affine(&m, &rhs).expect("dimensions agree") {
        AffineResult::Solved(s) => s,
        AffineResult::Inconsistent { row } => {
            return Ok(MultiplierOutcome::NoSolution { monomial: rows[row].clone() });
        }
    };
    let exponents = min_max_norm(&sol.particular, &sol.homogeneous);

    let multiplier = if exponents.iter().all(is_integer) {
        Some(materialize(field, pairs, &exponents))
    } else {
        None
    };
    let residual_checked = match &multiplier {
        Some(j) => !matches!(verify_jacobian_multiplier(field, j)?, MultiplierVerdict::Failed { .. }),
        None => verify_log_derivative_multiplier(field, pairs, &exponents)?,
    };
    if !residual_checked {
        return Err(IntegrabilityError::Invariant("synthesized multiplier fails the multiplier identity".into()));
    }
    Ok(MultiplierOutcome::Certificate(MultiplierCertificate {
        pairs: pairs.to_vec(),
        exponents,
        homogeneous: sol.homogeneous,
        multiplier,
        residual_checked,
    }))
}

fn materialize(field: &VectorField, pairs: &[DarbouxPair], exponents: &[Rat]) -> RatFunc {
    let mut num = Poly::one(field.vars());
    let mut den = Poly::one(field.vars());
    for (p, l) in pairs.iter().zip(exponents) {
        let e = l.to_integer().to_i64().expect("exponent fits in i64");
        let power = p.f.pow(e.unsigned_abs() as u32);
        if e > 0 {
            num = &num * &power;
        } else if e < 0 {
            den = &den * &power;
        }
    }
    RatFunc::new(num, den).expect("product of nonzero polynomials")
}

/// Limit on the number of vertex candidates examined by [`min_max_norm`].
const VERTEX_BUDGET: u64 = 200_000;

/// Point of `particular + span(directions)` minimizing the max-norm, with
/// lexicographic tie-breaking.
///
/// The minimization is the linear program `min z` subject to
/// `-z <= l_i <= z`; its optimum is attained at a vertex, which is found by
/// enumerating every choice of `dim + 1` active constraints. Falls back to
/// `particular` when the enumeration would exceed [`VERTEX_BUDGET`].
fn min_max_norm(particular: &[Rat], directions: &[Vec<Rat>]) -> Vec<Rat> {
    let m = particular.len();
    let h = directions.len();
    if h == 0 {
        return particular.to_vec();
    }
    let ncons = 2 * m;
    if binomial(ncons as u64, (h + 1) as u64) > VERTEX_BUDGET {
        return particular.to_vec();
    }
    // constraint rows over (t_1..t_h, z): sign * (p_i + sum_j t_j d_ji) - z <= 0
    let cons: Vec<(Vec<Rat>, Rat)> = (0..m)
        .flat_map(|i| {
            [Rat::from_integer(1.into()), Rat::from_integer((-1).into())].map(|sign| {
                let mut row: Vec<Rat> = directions.iter().map(|d| &sign * &d[i]).collect();
                row.push(Rat::from_integer((-1).into()));
                (row, -(&sign * &particular[i]))
            })
        })
        .collect();
    let point_of = |t: &[Rat]| -> Vec<Rat> {
        (0..m)
            .map(|i| &particular[i] + directions.iter().zip(t).map(|(d, tj)| &d[i] * tj).sum::<Rat>())
            .collect()
    };
    let mut best: Option<(Rat, Vec<Rat>)> = None;
    let mut choose: Vec<usize> = (0..=h).collect();
    loop {
        let a = QMatrix::from_rows(choose.iter().map(|&c| cons[c].0.clone()).collect());
        let b: Vec<Rat> = choose.iter().map(|&c| cons[c].1.clone()).collect();
        if let AffineResult::Solved(s) = solve_affine(&a, &b).expect("square system") {
            if s.homogeneous.is_empty() {
                let (t, z) = s.particular.split_at(h);
                let z = z[0].clone();
                let l = point_of(t);
                let feasible = l.iter().all(|v| v.abs() <= z);
                if feasible {
                    let better = match &best {
                        None => true,
                        Some((bz, bl)) => z < *bz || (z == *bz && l < *bl),
                    };
                    if better {
                        best = Some((z, l));
                    }
                }
            }
        }
        if !next_combination(&mut choose, ncons) {
            break;
        }
    }
    best.map(|(_, l)| l).unwrap_or_else(|| particular.to_vec())
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Canonical basis of the cofactor relations `sum lambda_i k_i = 0`. Each
/// certificate is checked against `sum lambda_i X(f_i)/f_i = 0` as an
/// identity of rational functions.
pub fn first_integral_exponents(
    field: &VectorField,
    pairs: &[DarbouxPair],
) -> Result<Vec<FirstIntegralCertificate>, IntegrabilityError> {
    check_pairs(field, pairs)?;
    let (m, _, _) = cofactor_system(pairs, &Poly::zero(field.vars()));
    let mut out = Vec::new();
    for lambdas in nullspace(&m) {
        let sum = log_derivative_sum(field, pairs, &lambdas);
        if !sum.is_zero() {
            return Err(IntegrabilityError::Invariant(format!("log-derivative sum is {sum}")));
        }
        out.push(FirstIntegralCertificate { pairs: pairs.to_vec(), lambdas });
    }
    Ok(out)
}

/// `sum c_i X(f_i)/f_i` as a rational function.
fn log_derivative_sum(field: &VectorField, pairs: &[DarbouxPair], coeffs: &[Rat]) -> RatFunc {
    let mut acc = RatFunc::zero(field.vars());
    for (p, c) in pairs.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        let term = RatFunc::new(lie_derivative(field, &p.f), p.f.clone()).expect("nonzero f");
        acc = acc.checked_add(&term.scale(c)).expect("shared context");
    }
    acc
}

/// Residual `X(J) + J div X`, classified.
pub fn verify_jacobian_multiplier(field: &VectorField, j: &RatFunc) -> Result<MultiplierVerdict, IntegrabilityError> {
    if j.vars() != field.vars() {
        return Err(IntegrabilityError::Context);
    }
    if j.is_zero() {
        return Err(IntegrabilityError::ZeroFunction);
    }
    let residual = lie_derivative_rf(field, j)
        .checked_add(&j.mul_poly(&divergence(field)))
        .expect("shared context");
    Ok(if !residual.is_zero() {
        MultiplierVerdict::Failed { residual }
    } else if j.is_constant() {
        MultiplierVerdict::ConstantWarning
    } else {
        MultiplierVerdict::Verified
    })
}

/// `sum l_i X(f_i)/f_i + div X == 0`, valid for fractional exponents.
pub fn verify_log_derivative_multiplier(
    field: &VectorField,
    pairs: &[DarbouxPair],
    exponents: &[Rat],
) -> Result<bool, IntegrabilityError> {
    if pairs.len() != exponents.len() {
        return Err(IntegrabilityError::Length { expected: pairs.len(), found: exponents.len() });
    }
    check_pairs(field, pairs)?;
    let total = log_derivative_sum(field, pairs, exponents)
        .checked_add(&RatFunc::from_poly(divergence(field)))
        .expect("shared context");
    Ok(total.is_zero())
}
