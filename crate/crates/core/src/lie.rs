//! Lie derivative along a vector field, divergence, Jacobian matrices and a
//! probabilistic functional-independence test.
//!
//! All functions expect their arguments to share the field's variable
//! context and panic otherwise.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{Poly, Rat, RatFunc};
use crate::linalg::{rank, QMatrix};
use crate::sysparse::VectorField;

/// `X(f) = sum_i P_i * df/dx_i`.
pub fn lie_derivative(field: &VectorField, f: &Poly) -> Poly {
    assert_eq!(field.vars(), f.vars(), "polynomial context differs from the field");
    let mut acc = Poly::zero(field.vars());
    for (i, p) in field.components().iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let d = f.diff(i);
        if !d.is_zero() {
            acc = &acc + &(p * &d);
        }
    }
    acc
}

/// `X(n/d) = (d X(n) - n X(d)) / d^2`.
pub fn lie_derivative_rf(field: &VectorField, r: &RatFunc) -> RatFunc {
    if r.den().is_constant() {
        let c = r.den().constant_value().expect("constant denominator");
        return RatFunc::from_poly(lie_derivative(field, r.num()).scale(&c.recip()));
    }
    let num = &(r.den() * &lie_derivative(field, r.num())) - &(r.num() * &lie_derivative(field, r.den()));
    RatFunc::new(num, r.den() * r.den()).expect("nonzero denominator")
}

/// `sum_i dP_i/dx_i`.
pub fn divergence(field: &VectorField) -> Poly {
    field
        .components()
        .iter()
        .enumerate()
        .fold(Poly::zero(field.vars()), |acc, (i, p)| &acc + &p.diff(i))
}

/// Dense matrix of rational functions, row-major.
#[derive(Clone, PartialEq)]
pub struct RfMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RatFunc>,
}

impl RfMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<RatFunc>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        RfMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.entries[i * self.cols + j]
    }

    /// Exact evaluation; `None` if any entry has a vanishing denominator.
    pub fn eval(&self, point: &[Rat]) -> Option<QMatrix> {
        let mut m = QMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self.get(i, j).eval(point)?;
            }
        }
        Some(m)
    }
}

impl fmt::Debug for RfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| {
                (0..self.cols).map(|j| self.get(i, j).to_string()).collect::<Vec<_>>()
            }))
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("need between 1 and {max} functions, got {got}")]
    Count { got: usize, max: usize },
    #[error("function {0} uses a different variable context")]
    Context(usize),
}

fn check_functions(h: &[RatFunc]) -> Result<(), LieError> {
    let n = h.first().map_or(0, |f| f.vars().len());
    if h.is_empty() || h.len() > n {
        return Err(LieError::Count { got: h.len(), max: n });
    }
    if let Some(i) = h.iter().position(|f| f.vars() != h[0].vars()) {
        return Err(LieError::Context(i));
    }
    Ok(())
}

/// Entry `(j, i)` is `dH_j/dx_i`: rows are functions, columns variables.
pub fn jacobian_matrix(h: &[RatFunc]) -> Result<RfMatrix, LieError> {
    check_functions(h)?;
    let n = h[0].vars().len();
    let entries = h.iter().flat_map(|f| (0..n).map(move |i| f.diff(i))).collect();
    Ok(RfMatrix::new(h.len(), n, entries))
}

/// Outcome of [`functionally_independent`]. `Independent` is exact: the
/// Jacobian has full row rank at `point`. `ProbablyDependent` only means
/// no such point was found among the sampled ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Independence {
    Independent { point: Vec<Rat> },
    ProbablyDependent { attempts: usize },
}

/// Evaluated points per verdict.
pub const INDEPENDENCE_ATTEMPTS: usize = 8;
/// Sample coordinates are integers in `[-SAMPLE_RADIUS, SAMPLE_RADIUS]`.
pub const SAMPLE_RADIUS: i64 = 1 << 16;
const MAX_DRAWS: usize = 64 * INDEPENDENCE_ATTEMPTS;

/// Randomized rank test of the Jacobian at integer points, deterministic in `seed`.
/// Points where any denominator vanishes are skipped.
pub fn functionally_independent(h: &[RatFunc], seed: u64) -> Result<Independence, LieError> {
    let jac = jacobian_matrix(h)?;
    let n = jac.cols();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0;
    for _ in 0..MAX_DRAWS {
        if attempts == INDEPENDENCE_ATTEMPTS {
            break;
        }
        let point: Vec<Rat> = (0..n)
            .map(|_| Rat::from_integer(BigInt::from(rng.gen_range(-SAMPLE_RADIUS..=SAMPLE_RADIUS))))
            .collect();
        if h.iter().any(|f| f.den().eval(&point).is_zero()) {
            continue;
        }
        let Some(m) = jac.eval(&point) else { continue };
        attempts += 1;
        if rank(&m) == h.len() {
            return Ok(Independence::Independent { point });
        }
    }
    Ok(Independence::ProbablyDependent { attempts })
}
