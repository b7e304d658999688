//! Darboux polynomials: verification and linear-algebra searches.
//!
//! A nonconstant `f` is a Darboux polynomial of `X` when `X(f) = k f` for a
//! polynomial cofactor `k`. Comparing degrees forces `deg k <= d - 1`, where
//! `d` is the largest component degree of `X`.

use std::collections::HashMap;

use num_traits::Zero;

use crate::arith::{count_monomials_up_to, monomials_up_to, ArithError, Monomial, Poly, Rat};
use crate::lie::lie_derivative;
use crate::linalg::{
    char_poly, nullspace, rational_roots_with_multiplicity, solve_square, span_basis, QMatrix,
};
use crate::sysparse::VectorField;

/// Largest monomial basis a search will assemble.
pub const BASIS_CAP: usize = 5000;

/// A Darboux polynomial together with its cofactor: `X(f) = k f`.
#[derive(Clone, Debug, PartialEq)]
pub struct DarbouxPair {
    pub f: Poly,
    pub k: Poly,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DarbouxCheck {
    Darboux(DarbouxPair),
    NotDarboux,
}

impl DarbouxCheck {
    pub fn pair(self) -> Option<DarbouxPair> {
        match self {
            DarbouxCheck::Darboux(p) => Some(p),
            DarbouxCheck::NotDarboux => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DarbouxError {
    #[error("a Darboux polynomial must be nonconstant")]
    ConstantPolynomial,
    #[error("polynomial uses a different variable context than the field")]
    Context,
    #[error("cofactor degree {degree} exceeds the bound {bound} (field degree minus one)")]
    CofactorDegree { degree: u32, bound: i64 },
    #[error("degree bound must be at least 1")]
    DegreeBound,
    #[error("monomial basis of size {size} exceeds the cap of {cap}")]
    BasisCap { size: u128, cap: usize },
}

/// Computes `X(f)` and divides by `f` exactly.
pub fn verify_darboux(field: &VectorField, f: &Poly) -> Result<DarbouxCheck, DarbouxError> {
    if f.vars() != field.vars() {
        return Err(DarbouxError::Context);
    }
    if f.is_constant() {
        return Err(DarbouxError::ConstantPolynomial);
    }
    let xf = lie_derivative(field, f);
    match xf.exact_div(f) {
        Ok(k) => {
            debug_assert!(k.total_degree().is_none_or(|dk| (dk as i64) < field.degree().max(1) as i64));
            Ok(DarbouxCheck::Darboux(DarbouxPair { f: f.clone(), k }))
        }
        Err(ArithError::NotDivisible) => Ok(DarbouxCheck::NotDarboux),
        Err(e) => unreachable!("division by a nonconstant polynomial failed: {e}"),
    }
}

fn cofactor_bound(field: &VectorField) -> i64 {
    field.degree() as i64 - 1
}

fn check_basis(field: &VectorField, degree: u32) -> Result<Vec<Monomial>, DarbouxError> {
    if degree < 1 {
        return Err(DarbouxError::DegreeBound);
    }
    let size = count_monomials_up_to(field.dim(), degree);
    if size > BASIS_CAP as u128 {
        return Err(DarbouxError::BasisCap { size, cap: BASIS_CAP });
    }
    Ok(monomials_up_to(field.dim(), degree))
}

/// Matrix of `a -> coeffs(X(f_a) - k f_a)` with `f_a = sum a_m m` over `basis`.
/// Rows follow `rows`, which must contain every monomial of every image.
fn operator_matrix(field: &VectorField, k: &Poly, basis: &[Monomial], rows: &[Monomial]) -> QMatrix {
    let index: HashMap<Monomial, usize> = rows.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let columns: Vec<Vec<Rat>> = basis
        .iter()
        .map(|m| {
            let mono = Poly::monomial(field.vars(), m.clone(), Rat::from_integer(1.into()));
            let image = &lie_derivative(field, &mono) - &(k * &mono);
            image.coefficients_in(&index).expect("image monomial outside the row set")
        })
        .collect();
    QMatrix::from_columns(rows.len(), &columns)
}

fn vector_to_poly(field: &VectorField, basis: &[Monomial], v: &[Rat]) -> Poly {
    Poly::from_terms(
        field.vars(),
        basis.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m.clone(), c.clone())),
    )
}

/// Canonical basis of the kernel modulo constants. Constants lie in the
/// kernel exactly when the cofactor is zero; the constant coordinate is then
/// dropped before re-spanning.
fn kernel_polys(field: &VectorField, basis: &[Monomial], kernel: Vec<Vec<Rat>>, cofactor_zero: bool) -> Vec<Poly> {
    let mut kernel = kernel;
    if cofactor_zero {
        let const_idx = basis.iter().position(Monomial::is_one).expect("basis contains 1");
        for v in kernel.iter_mut() {
            v[const_idx] = Rat::zero();
        }
        kernel.retain(|v| v.iter().any(|c| !c.is_zero()));
    }
    span_basis(&kernel, basis.len())
        .iter()
        .map(|v| vector_to_poly(field, basis, v))
        .collect()
}

/// All polynomials `f` with `deg f <= degree` and `X(f) = k f`, as a
/// canonical basis (constants excluded). Every returned polynomial is
/// re-verified with [`verify_darboux`].
pub fn search_given_cofactor(field: &VectorField, k: &Poly, degree: u32) -> Result<Vec<Poly>, DarbouxError> {
    if k.vars() != field.vars() {
        return Err(DarbouxError::Context);
    }
    let bound = cofactor_bound(field);
    if let Some(dk) = k.total_degree() {
        if dk as i64 > bound {
            return Err(DarbouxError::CofactorDegree { degree: dk, bound });
        }
    }
    let basis = check_basis(field, degree)?;
    let rows = monomials_up_to(field.dim(), degree + field.degree().saturating_sub(1));
    let m = operator_matrix(field, k, &basis, &rows);
    let polys = kernel_polys(field, &basis, nullspace(&m), k.is_zero());
    for f in &polys {
        let check = verify_darboux(field, f)?;
        assert!(
            matches!(&check, DarbouxCheck::Darboux(p) if &p.k == k),
            "search produced an unverified polynomial {f}"
        );
    }
    Ok(polys)
}

/// One verified constant cofactor and its kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchHit {
    pub cofactor: Rat,
    pub kernel: Vec<Poly>,
}

impl SearchHit {
    pub fn pairs(&self, field: &VectorField) -> Vec<DarbouxPair> {
        self.kernel
            .iter()
            .map(|f| DarbouxPair { f: f.clone(), k: Poly::constant(field.vars(), self.cofactor.clone()) })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchReport {
    pub degree_bound: u32,
    /// Sorted by cofactor, ascending.
    pub hits: Vec<SearchHit>,
    /// Rational eigenvalues of the restricted operator whose verified kernel
    /// was empty (after removing constants).
    pub rejected_candidates: Vec<Rat>,
    /// Degree of the part of the restricted characteristic polynomial without
    /// rational roots.
    pub spectrum_remainder_degree: usize,
}

/// Finds every rational `c` admitting a nonconstant `f`, `deg f <= degree`,
/// with `X(f) = c f`.
///
/// With `V` the polynomials of degree `<= degree`, the map `f -> X(f)` is
/// split into rows inside `V` (block `A`) and rows above it (block `B`).
/// Solutions lie in `W = ker B`; restricting `A` to `W` through the basis
/// matrix `K` gives `S = (K^T K)^-1 K^T A K`, and every admissible `c` is a
/// rational eigenvalue of `S`. Each candidate is confirmed on the stacked
/// system `[B; A - cI]`.
pub fn search_constant_cofactor(field: &VectorField, degree: u32) -> Result<SearchReport, DarbouxError> {
    let basis = check_basis(field, degree)?;
    let upper = monomials_up_to(field.dim(), degree + field.degree().saturating_sub(1));
    let zero = Poly::zero(field.vars());
    let full = operator_matrix(field, &zero, &basis, &upper);
    let row_of: HashMap<&Monomial, usize> = upper.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let a = full.select_rows(&basis.iter().map(|m| row_of[m]).collect::<Vec<_>>());
    let high: Vec<usize> = (0..upper.len()).filter(|&i| upper[i].degree() > degree).collect();
    let b = full.select_rows(&high);

    let w_basis = if high.is_empty() {
        (0..basis.len())
            .map(|i| (0..basis.len()).map(|j| if i == j { Rat::from_integer(1.into()) } else { Rat::zero() }).collect())
            .collect()
    } else {
        nullspace(&b)
    };
    let mut report = SearchReport {
        degree_bound: degree,
        hits: Vec::new(),
        rejected_candidates: Vec::new(),
        spectrum_remainder_degree: 0,
    };
    if w_basis.is_empty() {
        return Ok(report);
    }
    let k = QMatrix::from_columns(basis.len(), &w_basis);
    let kt = k.transpose();
    let s = solve_square(&kt.mul(&k), &kt.mul(&a).mul(&k)).expect("kernel basis has full column rank");
    let cp = char_poly(&s).expect("square");
    let roots = rational_roots_with_multiplicity(&cp).expect("characteristic polynomial is monic");
    report.spectrum_remainder_degree = cp.degree() - roots.iter().map(|r| r.multiplicity).sum::<usize>();

    let n = basis.len();
    for r in roots {
        let c = r.root;
        let shifted = a.add(&QMatrix::identity(n).scale(&-c.clone()));
        let stacked = b.vstack(&shifted);
        let kernel = kernel_polys(field, &basis, nullspace(&stacked), c.is_zero());
        let cofactor = Poly::constant(field.vars(), c.clone());
        for f in &kernel {
            let check = verify_darboux(field, f)?;
            assert!(
                matches!(&check, DarbouxCheck::Darboux(p) if p.k == cofactor),
                "eigen search produced an unverified polynomial {f}"
            );
        }
        if kernel.is_empty() {
            report.rejected_candidates.push(c);
        } else {
            report.hits.push(SearchHit { cofactor: c, kernel });
        }
    }
    report.hits.sort_by(|x, y| x.cofactor.cmp(&y.cofactor));
    Ok(report)
}
