//! Random inputs shared by the integration tests. Everything is driven by a
//! seeded ChaCha generator so failures reproduce.

#![allow(dead_code)]

use std::path::PathBuf;

use darbkit_core::arith::{monomials_up_to, rat, rat_frac, Monomial, Poly, Rat, RatFunc, Vars};
use darbkit_core::{parse_system, QMatrix, SystemSpec, VectorField};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture_system(name: &str) -> SystemSpec {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/systems").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_system(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn vars(n: usize) -> Vars {
    Vars::new(["x", "y", "z", "w"].into_iter().take(n))
}

pub fn small_rat(rng: &mut TestRng) -> Rat {
    rat_frac(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

pub fn nonzero_rat(rng: &mut TestRng) -> Rat {
    loop {
        let r = small_rat(rng);
        if r != rat(0) {
            return r;
        }
    }
}

/// Up to `terms` random monomials of degree `<= degree`.
pub fn poly(rng: &mut TestRng, v: &Vars, degree: u32, terms: usize) -> Poly {
    let basis = monomials_up_to(v.len(), degree);
    let picks: Vec<(Monomial, Rat)> = (0..terms)
        .map(|_| (basis[rng.gen_range(0..basis.len())].clone(), small_rat(rng)))
        .collect();
    Poly::from_terms(v, picks)
}

pub fn nonzero_poly(rng: &mut TestRng, v: &Vars, degree: u32, terms: usize) -> Poly {
    loop {
        let p = poly(rng, v, degree, terms);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn ratfunc(rng: &mut TestRng, v: &Vars, degree: u32) -> RatFunc {
    let num = nonzero_poly(rng, v, degree, 3);
    let den = nonzero_poly(rng, v, degree, 2);
    RatFunc::new(num, den).unwrap()
}

pub fn nonconstant_ratfunc(rng: &mut TestRng, v: &Vars, degree: u32) -> RatFunc {
    loop {
        let r = ratfunc(rng, v, degree);
        if !r.is_constant() {
            return r;
        }
    }
}

pub fn field(rng: &mut TestRng, v: &Vars, degree: u32) -> VectorField {
    loop {
        let comps: Vec<Poly> = (0..v.len()).map(|_| poly(rng, v, degree, 4)).collect();
        if let Ok(f) = VectorField::new(v, comps) {
            return f;
        }
    }
}

pub fn int_matrix(rng: &mut TestRng, rows: usize, cols: usize, bound: i64) -> QMatrix {
    QMatrix::from_rows((0..rows).map(|_| (0..cols).map(|_| rat(rng.gen_range(-bound..=bound))).collect()).collect())
}

/// `p(subs_1, ..., subs_n)`.
pub fn compose(p: &Poly, subs: &[Poly]) -> Poly {
    let v = subs[0].vars().clone();
    let mut acc = Poly::zero(&v);
    for (m, c) in p.terms() {
        let mut term = Poly::constant(&v, c.clone());
        for (s, &e) in subs.iter().zip(m.exponents()) {
            term = &term * &s.pow(e);
        }
        acc = &acc + &term;
    }
    acc
}

/// Random integer matrix with determinant 1 and its inverse, built from
/// elementary row operations.
pub fn unimodular(rng: &mut TestRng, n: usize) -> (QMatrix, QMatrix) {
    let mut t = QMatrix::identity(n);
    let mut inv = QMatrix::identity(n);
    for _ in 0..2 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let k = rng.gen_range(-2..=2i64);
        let elementary = |entry: i64| {
            let mut rows: Vec<Vec<Rat>> = (0..n).map(|r| (0..n).map(|c| rat((r == c) as i64)).collect()).collect();
            rows[i][j] = rat(entry);
            QMatrix::from_rows(rows)
        };
        let (e, e_inv) = (elementary(k), elementary(-k));
        t = e.mul(&t);
        inv = inv.mul(&e_inv);
    }
    (t, inv)
}

/// A field with planted Darboux polynomials: `x_i' = x_i a_i` in hidden
/// coordinates, moved by a random unimodular linear change. Returns the
/// field and the planted pairs `(L_i, a_i o L)` with `L_i` linear forms.
pub fn planted_field(rng: &mut TestRng, v: &Vars, cofactor_degree: u32) -> (VectorField, Vec<(Poly, Poly)>) {
    let n = v.len();
    loop {
        let (t, inv) = unimodular(rng, n);
        let xs: Vec<Poly> = (0..n).map(|i| Poly::var(v, i)).collect();
        // Hidden coordinates u = inv * x.
        let u: Vec<Poly> = (0..n)
            .map(|i| (0..n).fold(Poly::zero(v), |acc, j| &acc + &xs[j].scale(&inv[(i, j)])))
            .collect();
        let cof: Vec<Poly> = (0..n).map(|_| poly(rng, v, cofactor_degree, 3)).collect();
        // u_i' = u_i a_i(u), and x = t * u.
        let udot: Vec<Poly> = (0..n).map(|i| &u[i] * &compose(&cof[i], &u)).collect();
        let comps: Vec<Poly> = (0..n)
            .map(|i| (0..n).fold(Poly::zero(v), |acc, j| &acc + &udot[j].scale(&t[(i, j)])))
            .collect();
        let Ok(field) = VectorField::new(v, comps) else { continue };
        let pairs = (0..n).map(|i| (u[i].clone(), compose(&cof[i], &u))).collect();
        return (field, pairs);
    }
}
