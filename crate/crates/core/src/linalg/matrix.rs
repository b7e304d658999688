use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{lcm_denominators, make_primitive, Rat};

use super::LinalgError;

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, entries: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rat::from_integer(BigInt::from(v))).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Rat>]) -> Self {
        let mut m = QMatrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|a| a * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        QMatrix { rows: self.rows + other.rows, cols: self.cols, entries }
    }

    /// Sub-matrix made of the selected rows.
    pub fn select_rows(&self, rows: &[usize]) -> QMatrix {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            entries.extend(self.row(i).iter().cloned());
        }
        QMatrix { rows: rows.len(), cols: self.cols, entries }
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(crate::arith::fmt_rat).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Echelon data produced by fraction-free elimination.
struct Echelon {
    /// Reduced row echelon form over the rationals (only the pivot rows).
    rref: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

/// Scales each row to integers (row scaling preserves row space and kernel).
fn integer_rows(m: &QMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows)
        .map(|i| {
            let row = m.row(i);
            let l = lcm_denominators(row.iter());
            row.iter()
                .map(|v| (v * Rat::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect()
}

/// Bareiss fraction-free forward elimination. Returns the pivot columns;
/// `a` is left in echelon form with integral entries.
fn bareiss(a: &mut [Vec<BigInt>], ncols: usize) -> Vec<usize> {
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..ncols {
                let v = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero(), "Bareiss division not exact");
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot_row[c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn echelon(m: &QMatrix) -> Echelon {
    let mut a = integer_rows(m);
    let pivots = bareiss(&mut a, m.cols);
    // back-substitution to reduced form over Q
    let mut rref: Vec<Vec<Rat>> = a
        .into_iter()
        .take(pivots.len())
        .map(|row| row.into_iter().map(Rat::from_integer).collect())
        .collect();
    for (k, &pc) in pivots.iter().enumerate().rev() {
        let inv = rref[k][pc].recip();
        for v in rref[k].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rref[k].clone();
        for row in rref.iter_mut().take(k) {
            let f = row[pc].clone();
            if f.is_zero() {
                continue;
            }
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
    }
    Echelon { rref, pivots }
}

/// Integer entries, content 1, positive first nonzero entry.
pub fn canonical_vector(v: &mut [Rat]) {
    make_primitive(v);
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
}

pub fn rank(m: &QMatrix) -> usize {
    let mut a = integer_rows(m);
    bareiss(&mut a, m.cols).len()
}

/// Kernel basis in canonical form: one vector per free column, in column
/// order, each scaled by [`canonical_vector`].
pub fn nullspace(m: &QMatrix) -> Vec<Vec<Rat>> {
    let e = echelon(m);
    kernel_from_echelon(&e, m.cols)
}

fn kernel_from_echelon(e: &Echelon, ncols: usize) -> Vec<Vec<Rat>> {
    let mut is_pivot = vec![false; ncols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&j| !is_pivot[j])
        .map(|free| {
            let mut v = vec![Rat::zero(); ncols];
            v[free] = Rat::one();
            for (k, &pc) in e.pivots.iter().enumerate() {
                v[pc] = -&e.rref[k][free];
            }
            canonical_vector(&mut v);
            v
        })
        .collect()
}

/// Canonical basis of the span of `vectors`: nonzero rows of the reduced
/// echelon form, each passed through [`canonical_vector`].
pub fn span_basis(vectors: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = QMatrix::from_rows(vectors.to_vec());
    assert_eq!(m.cols, dim);
    echelon(&m)
        .rref
        .into_iter()
        .map(|mut v| {
            canonical_vector(&mut v);
            v
        })
        .collect()
}

/// Affine solution set of `M x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Rat>,
    pub homogeneous: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineResult {
    Solved(AffineSolution),
    /// No solution; `row` is the first equation whose inclusion makes the
    /// prefix of equations `0..=row` inconsistent.
    Inconsistent { row: usize },
}

impl AffineResult {
    pub fn solved(self) -> Option<AffineSolution> {
        match self {
            AffineResult::Solved(s) => Some(s),
            AffineResult::Inconsistent { .. } => None,
        }
    }
}

fn augmented(m: &QMatrix, b: &[Rat], nrows: usize) -> QMatrix {
    let mut aug = QMatrix::zeros(nrows, m.cols + 1);
    for i in 0..nrows {
        for j in 0..m.cols {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols)] = b[i].clone();
    }
    aug
}

fn prefix_consistent(m: &QMatrix, b: &[Rat], nrows: usize) -> bool {
    let aug = augmented(m, b, nrows);
    let mut a = integer_rows(&aug);
    !bareiss(&mut a, aug.cols).contains(&m.cols)
}

pub fn solve_affine(m: &QMatrix, b: &[Rat]) -> Result<AffineResult, LinalgError> {
    if b.len() != m.rows {
        return Err(LinalgError::DimensionMismatch { expected: m.rows, found: b.len() });
    }
    let aug = augmented(m, b, m.rows);
    let e = echelon(&aug);
    if e.pivots.contains(&m.cols) {
        // monotone in the prefix length: binary search for the first bad row
        let (mut lo, mut hi) = (0, m.rows);
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if prefix_consistent(m, b, mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return Ok(AffineResult::Inconsistent { row: hi - 1 });
    }
    let mut particular = vec![Rat::zero(); m.cols];
    for (k, &pc) in e.pivots.iter().enumerate() {
        particular[pc] = e.rref[k][m.cols].clone();
    }
    Ok(AffineResult::Solved(AffineSolution { particular, homogeneous: nullspace(m) }))
}

/// Solves `A X = B` for a square nonsingular `A`.
pub fn solve_square(a: &QMatrix, b: &QMatrix) -> Result<QMatrix, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare { rows: a.rows, cols: a.cols });
    }
    if a.rows != b.rows {
        return Err(LinalgError::DimensionMismatch { expected: a.rows, found: b.rows });
    }
    let mut out = QMatrix::zeros(a.cols, b.cols);
    for j in 0..b.cols {
        match solve_affine(a, &b.column(j))? {
            AffineResult::Solved(s) if s.homogeneous.is_empty() => {
                for (i, v) in s.particular.into_iter().enumerate() {
                    out[(i, j)] = v;
                }
            }
            _ => return Err(LinalgError::Singular),
        }
    }
    Ok(out)
}
