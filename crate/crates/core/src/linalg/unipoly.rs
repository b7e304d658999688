use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{fmt_rat, make_primitive, Rat};

use super::{LinalgError, QMatrix};

/// Univariate polynomial over Q, coefficients lowest degree first.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| Rat::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading().recip();
        UniPoly::new(self.coeffs.iter().map(|c| c * &l).collect())
    }

    /// Euclidean division, `divisor` nonzero.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let lead_inv = divisor.leading().recip();
        if rem.len() < divisor.coeffs.len() {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = positive_primitive(&r);
        }
        a.monic()
    }

    /// Evaluates the polynomial at a square matrix (Horner).
    pub fn eval_matrix(&self, m: &QMatrix) -> QMatrix {
        let n = m.rows();
        let mut acc = QMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m).add(&QMatrix::identity(n).scale(c));
        }
        acc
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(fmt_rat).collect();
        write!(f, "UniPoly[{}]", parts.join(", "))
    }
}

/// Divides by a positive rational so coefficients are coprime integers;
/// signs are preserved.
fn positive_primitive(p: &UniPoly) -> UniPoly {
    let mut c = p.coeffs.clone();
    make_primitive(&mut c);
    UniPoly::new(c)
}

/// Characteristic polynomial `det(tI - M)` by Berkowitz's division-free
/// algorithm. The result is monic of degree `n`.
pub fn char_poly(m: &QMatrix) -> Result<UniPoly, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    // highest degree first while building
    let mut v: Vec<Rat> = vec![Rat::one()];
    for r in 0..n {
        // A_r is the leading r x r block, C = M[0..r][r], R = M[r][0..r]
        let mut q = Vec::with_capacity(r + 2);
        q.push(Rat::one());
        q.push(-&m[(r, r)]);
        let mut col: Vec<Rat> = (0..r).map(|i| m[(i, r)].clone()).collect();
        for _ in 0..r {
            let dot: Rat = (0..r).map(|j| &m[(r, j)] * &col[j]).sum();
            q.push(-dot);
            col = (0..r).map(|i| (0..r).map(|j| &m[(i, j)] * &col[j]).sum()).collect();
        }
        // Toeplitz product: new_v[i] = sum_j q[i-j] * v[j]
        let mut next = vec![Rat::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if i >= j && i - j < q.len() {
                    *slot += &q[i - j] * vj;
                }
            }
        }
        v = next;
    }
    v.reverse();
    Ok(UniPoly::new(v))
}

/// A rational root with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootMultiplicity {
    pub root: Rat,
    pub multiplicity: usize,
}

/// Distinct rational roots in ascending order.
///
/// The polynomial is reduced to a square-free primitive integer polynomial
/// with leading coefficient `a`. By the rational root theorem every rational
/// root has a denominator dividing `a`, so two of them differ by at least
/// `1/a^2`. Real roots are isolated with a Sturm sequence and refined by
/// bisection to intervals of width below that bound; the simplest rational
/// inside each interval is then the only possible rational root there and is
/// checked by exact evaluation.
pub fn rational_roots(p: &UniPoly) -> Result<Vec<Rat>, LinalgError> {
    if p.is_zero() {
        return Err(LinalgError::ZeroPolynomial);
    }
    let mut roots = Vec::new();
    let mut q = p.clone();
    if q.coeffs[0].is_zero() {
        roots.push(Rat::zero());
        let k = q.coeffs.iter().take_while(|c| c.is_zero()).count();
        q = UniPoly::new(q.coeffs[k..].to_vec());
    }
    if q.degree() > 0 {
        let g = q.gcd(&q.derivative());
        let sf = positive_primitive(&q.div_rem(&g).0);
        roots.extend(isolate_rational_roots(&sf));
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// Rational roots together with their multiplicities in `p`.
pub fn rational_roots_with_multiplicity(p: &UniPoly) -> Result<Vec<RootMultiplicity>, LinalgError> {
    let roots = rational_roots(p)?;
    Ok(roots
        .into_iter()
        .map(|r| {
            let lin = UniPoly::new(vec![-&r, Rat::one()]);
            let mut rest = p.clone();
            let mut multiplicity = 0;
            loop {
                let (quot, rem) = rest.div_rem(&lin);
                if !rem.is_zero() {
                    break;
                }
                multiplicity += 1;
                rest = quot;
            }
            RootMultiplicity { root: r, multiplicity }
        })
        .collect())
}

fn sturm_sequence(p: &UniPoly) -> Vec<UniPoly> {
    let mut seq = vec![p.clone(), positive_primitive(&p.derivative())];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        if seq[n - 1].degree() == 0 {
            break;
        }
        let r = seq[n - 2].div_rem(&seq[n - 1]).1;
        let neg = UniPoly::new(r.coeffs.iter().map(|c| -c).collect());
        seq.push(positive_primitive(&neg));
    }
    seq
}

fn sign_variations(seq: &[UniPoly], t: &Rat) -> usize {
    let signs: Vec<bool> = seq
        .iter()
        .map(|p| p.eval(t))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Finds a point strictly inside `(lo, hi)` that is not a root of `p`.
fn split_point(p: &UniPoly, lo: &Rat, hi: &Rat) -> Rat {
    let width = hi - lo;
    for k in 1u32.. {
        // 1/2, 1/3, 2/3, 1/4, ... never exhausts: p has finitely many roots
        let den = Rat::from_integer(BigInt::from(k + 1));
        for num in 1..=k {
            let t = lo + &width * Rat::from_integer(BigInt::from(num)) / &den;
            if !p.eval(&t).is_zero() {
                return t;
            }
        }
    }
    unreachable!()
}

fn isolate_rational_roots(p: &UniPoly) -> Vec<Rat> {
    let lead = p.leading();
    // Cauchy bound, pushed strictly past every root
    let bound: Rat = Rat::one()
        + p.coeffs[..p.degree()]
            .iter()
            .map(|c| (c / &lead).abs())
            .fold(Rat::zero(), |a, b| if b > a { b } else { a });
    let lead_abs = lead.abs();
    let resolution = (&lead_abs * &lead_abs).recip();
    let seq = sturm_sequence(p);
    let mut found = Vec::new();
    let mut stack = vec![(-bound.clone(), bound.clone())];
    while let Some((lo, hi)) = stack.pop() {
        let count = sign_variations(&seq, &lo) - sign_variations(&seq, &hi);
        match count {
            0 => {}
            1 => {
                if let Some(r) = refine_single(p, lo, hi, &resolution) {
                    found.push(r);
                }
            }
            _ => {
                let mid = split_point(p, &lo, &hi);
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    found
}

/// Bisects an interval with exactly one simple root (endpoints are not
/// roots) and returns the root if it is rational.
fn refine_single(p: &UniPoly, mut lo: Rat, mut hi: Rat, resolution: &Rat) -> Option<Rat> {
    let two = Rat::from_integer(BigInt::from(2));
    let lo_positive = p.eval(&lo).is_positive();
    while &hi - &lo >= *resolution {
        let mid = (&lo + &hi) / &two;
        let v = p.eval(&mid);
        if v.is_zero() {
            return Some(mid);
        }
        if v.is_positive() == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let candidate = simplest_in(&lo, &hi);
    p.eval(&candidate).is_zero().then_some(candidate)
}

/// The rational with the smallest denominator in the closed interval `[a, b]`.
fn simplest_in(a: &Rat, b: &Rat) -> Rat {
    debug_assert!(a <= b);
    if !a.is_positive() && !b.is_negative() {
        return Rat::zero();
    }
    if b.is_negative() {
        return -simplest_in(&-b, &-a);
    }
    let fl = a.floor();
    if &fl == a {
        return fl;
    }
    let next = &fl + Rat::one();
    if &next <= b {
        return next;
    }
    let inner = simplest_in(&(b - &fl).recip(), &(a - &fl).recip());
    fl + inner.recip()
}
