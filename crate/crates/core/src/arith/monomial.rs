use std::cmp::Ordering;

/// Exponent vector, one entry per variable of the ambient context.
///
/// `Ord` is graded reverse lexicographic order over the declared variable
/// order: higher total degree is larger; on ties, the monomial with the
/// smaller exponent in the last differing variable is larger.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents.into_boxed_slice())
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial::new(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect()))
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }

    /// Derivative bookkeeping: returns (exponent, monomial with that exponent
    /// decreased) or `None` when the variable is absent.
    pub fn lower(&self, index: usize) -> Option<(u32, Monomial)> {
        let e = self.0[index];
        if e == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[index] -= 1;
        Some((e, Monomial(v)))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().zip(other.0.iter()).rev() {
            if a != b {
                // smaller exponent in the last differing variable wins
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials in `nvars` variables of total degree `<= max_degree`,
/// in descending graded reverse lexicographic order.
pub fn monomials_up_to(nvars: usize, max_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in (0..=max_degree).rev() {
        let mut layer = Vec::new();
        let mut current = vec![0u32; nvars];
        fill(&mut layer, &mut current, 0, d);
        layer.sort_by(|a, b| b.cmp(a));
        out.extend(layer);
    }
    out
}

fn fill(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
    if current.is_empty() {
        if remaining == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return;
    }
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(Monomial::new(current.clone()));
        current[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        current[pos] = e;
        fill(out, current, pos + 1, remaining - e);
    }
    current[pos] = 0;
}

/// Number of monomials of degree `<= max_degree` in `nvars` variables,
/// i.e. `C(nvars + max_degree, nvars)`, saturating on overflow.
pub fn count_monomials_up_to(nvars: usize, max_degree: u32) -> u128 {
    let n = nvars as u128;
    let d = max_degree as u128;
    let mut acc: u128 = 1;
    for i in 1..=n {
        acc = match acc.checked_mul(d + i) {
            Some(v) => v / i,
            None => return u128::MAX,
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn grevlex_order() {
        // x > y > z, x^2 > xy > y^2 > xz > yz > z^2
        let desc = [
            m(&[2, 0, 0]),
            m(&[1, 1, 0]),
            m(&[0, 2, 0]),
            m(&[1, 0, 1]),
            m(&[0, 1, 1]),
            m(&[0, 0, 2]),
            m(&[1, 0, 0]),
            m(&[0, 1, 0]),
            m(&[0, 0, 1]),
            m(&[0, 0, 0]),
        ];
        for w in desc.windows(2) {
            assert!(w[0] > w[1], "{:?} should exceed {:?}", w[0], w[1]);
        }
        assert_eq!(monomials_up_to(3, 2), desc.to_vec());
    }

    #[test]
    fn counting() {
        assert_eq!(count_monomials_up_to(3, 2), 10);
        assert_eq!(count_monomials_up_to(2, 4), 15);
        for n in 1..4 {
            for d in 0..5 {
                assert_eq!(count_monomials_up_to(n, d) as usize, monomials_up_to(n, d).len());
            }
        }
    }

    #[test]
    fn division() {
        assert_eq!(m(&[2, 1]).div(&m(&[1, 0])), Some(m(&[1, 1])));
        assert_eq!(m(&[2, 1]).div(&m(&[0, 2])), None);
        assert_eq!(m(&[2, 1]).gcd(&m(&[0, 3])), m(&[0, 1]));
    }
}
