use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::rat::{make_primitive, Rat};
use super::ArithError;

/// Ordered list of variable names shared by every polynomial of a system.
#[derive(Clone, Debug)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Vars(names.into_iter().map(Into::into).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Vars {}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a map ordered by graded reverse lexicographic order;
/// no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: Vars,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(vars: &Vars) -> Self {
        Poly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Vars) -> Self {
        Poly::constant(vars, Rat::one())
    }

    pub fn constant(vars: &Vars, c: Rat) -> Self {
        Poly::monomial(vars, Monomial::one(vars.len()), c)
    }

    pub fn var(vars: &Vars, index: usize) -> Self {
        Poly::monomial(vars, Monomial::var(vars.len(), index), Rat::one())
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: Rat) -> Self {
        assert_eq!(m.nvars(), vars.len(), "monomial arity does not match context");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { vars: vars.clone(), terms }
    }

    /// Builds a polynomial from (monomial, coefficient) pairs, merging duplicates.
    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Poly::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), vars.len(), "monomial arity does not match context");
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial, `None` otherwise.
    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_constant() {
            Some(self.coeff(&Monomial::one(self.nvars())))
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponents()[var]).max().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_context(&self, other: &Poly) -> Result<(), ArithError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(ArithError::ContextMismatch {
                left: self.vars.names().to_vec(),
                right: other.vars.names().to_vec(),
            })
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, ArithError> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, ArithError> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, ArithError> {
        self.check_context(other)?;
        let mut out = Poly::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(t, v)| (t.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient `self / divisor`.
    ///
    /// Runs multivariate division by leading terms; since `a = q*b` forces
    /// `lt(a) = lt(q)*lt(b)`, any non-divisible leading term proves that no
    /// polynomial quotient exists.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly, ArithError> {
        self.check_context(divisor)?;
        let (lm, lc) = match divisor.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(ArithError::DivisionByZero),
        };
        if let (Some(da), Some(db)) = (self.total_degree(), divisor.total_degree()) {
            if da < db {
                return Err(ArithError::NotDivisible);
            }
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.vars);
        while let Some((rm, rc)) = rem.leading_term() {
            let t = rm.div(&lm).ok_or(ArithError::NotDivisible)?;
            let c = rc / &lc;
            for (bm, bc) in &divisor.terms {
                rem.add_term(bm.mul(&t), -(bc * &c));
            }
            quot.add_term(t, c);
        }
        Ok(quot)
    }

    /// Partial derivative with respect to variable `var`.
    pub fn diff(&self, var: usize) -> Poly {
        assert!(var < self.nvars(), "variable index {var} out of range");
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            if let Some((e, lowered)) = m.lower(var) {
                out.add_term(lowered, c * Rat::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Exact value at `point` (one coordinate per variable).
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars(), "point length does not match context");
        // powers[i][e] = point[i]^e, built incrementally
        let mut powers: Vec<Vec<Rat>> = point.iter().map(|v| vec![Rat::one(), v.clone()]).collect();
        for (i, row) in powers.iter_mut().enumerate() {
            let needed = self.degree_in(i) as usize;
            while row.len() <= needed {
                let next = row.last().unwrap() * &point[i];
                row.push(next);
            }
        }
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            acc += t;
        }
        acc
    }

    /// Componentwise minimum of all term exponents (the largest monomial
    /// dividing every term). `None` for the zero polynomial.
    pub fn monomial_content(&self) -> Option<Monomial> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, m| acc.gcd(m)))
    }

    /// Divides every term by a monomial that is known to divide it.
    pub fn div_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.div(m).expect("monomial does not divide term"), c.clone()))
                .collect(),
        }
    }

    /// Splits `self = scale * p` where `p` has integer coefficients with
    /// content 1 and a positive leading coefficient. Returns `(scale, p)`;
    /// the zero polynomial yields `(1, 0)`.
    pub fn primitive_part(&self) -> (Rat, Poly) {
        if self.is_zero() {
            return (Rat::one(), self.clone());
        }
        let (ms, mut cs): (Vec<Monomial>, Vec<Rat>) =
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).unzip();
        let mut factor = make_primitive(&mut cs);
        if cs.last().is_some_and(|c| c.is_negative()) {
            for c in cs.iter_mut() {
                *c = -&*c;
            }
            factor = -factor;
        }
        let p = Poly { vars: self.vars.clone(), terms: ms.into_iter().zip(cs).collect() };
        (factor.recip(), p)
    }

    /// Coefficients with respect to an explicit monomial list. Terms whose
    /// monomial is absent from `basis` are reported via `Err` with that monomial.
    pub fn coefficients_in(&self, index: &std::collections::HashMap<Monomial, usize>) -> Result<Vec<Rat>, Monomial> {
        let mut out = vec![Rat::zero(); index.len()];
        for (m, c) in &self.terms {
            match index.get(m) {
                Some(&i) => out[i] = c.clone(),
                None => return Err(m.clone()),
            }
        }
        Ok(out)
    }

    /// Same polynomial over another context with the same number of variables.
    pub fn with_vars(&self, vars: &Vars) -> Poly {
        assert_eq!(vars.len(), self.nvars());
        Poly { vars: vars.clone(), terms: self.terms.clone() }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", crate::sysparse::render_poly(self))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::sysparse::render_poly(self))
    }
}

// Operator impls panic on context mismatch; use the `checked_*` forms when
// operands may come from different systems.
impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomial context mismatch")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomial context mismatch")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomial context mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Binary polynomial operations exposed through [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(a: &Poly, b: &Poly, op: PolyOp) -> Result<Poly, ArithError> {
    match op {
        PolyOp::Add => a.checked_add(b),
        PolyOp::Sub => a.checked_sub(b),
        PolyOp::Mul => a.checked_mul(b),
    }
}
