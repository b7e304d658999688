use std::fmt;

use num_traits::Zero;

use super::poly::{Poly, Vars};
use super::rat::Rat;
use super::ArithError;

/// Quotient of two polynomials over a shared context.
///
/// Normal form: the denominator is nonzero, has integer coefficients with
/// content 1 and a positive leading coefficient; numerator and denominator
/// share no monomial factor; the zero function is `0/1`. When one side
/// divides the other exactly the quotient is taken as well. No multivariate
/// gcd is computed, so equality is decided by cross-multiplication.
#[derive(Clone)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ArithError> {
        if num.vars() != den.vars() {
            return Err(ArithError::ContextMismatch {
                left: num.vars().names().to_vec(),
                right: den.vars().names().to_vec(),
            });
        }
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.vars());
        RatFunc { num: p, den }
    }

    pub fn zero(vars: &Vars) -> Self {
        RatFunc::from_poly(Poly::zero(vars))
    }

    pub fn one(vars: &Vars) -> Self {
        RatFunc::from_poly(Poly::one(vars))
    }

    pub fn constant(vars: &Vars, c: Rat) -> Self {
        RatFunc::from_poly(Poly::constant(vars, c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Exact constancy test: every partial derivative vanishes.
    pub fn is_constant(&self) -> bool {
        if self.num.is_constant() && self.den.is_constant() {
            return true;
        }
        (0..self.vars().len()).all(|i| self.diff(i).is_zero())
    }

    fn normalized(mut num: Poly, mut den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc::zero(num.vars());
        }
        if let (Some(a), Some(b)) = (num.monomial_content(), den.monomial_content()) {
            let g = a.gcd(&b);
            if !g.is_one() {
                num = num.div_monomial(&g);
                den = den.div_monomial(&g);
            }
        }
        if !den.is_constant() {
            if let Ok(q) = num.exact_div(&den) {
                return RatFunc::from_poly(q);
            }
            if !num.is_constant() {
                if let Ok(q) = den.exact_div(&num) {
                    // num/den = 1/q
                    den = q;
                    num = Poly::one(num.vars());
                }
            }
        }
        let (scale, prim) = den.primitive_part();
        RatFunc { num: num.scale(&scale.recip()), den: prim }
    }

    fn check_context(&self, other: &RatFunc) -> Result<(), ArithError> {
        if self.vars() == other.vars() {
            Ok(())
        } else {
            Err(ArithError::ContextMismatch {
                left: self.vars().names().to_vec(),
                right: other.vars().names().to_vec(),
            })
        }
    }

    pub fn checked_add(&self, other: &RatFunc) -> Result<RatFunc, ArithError> {
        self.check_context(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.den == other.den {
            return Ok(Self::normalized(&self.num + &other.num, self.den.clone()));
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Ok(Self::normalized(num, &self.den * &other.den))
    }

    pub fn checked_sub(&self, other: &RatFunc) -> Result<RatFunc, ArithError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &RatFunc) -> Result<RatFunc, ArithError> {
        self.check_context(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(RatFunc::zero(self.vars()));
        }
        // cancel across before multiplying out
        let (a, d) = cancel_pair(&self.num, &other.den);
        let (c, b) = cancel_pair(&other.num, &self.den);
        Ok(Self::normalized(&a * &c, &b * &d))
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<RatFunc, ArithError> {
        self.checked_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<RatFunc, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero(self.vars());
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &Poly) -> RatFunc {
        self.checked_mul(&RatFunc::from_poly(p.clone())).expect("context mismatch")
    }

    /// Integer power; negative exponents invert (panics on `0^-k`).
    pub fn powi(&self, e: i64) -> RatFunc {
        let base = if e < 0 { self.inv().expect("zero to a negative power") } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        RatFunc { num: base.num.pow(k), den: base.den.pow(k) }
    }

    /// Quotient rule, exact.
    pub fn diff(&self, var: usize) -> RatFunc {
        if self.den.is_constant() {
            let c = self.den.constant_value().unwrap();
            return RatFunc { num: self.num.diff(var).scale(&c.recip()), den: Poly::one(self.vars()) };
        }
        let num = &(&self.den * &self.num.diff(var)) - &(&self.num * &self.den.diff(var));
        Self::normalized(num, &self.den * &self.den)
    }

    /// Value at `point`; `None` when the denominator vanishes there.
    pub fn eval(&self, point: &[Rat]) -> Option<Rat> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }

    /// Cross-multiplication equality; shared contexts are required.
    pub fn equals(&self, other: &RatFunc) -> Result<bool, ArithError> {
        self.check_context(other)?;
        Ok(&self.num * &other.den == &other.num * &self.den)
    }
}

fn cancel_pair(a: &Poly, b: &Poly) -> (Poly, Poly) {
    if b.is_constant() || a.is_zero() {
        return (a.clone(), b.clone());
    }
    if let Ok(q) = a.exact_div(b) {
        return (q, Poly::one(a.vars()));
    }
    (a.clone(), b.clone())
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other).unwrap_or(false)
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", crate::sysparse::render_ratfunc(self))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::sysparse::render_ratfunc(self))
    }
}

/// Binary rational-function operations exposed through [`ratfunc_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatFuncOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn ratfunc_arith(a: &RatFunc, b: &RatFunc, op: RatFuncOp) -> Result<RatFunc, ArithError> {
    match op {
        RatFuncOp::Add => a.checked_add(b),
        RatFuncOp::Sub => a.checked_sub(b),
        RatFuncOp::Mul => a.checked_mul(b),
        RatFuncOp::Div => a.checked_div(b),
    }
}

pub fn ratfunc_equal(a: &RatFunc, b: &RatFunc) -> Result<bool, ArithError> {
    a.equals(b)
}

impl RatFunc {
    pub fn is_one(&self) -> bool {
        self.is_polynomial() && self.num.is_one()
    }

    pub fn constant_value(&self) -> Option<Rat> {
        match (self.num.constant_value(), self.den.constant_value()) {
            (Some(n), Some(d)) => Some(n / d),
            _ => None,
        }
    }
}
