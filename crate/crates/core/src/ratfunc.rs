//! Quotients of polynomials, compared by cross-multiplication.
//!
//! No multivariate GCD is taken. After each operation the pair is lightly
//! normalized: the denominator is scaled to leading coefficient 1, a
//! denominator that divides the numerator exactly is cancelled, and sums
//! reuse a denominator when one divides the other. None of this changes the
//! equality class.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::ring::Ring;
use crate::scalar::GaussRat;

#[derive(Clone, Debug)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::normalized(num, den))
    }

    pub fn from_poly(p: MPoly) -> Self {
        RatFunc { num: p, den: MPoly::one() }
    }

    fn normalized(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return RatFunc { num, den: MPoly::one() };
        }
        let lc = den.leading_coeff().cloned().expect("nonzero denominator");
        let (num, den) = if lc.is_one() {
            (num, den)
        } else {
            let s = lc.inv().expect("nonzero");
            (num.scale(&s), den.scale(&s))
        };
        if den.is_constant() {
            return RatFunc { num, den };
        }
        match num.div_exact(&den) {
            Some(q) => RatFunc { num: q, den: MPoly::one() },
            None => RatFunc { num, den },
        }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn into_parts(self) -> (MPoly, MPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// `a/b = c/d` iff `a·d − c·b` is the zero polynomial.
    pub fn cross_eq(&self, other: &RatFunc) -> bool {
        (&self.num * &other.den) == (&other.num * &self.den)
    }

    /// Variables occurring in numerator or denominator.
    pub fn vars(&self) -> Vec<String> {
        let mut v: Vec<String> = self.num.vars().iter().chain(self.den.vars()).cloned().collect();
        v.sort_by(|a, b| crate::mpoly::natural_cmp(a, b));
        v.dedup();
        v
    }

    pub fn inv(&self) -> Option<RatFunc> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFunc::normalized(self.den.clone(), self.num.clone()))
        }
    }

    fn sum(&self, rhs: &RatFunc, negate: bool) -> RatFunc {
        let c = if negate { -&rhs.num } else { rhs.num.clone() };
        if self.den == rhs.den {
            return RatFunc::normalized(&self.num + &c, self.den.clone());
        }
        if let Some(k) = self.den.div_exact(&rhs.den) {
            return RatFunc::normalized(&self.num + &(&c * &k), self.den.clone());
        }
        if let Some(k) = rhs.den.div_exact(&self.den) {
            return RatFunc::normalized(&(&self.num * &k) + &c, rhs.den.clone());
        }
        RatFunc::normalized(
            &(&self.num * &rhs.den) + &(&c * &self.den),
            &self.den * &rhs.den,
        )
    }

    fn product(&self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::from_poly(MPoly::zero());
        }
        let (a, d) = cancel(&self.num, &rhs.den);
        let (c, b) = cancel(&rhs.num, &self.den);
        RatFunc::normalized(&a * &c, &b * &d)
    }

    pub fn eval_partial(&self, values: &std::collections::BTreeMap<String, GaussRat>) -> Result<RatFunc> {
        RatFunc::new(self.num.eval_partial(values), self.den.eval_partial(values))
    }
}

/// Cancel `den` against `num` when it divides exactly.
fn cancel(num: &MPoly, den: &MPoly) -> (MPoly, MPoly) {
    if den.is_constant() {
        return (num.clone(), den.clone());
    }
    match num.div_exact(den) {
        Some(q) => (q, MPoly::one()),
        None => (num.clone(), den.clone()),
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.cross_eq(other)
    }
}

impl From<MPoly> for RatFunc {
    fn from(p: MPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        self.sum(rhs, false)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self.sum(rhs, true)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        self.product(rhs)
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    /// Panics on a zero divisor.
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.product(&rhs.inv().expect("division by zero rational function"))
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Ring for RatFunc {
    fn zero() -> Self {
        RatFunc::from_poly(MPoly::zero())
    }
    fn one() -> Self {
        RatFunc::from_poly(MPoly::one())
    }
    fn from_i64(n: i64) -> Self {
        RatFunc::from_poly(MPoly::from_int(n))
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        Some(self.product(&rhs.inv()?))
    }
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
    fn to_mpoly(&self) -> Option<MPoly> {
        let c = self.den.as_constant()?;
        Some(self.num.scale(&c.inv()?))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            let c = self.den.constant_term();
            return write!(f, "{}", self.num.scale(&c.inv().expect("nonzero")));
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}
