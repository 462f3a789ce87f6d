//! Gaussian rationals `ℚ(i)`: the exact base field.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::mpoly::MPoly;
use crate::ring::Ring;

/// Exact complex rational `re + im·i`. Both parts are always reduced.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussRat {
    re: BigRational,
    im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den` as a real Gaussian rational. Panics on `den == 0`.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `a + b·i` with integer parts.
    pub fn gaussian(a: i64, b: i64) -> Self {
        GaussRat {
            re: BigRational::from_integer(BigInt::from(a)),
            im: BigRational::from_integer(BigInt::from(b)),
        }
    }

    pub fn i() -> Self {
        Self::gaussian(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.im.is_zero() && self.re.is_one()
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.is_real() {
            return Some(Self::real(self.re.recip()));
        }
        let n = self.norm_sqr();
        Some(GaussRat { re: &self.re / &n, im: -(&self.im / &n) })
    }

    /// Sign convention used by the printers: negative when the real part is
    /// negative, or the real part is zero and the imaginary part negative.
    pub fn is_negative(&self) -> bool {
        self.re.is_negative() || (self.re.is_zero() && self.im.is_negative())
    }

    pub fn powi(&self, e: u32) -> Self {
        <Self as Ring>::pow(self, e)
    }
}

impl From<i64> for GaussRat {
    fn from(n: i64) -> Self {
        GaussRat::from_int(n)
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRat::real(&self.re * &rhs.re);
        }
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a> Div<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    /// Panics on division by zero; use [`GaussRat::inv`] to test first.
    fn div(self, rhs: &GaussRat) -> GaussRat {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRat::real(&self.re / &rhs.re);
        }
        self * &rhs.inv().expect("division by zero")
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -&self.re, im: -&self.im }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $m(self, rhs: GaussRat) -> GaussRat {
                $tr::$m(&self, &rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        -&self
    }
}

impl Ring for GaussRat {
    fn zero() -> Self {
        GaussRat::default()
    }
    fn one() -> Self {
        GaussRat::from_int(1)
    }
    fn from_i64(n: i64) -> Self {
        GaussRat::from_int(n)
    }
    fn is_zero(&self) -> bool {
        GaussRat::is_zero(self)
    }
    fn is_one(&self) -> bool {
        GaussRat::is_one(self)
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
        if rhs.is_zero() {
            None
        } else {
            Some(self / rhs)
        }
    }
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
    fn to_mpoly(&self) -> Option<MPoly> {
        Some(MPoly::constant(self.clone()))
    }
}

fn write_ratio(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

fn write_imag(f: &mut fmt::Formatter<'_>, im: &BigRational) -> fmt::Result {
    if im.is_one() {
        write!(f, "i")
    } else {
        write_ratio(f, im)?;
        write!(f, "*i")
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write_ratio(f, &self.re),
            (true, false) => {
                if self.im.is_negative() {
                    write!(f, "-")?;
                }
                write_imag(f, &self.im.abs())
            }
            (false, false) => {
                write!(f, "(")?;
                write_ratio(f, &self.re)?;
                write!(f, "{}", if self.im.is_negative() { "-" } else { "+" })?;
                write_imag(f, &self.im.abs())?;
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let a = GaussRat::gaussian(1, 2);
        let b = GaussRat::gaussian(3, -1);
        let q = &a / &b;
        assert_eq!(&q * &b, a);
        assert_eq!(&GaussRat::i() * &GaussRat::i(), GaussRat::from_int(-1));
        assert!(GaussRat::zero().inv().is_none());
    }

    #[test]
    fn canonical_parts() {
        let x = GaussRat::frac(2, 4);
        assert_eq!(x, GaussRat::frac(1, 2));
        assert_eq!(x.to_string(), "1/2");
    }

    #[test]
    fn display() {
        assert_eq!(GaussRat::from_int(-3).to_string(), "-3");
        assert_eq!(GaussRat::i().to_string(), "i");
        assert_eq!(GaussRat::gaussian(0, -2).to_string(), "-2*i");
        assert_eq!(GaussRat::gaussian(1, -1).to_string(), "(1-i)");
        assert_eq!((&GaussRat::frac(1, 2) * &GaussRat::i()).to_string(), "1/2*i");
    }
}
