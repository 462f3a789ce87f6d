use std::fmt;

use crate::mpoly::MPoly;

/// A commutative coefficient ring with an exact zero test.
///
/// `div_exact` must succeed whenever the quotient exists in the ring; the
/// determinant kernels rely on it for their guaranteed-exact divisions.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / rhs` if the quotient lies in the ring.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;
    /// Multiplicative inverse if `self` is a unit.
    fn inverse(&self) -> Option<Self>;
    /// View as a polynomial, when the element is one.
    fn to_mpoly(&self) -> Option<MPoly>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}
