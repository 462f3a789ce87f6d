//! Dense univariate polynomials with coefficients in any [`Ring`].

use std::fmt;

use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::ring::Ring;
use crate::scalar::GaussRat;

/// `Σ coeffs[j]·var^j`. The coefficient vector keeps its formal length, so a
/// reconstructed denominator of formal order `r` stays length `r+1` even if
/// its top coefficient vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<R> {
    var: String,
    coeffs: Vec<R>,
}

impl<R: Ring> UniPoly<R> {
    pub fn new(var: impl Into<String>, coeffs: Vec<R>) -> Self {
        UniPoly { var: var.into(), coeffs }
    }

    pub fn zero(var: impl Into<String>) -> Self {
        UniPoly::new(var, Vec::new())
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> R {
        self.coeffs.get(j).cloned().unwrap_or_else(R::zero)
    }

    /// Degree ignoring vanishing top coefficients; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn trimmed(&self) -> Self {
        let n = self.degree().map_or(0, |d| d + 1);
        UniPoly::new(self.var.clone(), self.coeffs[..n].to_vec())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return UniPoly::zero(self.var.clone());
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UniPoly::new(self.var.clone(), out)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new(self.var.clone(), (0..n).map(|j| self.coeff(j).add(&rhs.coeff(j))).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new(self.var.clone(), (0..n).map(|j| self.coeff(j).sub(&rhs.coeff(j))).collect())
    }

    pub fn scale(&self, c: &R) -> Self {
        UniPoly::new(self.var.clone(), self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn eval(&self, x: &R) -> R {
        self.coeffs.iter().rev().fold(R::zero(), |acc, c| acc.mul(x).add(c))
    }

    pub fn map<S: Ring>(&self, f: impl FnMut(&R) -> S) -> UniPoly<S> {
        UniPoly::new(self.var.clone(), self.coeffs.iter().map(f).collect())
    }

    /// `p1/q1` and `p2/q2` are the same rational function.
    pub fn cross_eq(p1: &Self, q1: &Self, p2: &Self, q2: &Self) -> bool {
        p1.mul(q2).sub(&p2.mul(q1)).is_zero()
    }

    /// Flatten to a multivariate polynomial, when every coefficient is one.
    pub fn to_mpoly(&self) -> Option<MPoly> {
        let parts = self.coeffs.iter().map(Ring::to_mpoly).collect::<Option<Vec<_>>>()?;
        Some(MPoly::from_univariate(&self.var, &parts))
    }
}

impl UniPoly<GaussRat> {
    pub fn from_mpoly(p: &MPoly, var: &str) -> Result<Self> {
        if let Some(v) = p.vars().iter().find(|v| *v != var) {
            return Err(Error::UnexpectedVariable(v.clone()));
        }
        let coeffs = p.as_univariate(var).iter().map(|c| c.constant_term()).collect();
        Ok(UniPoly::new(var, coeffs))
    }

    pub fn monic(&self) -> Self {
        let t = self.trimmed();
        match t.coeffs.last() {
            Some(lc) if !lc.is_one() => t.scale(&lc.inv().expect("nonzero")),
            _ => t,
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let d = d.trimmed();
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.coeffs[dd].inv().expect("nonzero");
        let mut r = self.trimmed().coeffs;
        let mut q = vec![GaussRat::zero(); r.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let t = &r[r.len() - 1] * &lead_inv;
            for (j, c) in d.coeffs.iter().enumerate() {
                r[k + j] = &r[k + j] - &(&t * c);
            }
            q[k] = t;
            r.pop();
            while r.last().is_some_and(GaussRat::is_zero) {
                r.pop();
            }
        }
        (UniPoly::new(self.var.clone(), q).trimmed(), UniPoly::new(self.var.clone(), r))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.trimmed();
        let mut b = other.trimmed();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl<R: Ring> fmt::Display for UniPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.to_mpoly() {
            return write!(f, "{p}");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*{}", self.var)?,
                _ => write!(f, "({c})*{}^{j}", self.var)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(v: &[i64]) -> UniPoly<GaussRat> {
        UniPoly::new("z", v.iter().map(|&n| GaussRat::from_int(n)).collect())
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (z-1)(z+2) and (z-1)(z-3)
        let a = up(&[-2, 1, 1]);
        let b = up(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), up(&[-1, 1]));
        assert_eq!(up(&[1, 1]).gcd(&up(&[2])), up(&[1]));
        assert!(up(&[]).gcd(&up(&[0])).is_zero());
    }

    #[test]
    fn division() {
        let a = up(&[-1, 0, 0, 1]);
        let (q, r) = a.div_rem(&up(&[-1, 1]));
        assert_eq!(q, up(&[1, 1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn formal_length_and_display() {
        let q = up(&[-1, 1, 0]);
        assert_eq!(q.coeffs().len(), 3);
        assert_eq!(q.degree(), Some(1));
        assert_eq!(q.to_string(), "-1 + z");
        assert_eq!(q.eval(&GaussRat::from_int(1)), GaussRat::zero());
    }
}
