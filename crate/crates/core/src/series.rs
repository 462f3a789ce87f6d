//! Truncated power series in one named variable.

use std::fmt;

use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::ratfunc::RatFunc;
use crate::ring::Ring;
use crate::scalar::GaussRat;

/// The first `N` coefficients `c_0 … c_{N-1}` of a power series in `var`.
///
/// Nothing is known past index `N-1`. Accessors fail with
/// [`Error::InsufficientTruncation`] rather than assume zero.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<R> {
    var: String,
    coeffs: Vec<R>,
}

impl<R> TruncSeries<R> {
    pub fn new(var: impl Into<String>, coeffs: Vec<R>) -> Self {
        TruncSeries { var: var.into(), coeffs }
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    /// Number of known coefficients `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Result<&R> {
        self.coeffs.get(j).ok_or(Error::InsufficientTruncation {
            needed: j,
            available: self.coeffs.len(),
        })
    }

    /// `c_from ..= c_to`, failing if `to` is past the truncation.
    pub fn window(&self, from: usize, to: usize) -> Result<&[R]> {
        self.require(to)?;
        Ok(&self.coeffs[from..=to])
    }

    /// Fail unless index `j` is known.
    pub fn require(&self, j: usize) -> Result<()> {
        self.coeff(j).map(|_| ())
    }

    /// Keep only the first `n` coefficients.
    pub fn truncate(&self, n: usize) -> Result<Self>
    where
        R: Clone,
    {
        if n > self.order() {
            return Err(Error::InsufficientTruncation { needed: n - 1, available: self.order() });
        }
        Ok(TruncSeries { var: self.var.clone(), coeffs: self.coeffs[..n].to_vec() })
    }

    pub fn map<S>(&self, f: impl FnMut(&R) -> S) -> TruncSeries<S> {
        TruncSeries { var: self.var.clone(), coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn try_map<S>(&self, f: impl FnMut(&R) -> Result<S>) -> Result<TruncSeries<S>> {
        Ok(TruncSeries {
            var: self.var.clone(),
            coeffs: self.coeffs.iter().map(f).collect::<Result<_>>()?,
        })
    }
}

impl<R: Ring> TruncSeries<R> {
    /// All known coefficients are zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Ring::is_zero)
    }

    pub fn scale(&self, lambda: &R) -> Self {
        self.map(|c| c.mul(lambda))
    }
}

impl TruncSeries<MPoly> {
    /// Convert constant coefficients to scalars.
    pub fn to_scalar(&self) -> Result<TruncSeries<GaussRat>> {
        self.try_map(|c| {
            c.as_constant()
                .ok_or_else(|| Error::UnexpectedVariable(c.vars()[0].clone()))
        })
    }
}

impl TruncSeries<GaussRat> {
    pub fn to_mpoly(&self) -> TruncSeries<MPoly> {
        self.map(|c| MPoly::constant(c.clone()))
    }
}

impl<R: fmt::Display> fmt::Display for TruncSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "] + O({}^{})", self.var, self.coeffs.len())
    }
}

/// First `n` coefficients of `p/q` from the convolution recurrence
/// `q_0·c_k = p_k − Σ_{i=1..k} q_i·c_{k−i}`. Fails when `q_0` is not a unit.
pub fn expand_quotient<R: Ring>(p: &[R], q: &[R], n: usize, var: &str) -> Result<Vec<R>> {
    let q0_inv = q
        .first()
        .and_then(Ring::inverse)
        .ok_or_else(|| Error::DenominatorSingularAtOrigin { var: var.to_string() })?;
    let mut c: Vec<R> = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = p.get(k).cloned().unwrap_or_else(R::zero);
        for i in 1..=k.min(q.len().saturating_sub(1)) {
            acc = acc.sub(&q[i].mul(&c[k - i]));
        }
        c.push(acc.mul(&q0_inv));
    }
    Ok(c)
}

/// Taylor coefficients of `rf` in `var` with polynomial coefficients in the
/// remaining variables. The denominator's value at `var = 0` must be a
/// nonzero constant.
pub fn series_of_ratfunc(rf: &RatFunc, var: &str, n: usize) -> Result<TruncSeries<MPoly>> {
    let p = rf.num().as_univariate(var);
    let q = rf.den().as_univariate(var);
    Ok(TruncSeries::new(var, expand_quotient(&p, &q, n, var)?))
}
