//! Rational reconstruction of a single truncated series.
//!
//! Given `c_0 … c_{N-1}` over an exact ring, find the least order `r0` at
//! which every Hankel determinant `A(s, r0)` vanishes, then build `P`, `Q`
//! with `f·Q = P`:
//!
//! * `r0 = 1`: `Q = -c_0 + c_1·z`, `P = -c_0²`.
//! * `r0 >= 2`: `Q = Σ b_j z^j` where `b_0 = -A(0, r0-1)` and `b_j` is the
//!   Cramer numerator of the Hankel system `H(0, r0-1)·x = (c_{r0} … c_{2r0-1})`
//!   for the unknown paired with `b_j`. `P` is the truncated product `f·Q`.
//!
//! No division takes place, so the construction works over polynomial
//! coefficient rings. Every result is checked against all known
//! coefficients before it is returned.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hankel::{det_fraction_free, minimal_order, MinimalOrder};
use crate::poly1::UniPoly;
use crate::ring::Ring;
use crate::scalar::GaussRat;
use crate::series::TruncSeries;

/// How `P` and `Q` are scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `Q(0) = -A(0, r0-1)`; coefficients stay in the input ring.
    HankelMinor,
    /// `Q(0) = 1`.
    UnitConstant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction<R> {
    pub r0: usize,
    /// `P`, formal length `r0`.
    pub numerator: UniPoly<R>,
    /// `Q`, formal length `r0 + 1`.
    pub denominator: UniPoly<R>,
    /// Highest series index at which `f·Q - P` was checked to vanish.
    pub verified_to: usize,
    /// `A(s, r0) = 0` was established for every `s <= certified_shift`.
    pub certified_shift: Option<usize>,
    pub normalization: Normalization,
    /// Least shift with `A(s, r0-1) != 0`.
    pub witness: Option<usize>,
}

/// JSON view of a [`Reconstruction`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReconReport {
    pub r0: usize,
    #[serde(rename = "P")]
    pub p: String,
    #[serde(rename = "Q")]
    pub q: String,
    pub verified_to: usize,
    pub certified_shift: Option<usize>,
    pub witness: Option<usize>,
    pub normalization: Normalization,
}

impl<R: Ring> Reconstruction<R> {
    /// `P/Q` equals `p/q` by cross-multiplication.
    pub fn is_equivalent(&self, p: &UniPoly<R>, q: &UniPoly<R>) -> bool {
        UniPoly::cross_eq(&self.numerator, &self.denominator, p, q)
    }

    /// Rescale so that `Q(0) = 1`, when `Q(0)` is a unit of the ring.
    pub fn unit_constant(&self) -> Option<Self> {
        let q0 = self.denominator.coeff(0);
        let s = q0.inverse()?;
        Some(Reconstruction {
            numerator: self.numerator.scale(&s),
            denominator: self.denominator.scale(&s),
            normalization: Normalization::UnitConstant,
            ..self.clone()
        })
    }

    pub fn report(&self) -> ReconReport {
        ReconReport {
            r0: self.r0,
            p: self.numerator.to_string(),
            q: self.denominator.to_string(),
            verified_to: self.verified_to,
            certified_shift: self.certified_shift,
            witness: self.witness,
            normalization: self.normalization,
        }
    }
}

impl Reconstruction<GaussRat> {
    /// Divide out `gcd(P, Q)` and scale to `Q(0) = 1`.
    pub fn reduced(&self) -> Self {
        let g = self.numerator.gcd(&self.denominator);
        let (p, q) = if g.degree().unwrap_or(0) > 0 {
            (self.numerator.div_rem(&g).0, self.denominator.div_rem(&g).0)
        } else {
            (self.numerator.trimmed(), self.denominator.trimmed())
        };
        let r = Reconstruction { numerator: p, denominator: q, ..self.clone() };
        r.unit_constant().unwrap_or(r)
    }
}

/// Reconstruct `P/Q` from a series with at least `2·r_max + certify_margin`
/// known coefficients.
pub fn reconstruct<R: Ring>(series: &TruncSeries<R>, r_max: usize, certify_margin: usize) -> Result<Reconstruction<R>> {
    let n = series.order();
    let need = 2 * r_max + certify_margin;
    if n < need || n == 0 {
        return Err(Error::InsufficientTruncation { needed: need.max(1) - 1, available: n });
    }
    let var = series.var();
    if series.is_zero() {
        return Ok(Reconstruction {
            r0: 0,
            numerator: UniPoly::zero(var),
            denominator: UniPoly::new(var, vec![R::one()]),
            verified_to: n - 1,
            certified_shift: None,
            normalization: Normalization::UnitConstant,
            witness: None,
        });
    }
    let (r0, witness, certified_shift) = match minimal_order(series, r_max, certify_margin)? {
        MinimalOrder::Found { r0, witness, certified_shift } => (r0, witness, certified_shift),
        MinimalOrder::NotFound { r_max } => return Err(Error::NotRationalWithinWindow { r_max, order: n }),
    };
    let (p, q) = assemble(series, r0)?;
    if !verify_product(series, &p, &q, n - 1)? {
        return Err(Error::VerificationFailed(format!("f*Q - P does not vanish below index {n} (r0 = {r0})")));
    }
    if !verify_recurrence(series, &q, 0..=n - 1 - r0)? {
        return Err(Error::VerificationFailed(format!("recurrence of order {r0} fails")));
    }
    if q.is_zero() {
        return Err(Error::VerificationFailed("zero denominator".into()));
    }
    Ok(Reconstruction {
        r0,
        numerator: p,
        denominator: q,
        verified_to: n - 1,
        certified_shift: Some(certified_shift),
        normalization: Normalization::HankelMinor,
        witness,
    })
}

/// The candidate `(P, Q)` of order `r0`, built from `c_0 … c_{2r0-1}` only.
/// No check is made that it fits the rest of the series.
pub fn assemble<R: Ring>(series: &TruncSeries<R>, r0: usize) -> Result<(UniPoly<R>, UniPoly<R>)> {
    let var = series.var();
    if r0 == 0 {
        return Ok((UniPoly::zero(var), UniPoly::new(var, vec![R::one()])));
    }
    let c = series.window(0, 2 * r0 - 1)?;
    let b: Vec<R> = if r0 == 1 {
        vec![c[0].neg(), c[1].clone()]
    } else {
        let m: Vec<Vec<R>> = (0..r0).map(|i| c[i..i + r0].to_vec()).collect();
        let mut b = vec![det_fraction_free(m.clone())?.neg()];
        for j in 1..=r0 {
            let col = r0 - j;
            let mj: Vec<Vec<R>> = m
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let mut row = row.clone();
                    row[col] = c[r0 + i].clone();
                    row
                })
                .collect();
            b.push(det_fraction_free(mj)?);
        }
        b
    };
    let a: Vec<R> = (0..r0)
        .map(|j| (0..=j).fold(R::zero(), |acc, i| acc.add(&b[j - i].mul(&c[i]))))
        .collect();
    Ok((UniPoly::new(var, a), UniPoly::new(var, b)))
}

/// `Σ_{j=0..r0} c_{s+j}·b_{r0-j} = 0` for every `s` in `shifts`, where
/// `r0` is the formal degree of `q`.
pub fn verify_recurrence<R: Ring>(series: &TruncSeries<R>, q: &UniPoly<R>, shifts: RangeInclusive<usize>) -> Result<bool> {
    let b = q.coeffs();
    let Some(r0) = b.len().checked_sub(1) else {
        return Ok(true);
    };
    if shifts.is_empty() {
        return Ok(true);
    }
    series.require(shifts.end() + r0)?;
    let c = series.coeffs();
    Ok(shifts.into_iter().all(|s| {
        (0..=r0)
            .fold(R::zero(), |acc, j| acc.add(&c[s + j].mul(&b[r0 - j])))
            .is_zero()
    }))
}

/// Every coefficient of `f·Q - P` with index `<= upto` is zero.
pub fn verify_product<R: Ring>(series: &TruncSeries<R>, p: &UniPoly<R>, q: &UniPoly<R>, upto: usize) -> Result<bool> {
    series.require(upto)?;
    let c = series.coeffs();
    let b = q.coeffs();
    Ok((0..=upto).all(|n| {
        let conv = (0..=n.min(b.len().saturating_sub(1)))
            .filter(|&i| i < b.len())
            .fold(R::zero(), |acc, i| acc.add(&b[i].mul(&c[n - i])));
        conv.sub(&p.coeff(n)).is_zero()
    }))
}

/// Length of the shortest linear recurrence generating the sequence
/// (Berlekamp–Massey).
pub fn bm_linear_complexity(series: &TruncSeries<GaussRat>) -> usize {
    let c = series.coeffs();
    let one = GaussRat::from_int(1);
    let mut conn = vec![one.clone()];
    let mut prev = vec![one.clone()];
    let mut l = 0usize;
    let mut gap = 1usize;
    let mut prev_d = one;
    for n in 0..c.len() {
        let mut d = c[n].clone();
        for i in 1..=l.min(conn.len() - 1) {
            d = &d + &(&conn[i] * &c[n - i]);
        }
        if d.is_zero() {
            gap += 1;
            continue;
        }
        let coef = &d / &prev_d;
        let saved = conn.clone();
        if conn.len() < prev.len() + gap {
            conn.resize(prev.len() + gap, GaussRat::zero());
        }
        for (i, x) in prev.iter().enumerate() {
            conn[i + gap] = &conn[i + gap] - &(&coef * x);
        }
        if 2 * l <= n {
            l = n + 1 - l;
            prev = saved;
            prev_d = d;
            gap = 1;
        } else {
            gap += 1;
        }
    }
    l
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleValue {
    pub point: String,
    pub value: String,
    pub zero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleReport {
    pub samples: Vec<SampleValue>,
    pub zeros: usize,
}

/// Evaluate `Q` at each point and flag zeros.
pub fn denominator_sample_check(q: &UniPoly<GaussRat>, points: &[GaussRat]) -> SampleReport {
    let samples: Vec<SampleValue> = points
        .iter()
        .map(|x| {
            let v = q.eval(x);
            SampleValue { point: x.to_string(), value: v.to_string(), zero: v.is_zero() }
        })
        .collect();
    let zeros = samples.iter().filter(|s| s.zero).count();
    SampleReport { samples, zeros }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_mpoly, parse_ratfunc};
    use crate::series::series_of_ratfunc;

    fn ints(v: &[i64]) -> TruncSeries<GaussRat> {
        TruncSeries::new("z", v.iter().map(|&n| GaussRat::from_int(n)).collect())
    }

    fn up(v: &[i64]) -> UniPoly<GaussRat> {
        UniPoly::new("z", v.iter().map(|&n| GaussRat::from_int(n)).collect())
    }

    fn fib(n: usize) -> TruncSeries<GaussRat> {
        let mut v = vec![1i64, 1];
        while v.len() < n {
            v.push(v[v.len() - 1] + v[v.len() - 2]);
        }
        ints(&v[..n])
    }

    #[test]
    fn geometric() {
        let r = reconstruct(&ints(&[1; 20]), 6, 8).unwrap();
        assert_eq!(r.r0, 1);
        assert_eq!(r.denominator.to_string(), "-1 + z");
        assert_eq!(r.numerator.to_string(), "-1");
        assert_eq!(r.verified_to, 19);
        assert_eq!(r.normalization, Normalization::HankelMinor);
    }

    #[test]
    fn fibonacci() {
        let r = reconstruct(&fib(20), 6, 8).unwrap();
        assert_eq!(r.r0, 2);
        assert_eq!(r.denominator, up(&[-1, 1, 1]));
        assert_eq!(r.numerator, up(&[-1, 0]));
        let u = r.unit_constant().unwrap();
        assert_eq!(u.denominator, up(&[1, -1, -1]));
        assert_eq!(u.numerator.to_string(), "1");
    }

    #[test]
    fn zero_series() {
        let r = reconstruct(&ints(&[0; 20]), 6, 8).unwrap();
        assert_eq!(r.r0, 0);
        assert!(r.numerator.is_zero());
        assert_eq!(r.denominator, up(&[1]));
    }

    #[test]
    fn exponential_is_not_rational() {
        let mut c = vec![GaussRat::from_int(1)];
        for j in 1..40 {
            let next = &c[j - 1] / &GaussRat::from_int(j as i64);
            c.push(next);
        }
        let e = reconstruct(&TruncSeries::new("z", c), 8, 8).unwrap_err();
        assert_eq!(e, Error::NotRationalWithinWindow { r_max: 8, order: 40 });
        assert!(e.is_finding());
    }

    #[test]
    fn short_input_is_rejected() {
        assert!(matches!(
            reconstruct(&fib(10), 6, 8),
            Err(Error::InsufficientTruncation { needed: 19, available: 10 })
        ));
    }

    #[test]
    fn recurrence_checks() {
        assert!(verify_recurrence(&fib(20), &up(&[-1, 1, 1]), 0..=15).unwrap());
        assert!(!verify_recurrence(&fib(20), &up(&[-1, 1]), 0..=5).unwrap());
        assert!(verify_recurrence(&ints(&[0; 8]), &up(&[3, 1, 4]), 0..=5).unwrap());
        assert!(verify_recurrence(&fib(5), &up(&[-1, 1, 1]), 0..=3).is_err());
    }

    #[test]
    fn product_checks() {
        let g = ints(&[1; 20]);
        assert!(verify_product(&g, &up(&[-1]), &up(&[-1, 1]), 18).unwrap());
        assert!(!verify_product(&g, &up(&[1]), &up(&[-1, 1]), 0).unwrap());
        let w = series_of_ratfunc(&parse_ratfunc("w/(1-w*z)").unwrap(), "z", 6).unwrap();
        let q = UniPoly::new("z", vec![parse_mpoly("-w").unwrap(), parse_mpoly("w^2").unwrap()]);
        let p = UniPoly::new("z", vec![parse_mpoly("-w^2").unwrap()]);
        assert!(verify_product(&w, &p, &q, 5).unwrap());
    }

    #[test]
    fn parameterized_geometric_branch() {
        let w = series_of_ratfunc(&parse_ratfunc("w/(1-w*z)").unwrap(), "z", 12).unwrap();
        let r = reconstruct(&w, 2, 8).unwrap();
        assert_eq!(r.r0, 1);
        assert_eq!(r.denominator.to_mpoly().unwrap(), parse_mpoly("-w + w^2*z").unwrap());
        assert_eq!(r.numerator.to_mpoly().unwrap(), parse_mpoly("-w^2").unwrap());
        assert!(r.unit_constant().is_none());
    }

    #[test]
    fn berlekamp_massey() {
        assert_eq!(bm_linear_complexity(&ints(&[1; 10])), 1);
        assert_eq!(bm_linear_complexity(&fib(12)), 2);
        assert_eq!(bm_linear_complexity(&ints(&[0; 10])), 0);
        assert_eq!(bm_linear_complexity(&ints(&[0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1])), 6);
    }

    #[test]
    fn sample_check() {
        let q = up(&[-1, 1]);
        let r = denominator_sample_check(&q, &[GaussRat::zero(), GaussRat::frac(1, 2)]);
        assert_eq!(r.zeros, 0);
        assert_eq!(denominator_sample_check(&q, &[GaussRat::from_int(1)]).zeros, 1);
        let pts = [GaussRat::zero(), GaussRat::frac(1, 3), &GaussRat::i() / &GaussRat::from_int(2)];
        assert_eq!(denominator_sample_check(&up(&[-1, 1, 1]), &pts).zeros, 0);
    }

    #[test]
    fn gcd_reduction() {
        // (1+z)/((1+z)(1-2z)) expands like 1/(1-2z)
        let s = series_of_ratfunc(&parse_ratfunc("(1+z)/((1+z)*(1-2*z))").unwrap(), "z", 20)
            .unwrap()
            .to_scalar()
            .unwrap();
        let r = reconstruct(&s, 6, 8).unwrap().reduced();
        assert_eq!(r.denominator, up(&[1, -2]));
        assert_eq!(r.numerator, up(&[1]));
    }

    #[test]
    fn report_json_shape() {
        let r = reconstruct(&fib(20), 6, 8).unwrap().report();
        assert_eq!(r.p, "-1");
        assert_eq!(r.q, "-1 + z + z^2");
    }
}
