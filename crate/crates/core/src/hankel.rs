//! Hankel matrices of a truncated series and their determinants.
//!
//! `A(s, m)` is the determinant of the `(m+1)×(m+1)` Hankel matrix with
//! entries `c_{s+i+j}`. The row `s = -1` uses the bordered matrix whose
//! top-left entry is `1` and whose first row and column are
//! `1, c_0, …, c_{m-1}`; it is the Hankel matrix of the sequence
//! `1, c_0, c_1, …`, so the whole table obeys one condensation rule:
//!
//! ```text
//! A(s, m) · A(s+2, m-2) = A(s, m-1) · A(s+2, m-1) − A(s+1, m-1)²
//! ```
//!
//! with the boundary rows `A(s, -1) = 1` and `A(s, 0) = c_s` (`A(-1, 0) = 1`).

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::series::TruncSeries;

pub type Matrix<R> = Vec<Vec<R>>;

/// `H(s, m)`: entry `(i, j)` is `c_{s+i+j}` for `0 <= i, j <= m`.
pub fn hankel_matrix<R: Ring>(series: &TruncSeries<R>, s: usize, m: usize) -> Result<Matrix<R>> {
    series.require(s + 2 * m)?;
    let c = series.coeffs();
    Ok((0..=m).map(|i| (0..=m).map(|j| c[s + i + j].clone()).collect()).collect())
}

/// The bordered matrix `H(-1, m)`.
pub fn extended_matrix<R: Ring>(series: &TruncSeries<R>, m: usize) -> Result<Matrix<R>> {
    if m > 0 {
        series.require(2 * m - 1)?;
    }
    let c = series.coeffs();
    Ok((0..=m)
        .map(|i| {
            (0..=m)
                .map(|j| if i + j == 0 { R::one() } else { c[i + j - 1].clone() })
                .collect()
        })
        .collect())
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
/// Every division is exact in an integral domain.
pub fn det_fraction_free<R: Ring>(mut a: Matrix<R>) -> Result<R> {
    let n = a.len();
    if n == 0 {
        return Ok(R::one());
    }
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(R::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = t.div_exact(&prev).ok_or(Error::InexactDivision)?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { d.neg() } else { d })
}

/// `A(s, m)` computed directly.
pub fn hankel_det<R: Ring>(series: &TruncSeries<R>, s: usize, m: usize) -> Result<R> {
    det_fraction_free(hankel_matrix(series, s, m)?)
}

/// `A(-1, m)` computed directly.
pub fn extended_det<R: Ring>(series: &TruncSeries<R>, m: usize) -> Result<R> {
    det_fraction_free(extended_matrix(series, m)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetMethod {
    Condensation,
    FractionFree,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetEntry<R> {
    pub value: R,
    pub method: DetMethod,
}

/// One row of the JSON dump.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DetRecord {
    pub s: isize,
    pub m: usize,
    pub value: String,
    pub method: DetMethod,
}

/// Table of `A(s, m)` for `m = 0..=m_max` and every shift the truncation
/// supports (`s + 2m <= N-1`, or `2m - 1 <= N-1` for `s = -1`).
///
/// Entries are filled level by level in `m` by condensation; where the
/// divisor `A(s+2, m-2)` vanishes the entry is recomputed by fraction-free
/// elimination instead. Shifts within a level are computed in parallel.
#[derive(Debug, Clone)]
pub struct DetTable<R> {
    series: TruncSeries<R>,
    s_max: usize,
    levels: Vec<BTreeMap<isize, DetEntry<R>>>,
}

impl<R: Ring> DetTable<R> {
    /// Empty table over `series`; `s_max` only limits what is reported.
    pub fn new(series: &TruncSeries<R>, s_max: usize) -> Self {
        DetTable { series: series.clone(), s_max, levels: Vec::new() }
    }

    pub fn source_order(&self) -> usize {
        self.series.order()
    }

    /// Highest completed level, if any.
    pub fn m_max(&self) -> Option<usize> {
        self.levels.len().checked_sub(1)
    }

    pub fn get(&self, s: isize, m: usize) -> Option<&R> {
        self.entry(s, m).map(|e| &e.value)
    }

    pub fn entry(&self, s: isize, m: usize) -> Option<&DetEntry<R>> {
        self.levels.get(m)?.get(&s)
    }

    /// Largest `s >= 0` present at level `m`, if any.
    pub fn max_shift(&self, m: usize) -> Option<usize> {
        let n = self.series.order();
        (n > 2 * m).then(|| n - 1 - 2 * m)
    }

    /// Compute levels up to and including `m`.
    pub fn extend_to(&mut self, m: usize) -> Result<()> {
        while self.levels.len() <= m {
            self.push_level()?;
        }
        Ok(())
    }

    fn push_level(&mut self) -> Result<()> {
        let m = self.levels.len();
        let n = self.series.order() as isize;
        let lo: isize = if 2 * m as isize - 1 <= n - 1 { -1 } else { 0 };
        let hi: isize = n - 1 - 2 * m as isize;
        let hi = hi.max(lo.min(-1));
        let this = &*self;
        let computed: Vec<(isize, DetEntry<R>)> = (lo..=hi)
            .into_par_iter()
            .map(|s| this.compute(s, m).map(|e| (s, e)))
            .collect::<Result<_>>()?;
        self.levels.push(computed.into_iter().collect());
        Ok(())
    }

    fn compute(&self, s: isize, m: usize) -> Result<DetEntry<R>> {
        if m == 0 {
            let value = if s < 0 { R::one() } else { self.series.coeff(s as usize)?.clone() };
            return Ok(DetEntry { value, method: DetMethod::FractionFree });
        }
        let prev = &self.levels[m - 1];
        let n = self.series.order();
        fn at<'a, R>(lvl: &'a BTreeMap<isize, DetEntry<R>>, k: isize, need: usize, n: usize) -> Result<&'a R> {
            lvl.get(&k).map(|e| &e.value).ok_or(Error::InsufficientTruncation { needed: need, available: n })
        }
        let need = (s + 2 * m as isize).max(0) as usize;
        let divisor = if m == 1 { R::one() } else { at(&self.levels[m - 2], s + 2, need, n)?.clone() };
        if !divisor.is_zero() {
            let mid = at(prev, s + 1, need, n)?;
            let lhs = at(prev, s, need, n)?.mul(at(prev, s + 2, need, n)?).sub(&mid.mul(mid));
            let value = lhs.div_exact(&divisor).ok_or(Error::InexactDivision)?;
            return Ok(DetEntry { value, method: DetMethod::Condensation });
        }
        let value = if s < 0 {
            extended_det(&self.series, m)?
        } else {
            hankel_det(&self.series, s as usize, m)?
        };
        Ok(DetEntry { value, method: DetMethod::FractionFree })
    }

    /// Reported entries (`s <= s_max`), ordered by `m` then `s`.
    pub fn entries(&self) -> impl Iterator<Item = (isize, usize, &DetEntry<R>)> {
        let s_max = self.s_max as isize;
        self.levels.iter().enumerate().flat_map(move |(m, lvl)| {
            lvl.range(..=s_max).map(move |(&s, e)| (s, m, e))
        })
    }

    pub fn records(&self) -> Vec<DetRecord> {
        self.entries()
            .map(|(s, m, e)| DetRecord { s, m, value: e.value.to_string(), method: e.method })
            .collect()
    }

    /// Positions whose stored value differs from a direct fraction-free
    /// recomputation. Empty on a correct table.
    pub fn mismatches_against_direct(&self) -> Result<Vec<(isize, usize)>> {
        let mut bad = Vec::new();
        for (s, m, e) in self.entries() {
            let direct = if s < 0 {
                extended_det(&self.series, m)?
            } else {
                hankel_det(&self.series, s as usize, m)?
            };
            if direct != e.value {
                bad.push((s, m));
            }
        }
        Ok(bad)
    }
}

/// Build the table for `m <= m_max` and report shifts `s <= s_max`
/// (default: every shift the truncation supports).
pub fn det_table<R: Ring>(series: &TruncSeries<R>, m_max: usize, s_max: Option<usize>) -> Result<DetTable<R>> {
    let n = series.order();
    series.require(2 * m_max)?;
    let s_max = s_max.unwrap_or(n - 1);
    series.require(s_max)?;
    let mut table = DetTable::new(series, s_max);
    table.extend_to(m_max)?;
    Ok(table)
}

/// Outcome of the minimal-order search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum MinimalOrder {
    /// `A(s, r0) = 0` for every shift `s <= certified_shift`, and `r0` is the
    /// smallest such order. `witness` is the least shift with
    /// `A(s, r0-1) != 0`, if one exists in range.
    Found { r0: usize, witness: Option<usize>, certified_shift: usize },
    NotFound { r_max: usize },
}

impl MinimalOrder {
    pub fn r0(&self) -> Option<usize> {
        match self {
            MinimalOrder::Found { r0, .. } => Some(*r0),
            MinimalOrder::NotFound { .. } => None,
        }
    }
}

/// Smallest `r` in `1..=r_max` with `A(s, r) = 0` for every testable shift.
pub fn minimal_order<R: Ring>(series: &TruncSeries<R>, r_max: usize, certify_margin: usize) -> Result<MinimalOrder> {
    minimal_order_with_table(series, r_max, certify_margin).map(|(o, _)| o)
}

/// [`minimal_order`], also returning the determinant table it built.
pub fn minimal_order_with_table<R: Ring>(
    series: &TruncSeries<R>,
    r_max: usize,
    certify_margin: usize,
) -> Result<(MinimalOrder, DetTable<R>)> {
    if r_max == 0 {
        return Err(Error::InvalidArgument("r_max must be at least 1".into()));
    }
    let need = 2 * r_max + certify_margin;
    let n = series.order();
    if n < need {
        return Err(Error::InsufficientTruncation { needed: need - 1, available: n });
    }
    let mut table = DetTable::new(series, n - 1);
    for r in 1..=r_max {
        table.extend_to(r)?;
        let top = n - 1 - 2 * r;
        let vanishes = (0..=top).all(|s| table.get(s as isize, r).is_some_and(Ring::is_zero));
        if vanishes {
            let witness = (0..=n - 1 - 2 * (r - 1))
                .find(|&s| table.get(s as isize, r - 1).is_some_and(|v| !v.is_zero()));
            let order = MinimalOrder::Found { r0: r, witness, certified_shift: top };
            return Ok((order, table));
        }
    }
    Ok((MinimalOrder::NotFound { r_max }, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::MPoly;
    use crate::parse::parse_mpoly;
    use crate::scalar::GaussRat;

    fn ints(v: &[i64]) -> TruncSeries<GaussRat> {
        TruncSeries::new("z", v.iter().map(|&n| GaussRat::from_int(n)).collect())
    }

    fn fib(n: usize) -> TruncSeries<GaussRat> {
        let mut v = vec![1i64, 1];
        while v.len() < n {
            v.push(v[v.len() - 1] + v[v.len() - 2]);
        }
        ints(&v[..n])
    }

    /// Laplace expansion along the first row.
    fn cofactor_det(a: &Matrix<GaussRat>) -> GaussRat {
        let n = a.len();
        if n == 0 {
            return GaussRat::from_int(1);
        }
        let mut acc = GaussRat::zero();
        for j in 0..n {
            let minor: Matrix<GaussRat> = a[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let t = &a[0][j] * &cofactor_det(&minor);
            acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        acc
    }

    #[test]
    fn matrix_examples() {
        let m = hankel_matrix(&ints(&[1, 1, 2, 3, 5]), 0, 1).unwrap();
        assert_eq!(m, vec![vec![GaussRat::from_int(1), GaussRat::from_int(1)], vec![GaussRat::from_int(1), GaussRat::from_int(2)]]);
        assert_eq!(hankel_matrix(&ints(&[7]), 0, 0).unwrap(), vec![vec![GaussRat::from_int(7)]]);
        assert_eq!(
            hankel_matrix(&ints(&[1, 2, 3]), 1, 1).unwrap_err(),
            Error::InsufficientTruncation { needed: 3, available: 3 }
        );
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(hankel_det(&fib(10), 0, 1).unwrap(), GaussRat::from_int(1));
        let ones = ints(&[1; 10]);
        for s in 0..8 {
            assert!(hankel_det(&ones, s, 1).unwrap().is_zero());
        }
        let w: TruncSeries<MPoly> =
            TruncSeries::new("z", ["w", "w^2", "w^3"].iter().map(|t| parse_mpoly(t).unwrap()).collect());
        assert!(hankel_det(&w, 0, 1).unwrap().is_zero());
    }

    #[test]
    fn extended_examples() {
        assert!(extended_det(&ints(&[1, 1, 1]), 1).unwrap().is_zero());
        assert_eq!(extended_det(&ints(&[]), 0).unwrap(), GaussRat::from_int(1));
        assert!(extended_det(&fib(5), 1).unwrap().is_zero());
        assert!(extended_det(&ints(&[1]), 2).is_err());
    }

    #[test]
    fn fibonacci_table() {
        let t = det_table(&fib(12), 3, None).unwrap();
        let g = |s, m| t.get(s, m).unwrap().clone();
        assert_eq!(g(0, 1), GaussRat::from_int(1));
        assert_eq!(g(1, 1), GaussRat::from_int(-1));
        assert_eq!(g(2, 1), GaussRat::from_int(1));
        assert!(g(0, 2).is_zero());
        // condensation at s = 0, m = 2: 1·1 − (−1)² = 0 = A(0,2)·A(2,0)
        assert_eq!(&(&g(0, 1) * &g(2, 1)) - &(&g(1, 1) * &g(1, 1)), &g(0, 2) * &g(2, 0));
        assert!(t.mismatches_against_direct().unwrap().is_empty());
    }

    #[test]
    fn zero_series_table_falls_back() {
        let t = det_table(&ints(&[0; 9]), 3, None).unwrap();
        for (s, m, e) in t.entries() {
            if s >= 0 {
                assert!(e.value.is_zero());
            }
            if s >= 0 && m >= 2 {
                assert_eq!(e.method, DetMethod::FractionFree);
            }
        }
        // Bordered row: A(-1, m) = 1 for m = 0, 0 afterwards.
        assert_eq!(t.get(-1, 0).unwrap(), &GaussRat::from_int(1));
        assert!(t.get(-1, 1).unwrap().is_zero());
    }

    #[test]
    fn table_matches_cofactor_oracle() {
        let s = ints(&[3, -1, 4, 1, -5, 9, 2, -6, 5, 3, -5, 8]);
        let t = det_table(&s, 3, None).unwrap();
        for (sh, m, e) in t.entries() {
            let mat = if sh < 0 { extended_matrix(&s, m).unwrap() } else { hankel_matrix(&s, sh as usize, m).unwrap() };
            assert_eq!(e.value, cofactor_det(&mat), "A({sh},{m})");
        }
    }

    #[test]
    fn table_range_checks() {
        assert!(det_table(&ints(&[1, 2, 3, 4]), 2, None).is_err());
        assert!(det_table(&ints(&[1, 2, 3, 4, 5]), 2, Some(5)).is_err());
        let t = det_table(&ints(&[1, 2, 3, 4, 5]), 2, Some(1)).unwrap();
        assert!(t.entries().all(|(s, _, _)| s <= 1));
    }

    #[test]
    fn minimal_order_examples() {
        let o = minimal_order(&ints(&[1; 14]), 3, 8).unwrap();
        assert_eq!(o, MinimalOrder::Found { r0: 1, witness: Some(0), certified_shift: 11 });
        let o = minimal_order(&fib(16), 4, 8).unwrap();
        assert_eq!(o.r0(), Some(2));
        assert!(matches!(o, MinimalOrder::Found { witness: Some(0), .. }));
        assert!(matches!(
            minimal_order(&fib(15), 4, 8),
            Err(Error::InsufficientTruncation { needed: 15, available: 15 })
        ));
    }

    #[test]
    fn exponential_has_no_order() {
        let mut fact = GaussRat::from_int(1);
        let mut c = Vec::new();
        for j in 0..40 {
            if j > 0 {
                fact = &fact * &GaussRat::from_int(j);
            }
            c.push(fact.inv().unwrap());
        }
        let o = minimal_order(&TruncSeries::new("z", c), 8, 8).unwrap();
        assert_eq!(o, MinimalOrder::NotFound { r_max: 8 });
    }
}
