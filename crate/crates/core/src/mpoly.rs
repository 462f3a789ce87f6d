//! Sparse multivariate polynomials over `ℚ(i)`.
//!
//! Representation: a sorted variable list plus a map from exponent vectors
//! (aligned with that list) to nonzero coefficients. The form is canonical:
//! no zero coefficients are stored and every listed variable occurs in some
//! term, so structural equality is mathematical equality.
//!
//! Terms are ordered by a graded order: lower total degree first, and within
//! a degree the monomial with the larger exponent on the earlier variable
//! first (`x^2 < x*y < y^2`). Printing follows this order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::scalar::GaussRat;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Natural ordering of variable names: digit runs compare numerically, so
/// `z2 < z10`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let mut ai = a.chars().peekable();
    let mut bi = b.chars().peekable();
    loop {
        match (ai.peek().copied(), bi.peek().copied()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let mut da = String::new();
                while let Some(c) = ai.peek().copied().filter(char::is_ascii_digit) {
                    da.push(c);
                    ai.next();
                }
                let mut db = String::new();
                while let Some(c) = bi.peek().copied().filter(char::is_ascii_digit) {
                    db.push(c);
                    bi.next();
                }
                let ta = da.trim_start_matches('0');
                let tb = db.trim_start_matches('0');
                let ord = ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb)).then_with(|| da.len().cmp(&db.len()));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(&y);
                }
                ai.next();
                bi.next();
            }
        }
    }
}

/// Sorted, deduplicated union of two sorted variable lists, plus the
/// position of each input variable in the union.
fn merge_vars(a: &[String], b: &[String]) -> (Vec<String>, Vec<usize>, Vec<usize>) {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut ma = Vec::with_capacity(a.len());
    let mut mb = Vec::with_capacity(b.len());
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => natural_cmp(x, y),
            (Some(_), None) => Ordering::Less,
            (None, _) => Ordering::Greater,
        };
        match ord {
            Ordering::Less => {
                ma.push(out.len());
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                mb.push(out.len());
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                ma.push(out.len());
                mb.push(out.len());
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    (out, ma, mb)
}

fn remap(m: &Monomial, map: &[usize], width: usize) -> Monomial {
    if map.len() == width {
        return m.clone();
    }
    let mut e = vec![0; width];
    for (k, &pos) in map.iter().enumerate() {
        e[pos] = m.0[k];
    }
    Monomial(e)
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    Monomial(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, GaussRat>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(GaussRat::from_int(1))
    }

    pub fn constant(c: GaussRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(Vec::new()), c);
        }
        MPoly { vars: Vec::new(), terms }
    }

    pub fn from_int(n: i64) -> Self {
        MPoly::constant(GaussRat::from_int(n))
    }

    pub fn var(name: &str) -> Self {
        MPoly::term(GaussRat::from_int(1), &[(name, 1)])
    }

    /// `coeff · Π name^exp`. Repeated names multiply.
    pub fn term(coeff: GaussRat, powers: &[(&str, u32)]) -> Self {
        let mut acc = MPoly::constant(coeff);
        for &(name, e) in powers {
            if e == 0 {
                continue;
            }
            let single = MPoly {
                vars: vec![name.to_string()],
                terms: BTreeMap::from([(Monomial(vec![e]), GaussRat::from_int(1))]),
            };
            acc = &acc * &single;
        }
        acc
    }

    fn from_parts(vars: Vec<String>, mut terms: BTreeMap<Monomial, GaussRat>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        let used: Vec<bool> = (0..vars.len())
            .map(|k| terms.keys().any(|m| m.0[k] > 0))
            .collect();
        if used.iter().all(|&u| u) {
            return MPoly { vars, terms };
        }
        let keep: Vec<usize> = (0..vars.len()).filter(|&k| used[k]).collect();
        let vars = keep.iter().map(|&k| vars[k].clone()).collect();
        let terms = terms
            .into_iter()
            .map(|(m, c)| (Monomial(keep.iter().map(|&k| m.0[k]).collect()), c))
            .collect();
        MPoly { vars, terms }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterate `(exponents aligned with vars(), coefficient)` in term order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &GaussRat)> {
        self.terms.iter().map(|(m, c)| (m.exponents(), c))
    }

    pub fn constant_term(&self) -> GaussRat {
        self.terms
            .get(&Monomial(vec![0; self.vars.len()]))
            .cloned()
            .unwrap_or_default()
    }

    /// Constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<GaussRat> {
        self.is_constant().then(|| self.constant_term())
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        match self.vars.iter().position(|v| v == var) {
            Some(k) => self.terms.keys().map(|m| m.0[k]).max().unwrap_or(0),
            None => 0,
        }
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// Largest term in the graded order.
    pub fn leading_coeff(&self) -> Option<&GaussRat> {
        self.terms.values().next_back()
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Scale so the leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => self.scale(&lc.inv().expect("nonzero")),
            _ => self.clone(),
        }
    }

    fn combine(&self, rhs: &MPoly, negate: bool) -> MPoly {
        if rhs.is_zero() {
            return self.clone();
        }
        let (vars, ma, mb) = merge_vars(&self.vars, &rhs.vars);
        let w = vars.len();
        let mut terms: BTreeMap<Monomial, GaussRat> =
            self.terms.iter().map(|(m, c)| (remap(m, &ma, w), c.clone())).collect();
        for (m, c) in &rhs.terms {
            let key = remap(m, &mb, w);
            let c = if negate { -c } else { c.clone() };
            match terms.get_mut(&key) {
                Some(v) => *v = &*v + &c,
                None => {
                    terms.insert(key, c);
                }
            }
        }
        MPoly::from_parts(vars, terms)
    }

    fn product(&self, rhs: &MPoly) -> MPoly {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        let (vars, ma, mb) = merge_vars(&self.vars, &rhs.vars);
        let w = vars.len();
        let left: Vec<(Monomial, &GaussRat)> =
            self.terms.iter().map(|(m, c)| (remap(m, &ma, w), c)).collect();
        let right: Vec<(Monomial, &GaussRat)> =
            rhs.terms.iter().map(|(m, c)| (remap(m, &mb, w), c)).collect();
        let mut terms: BTreeMap<Monomial, GaussRat> = BTreeMap::new();
        for (ma, ca) in &left {
            for (mb, cb) in &right {
                let key = mono_mul(ma, mb);
                let c = *ca * *cb;
                match terms.get_mut(&key) {
                    Some(v) => *v = &*v + &c,
                    None => {
                        terms.insert(key, c);
                    }
                }
            }
        }
        MPoly::from_parts(vars, terms)
    }

    pub fn pow(&self, e: u32) -> MPoly {
        <Self as Ring>::pow(self, e)
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.inv()?));
        }
        if d.vars.iter().any(|v| !self.vars.contains(v)) {
            return None;
        }
        let (vars, ma, mb) = merge_vars(&self.vars, &d.vars);
        let w = vars.len();
        let divisor: Vec<(Monomial, GaussRat)> =
            d.terms.iter().rev().map(|(m, c)| (remap(m, &mb, w), c.clone())).collect();
        let (lead_m, lead_c) = divisor[0].clone();
        let lead_inv = lead_c.inv()?;
        let mut rem: BTreeMap<Monomial, GaussRat> =
            self.terms.iter().map(|(m, c)| (remap(m, &ma, w), c.clone())).collect();
        let mut quot: BTreeMap<Monomial, GaussRat> = BTreeMap::new();
        while let Some((m, c)) = rem.iter().next_back() {
            if !lead_m.divides(m) {
                return None;
            }
            let tm = Monomial(m.0.iter().zip(&lead_m.0).map(|(a, b)| a - b).collect());
            let tc = c * &lead_inv;
            for (dm, dc) in &divisor {
                let key = mono_mul(dm, &tm);
                let delta = &tc * dc;
                let remove = match rem.get_mut(&key) {
                    Some(v) => {
                        *v = &*v - &delta;
                        v.is_zero()
                    }
                    None => {
                        rem.insert(key.clone(), -delta);
                        false
                    }
                };
                if remove {
                    rem.remove(&key);
                }
            }
            quot.insert(tm, tc);
        }
        Some(MPoly::from_parts(vars, quot))
    }

    /// Substitute values for some variables.
    pub fn eval_partial(&self, values: &BTreeMap<String, GaussRat>) -> MPoly {
        if !self.vars.iter().any(|v| values.contains_key(v)) {
            return self.clone();
        }
        let mut acc = MPoly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for (k, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match values.get(&self.vars[k]) {
                    Some(x) => coeff = &coeff * &x.powi(e),
                    None => rest.push((self.vars[k].as_str(), e)),
                }
            }
            acc = &acc + &MPoly::term(coeff, &rest);
        }
        acc
    }

    /// Full evaluation; every variable must be assigned.
    pub fn eval(&self, values: &BTreeMap<String, GaussRat>) -> Result<GaussRat> {
        if let Some(v) = self.vars.iter().find(|v| !values.contains_key(*v)) {
            return Err(Error::UnboundVariable(v.clone()));
        }
        Ok(self.eval_partial(values).constant_term())
    }

    /// Coefficients of `var^0, var^1, …, var^deg`, each free of `var`.
    pub fn as_univariate(&self, var: &str) -> Vec<MPoly> {
        let Some(k) = self.vars.iter().position(|v| v == var) else {
            return if self.is_zero() { Vec::new() } else { vec![self.clone()] };
        };
        let deg = self.degree_in(var) as usize;
        let mut parts: Vec<BTreeMap<Monomial, GaussRat>> = vec![BTreeMap::new(); deg + 1];
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let j = e[k] as usize;
            e[k] = 0;
            parts[j].insert(Monomial(e), c.clone());
        }
        parts
            .into_iter()
            .map(|t| MPoly::from_parts(self.vars.clone(), t))
            .collect()
    }

    /// `Σ coeffs[j] · var^j`.
    pub fn from_univariate(var: &str, coeffs: &[MPoly]) -> MPoly {
        coeffs.iter().enumerate().fold(MPoly::zero(), |acc, (j, c)| {
            &acc + &(c * &MPoly::term(GaussRat::from_int(1), &[(var, j as u32)]))
        })
    }

    /// Split by monomials in `vars`: returns the coefficient polynomials
    /// (free of `vars`) keyed by the exponent vector over `vars`.
    pub fn coefficients_wrt(&self, vars: &[String]) -> BTreeMap<Vec<u32>, MPoly> {
        let idx: Vec<Option<usize>> = vars
            .iter()
            .map(|v| self.vars.iter().position(|w| w == v))
            .collect();
        let mut parts: BTreeMap<Vec<u32>, BTreeMap<Monomial, GaussRat>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<u32> = idx.iter().map(|k| k.map_or(0, |k| m.0[k])).collect();
            let mut e = m.0.clone();
            for k in idx.iter().flatten() {
                e[*k] = 0;
            }
            parts.entry(key).or_default().insert(Monomial(e), c.clone());
        }
        parts
            .into_iter()
            .map(|(k, t)| (k, MPoly::from_parts(self.vars.clone(), t)))
            .collect()
    }

    /// True if every variable of `self` is in `allowed`.
    pub fn vars_within(&self, allowed: &[String]) -> bool {
        self.vars.iter().all(|v| allowed.contains(v))
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.combine(rhs, false)
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.combine(rhs, true)
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.product(rhs)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Ring for MPoly {
    fn zero() -> Self {
        MPoly::zero()
    }
    fn one() -> Self {
        MPoly::one()
    }
    fn from_i64(n: i64) -> Self {
        MPoly::from_int(n)
    }
    fn is_zero(&self) -> bool {
        MPoly::is_zero(self)
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
        MPoly::div_exact(self, rhs)
    }
    fn inverse(&self) -> Option<Self> {
        self.as_constant()?.inv().map(MPoly::constant)
    }
    fn to_mpoly(&self) -> Option<MPoly> {
        Some(self.clone())
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let c = if neg { -c } else { c.clone() };
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| {
                    if e == 1 {
                        self.vars[k].clone()
                    } else {
                        format!("{}^{}", self.vars[k], e)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", c, factors.join("*"))?;
            }
        }
        Ok(())
    }
}
