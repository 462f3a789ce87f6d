//! Series whose coefficients are polynomials in parameters: exceptional
//! sets of the reconstruction, degree-bound detection and vanishing loci.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hankel::{hankel_det, minimal_order};
use crate::kronecker::Reconstruction;
use crate::mpoly::MPoly;
use crate::poly1::UniPoly;
use crate::ratfunc::RatFunc;
use crate::scalar::GaussRat;
use crate::series::{series_of_ratfunc, TruncSeries};

/// An assignment of values to parameters.
pub type Point = BTreeMap<String, GaussRat>;

pub fn format_point(p: &Point) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ")
}

/// `Σ c_j(w)·z^j` truncated at order `N`, each `c_j` a polynomial in the
/// parameters only.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSeries {
    params: Vec<String>,
    series: TruncSeries<MPoly>,
}

impl ParamSeries {
    pub fn new(var: impl Into<String>, params: Vec<String>, coeffs: Vec<MPoly>) -> Result<Self> {
        for c in &coeffs {
            if let Some(v) = c.vars().iter().find(|v| !params.contains(v)) {
                return Err(Error::UnexpectedVariable(v.clone()));
            }
        }
        Ok(ParamSeries { params, series: TruncSeries::new(var, coeffs) })
    }

    pub fn from_ratfunc(f: &RatFunc, var: &str, params: Vec<String>, n: usize) -> Result<Self> {
        let s = series_of_ratfunc(f, var, n)?;
        ParamSeries::new(var, params, s.into_coeffs())
    }

    pub fn var(&self) -> &str {
        self.series.var()
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn coeffs(&self) -> &[MPoly] {
        self.series.coeffs()
    }

    pub fn as_series(&self) -> &TruncSeries<MPoly> {
        &self.series
    }

    /// Append zero coefficients up to order `n`. Only valid when the extra
    /// coefficients are known to vanish.
    pub fn padded(&self, n: usize) -> Self {
        let mut c = self.coeffs().to_vec();
        c.resize(n.max(c.len()), MPoly::zero());
        ParamSeries { params: self.params.clone(), series: TruncSeries::new(self.var(), c) }
    }

    /// Scalar series at a parameter point; every parameter must be bound.
    pub fn specialize(&self, point: &Point) -> Result<TruncSeries<GaussRat>> {
        self.series.try_map(|c| c.eval(point))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeBound {
    pub k0: usize,
    /// Every coefficient is the zero polynomial.
    pub identically_zero: bool,
}

/// Largest `j` with `c_j != 0`, provided the window ends in zeros.
pub fn detect_degree_bound(ps: &ParamSeries) -> Result<DegreeBound> {
    let n = ps.order();
    if n == 0 {
        return Err(Error::EmptySeries);
    }
    match ps.coeffs().iter().rposition(|c| !c.is_zero()) {
        None => Ok(DegreeBound { k0: 0, identically_zero: true }),
        Some(k) if k == n - 1 => Err(Error::NotPolynomialWithinWindow { order: n }),
        Some(k) => Ok(DegreeBound { k0: k, identically_zero: false }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSample {
    pub point: String,
    /// `None` when the specialization is identically zero.
    pub degree: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub samples: Vec<DegreeSample>,
    pub buckets: BTreeMap<usize, usize>,
    pub zero_count: usize,
}

/// Degree of the specialized polynomial at each point.
pub fn degree_profile(ps: &ParamSeries, points: &[Point]) -> Result<DegreeProfile> {
    let samples: Vec<DegreeSample> = points
        .par_iter()
        .map(|p| {
            let s = ps.specialize(p)?;
            Ok(DegreeSample { point: format_point(p), degree: s.coeffs().iter().rposition(|c| !c.is_zero()) })
        })
        .collect::<Result<_>>()?;
    let mut buckets = BTreeMap::new();
    let mut zero_count = 0;
    for s in &samples {
        match s.degree {
            Some(d) => *buckets.entry(d).or_insert(0) += 1,
            None => zero_count += 1,
        }
    }
    Ok(DegreeProfile { samples, buckets, zero_count })
}

/// Fit `c_j(w)` of degree `<= d` through `(w_i, Σ c_j(w_i) z^j)` for every
/// `j`. The first `d+1` samples determine the fit; later samples are checked
/// against it.
pub fn interpolate_coefficients(
    var: &str,
    param: &str,
    samples: &[(GaussRat, UniPoly<GaussRat>)],
    d: usize,
) -> Result<ParamSeries> {
    for (i, (x, _)) in samples.iter().enumerate() {
        if samples[..i].iter().any(|(y, _)| y == x) {
            return Err(Error::DuplicateSamplePoint(x.to_string()));
        }
    }
    if samples.len() < d + 1 {
        return Err(Error::InsufficientSamples { needed: d + 1, got: samples.len() });
    }
    let (fit, check) = samples.split_at(d + 1);
    let k = samples.iter().filter_map(|(_, p)| p.degree()).max();
    let len = k.map_or(1, |k| k + 1);
    let basis: Vec<UniPoly<GaussRat>> = (0..fit.len()).map(|i| lagrange_basis(param, fit, i)).collect();
    let coeffs: Vec<UniPoly<GaussRat>> = (0..len)
        .map(|j| {
            let mut acc = UniPoly::zero(param);
            for (i, (_, y)) in fit.iter().enumerate() {
                acc = acc.add(&basis[i].scale(&y.coeff(j)));
            }
            acc.trimmed()
        })
        .collect();
    for (x, y) in check {
        if (0..len).any(|j| coeffs[j].eval(x) != y.coeff(j)) {
            return Err(Error::InconsistentSamples { bound: d, point: x.to_string() });
        }
    }
    let coeffs = coeffs.iter().map(|c| c.to_mpoly().expect("scalar coefficients")).collect();
    ParamSeries::new(var, vec![param.to_string()], coeffs)
}

fn lagrange_basis(var: &str, pts: &[(GaussRat, UniPoly<GaussRat>)], i: usize) -> UniPoly<GaussRat> {
    let xi = &pts[i].0;
    let mut acc = UniPoly::new(var, vec![GaussRat::from_int(1)]);
    for (k, (xk, _)) in pts.iter().enumerate() {
        if k != i {
            let f = UniPoly::new(var, vec![-xk, GaussRat::from_int(1)]);
            acc = acc.mul(&f).scale(&(xi - xk).inv().expect("distinct points"));
        }
    }
    acc
}

/// Which part of the construction a component comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentKind {
    /// `c_0 = 0` (order one).
    ConstantTerm,
    /// `A(0, r0-1) = 0`.
    HankelMinor,
    /// All coefficients of a series vanish.
    CommonZeros,
    /// The level generator vanishes identically in the remaining series
    /// variables.
    LevelSlice,
    /// The cleared denominator vanishes identically.
    DenominatorVanishing,
}

/// Common zero set of `generators`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub kind: ComponentKind,
    /// Where in the recursion the component arose, e.g. `z1` or `z1/c3/z2`.
    pub origin: String,
    #[serde(serialize_with = "ser_polys")]
    pub generators: Vec<MPoly>,
}

fn ser_polys<S: serde::Serializer>(v: &[MPoly], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.to_string()))
}

impl Component {
    pub fn contains(&self, point: &Point) -> Result<bool> {
        for g in &self.generators {
            if !g.eval(point)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A finite union of common zero sets in parameter space. The empty union
/// is the empty set; the whole space is represented by [`Locus::AllSpace`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ExceptionalSet {
    pub components: Vec<Component>,
}

impl ExceptionalSet {
    pub fn empty() -> Self {
        ExceptionalSet::default()
    }

    /// The set `{g_1 = … = g_k = 0}`. Generators are stored monic and
    /// without repeats. A nonzero constant generator makes the set empty; a
    /// zero generator is rejected.
    pub fn from_generators(kind: ComponentKind, origin: impl Into<String>, generators: Vec<MPoly>) -> Result<Self> {
        let mut set = ExceptionalSet::empty();
        set.add(kind, origin, generators)?;
        Ok(set)
    }

    pub fn add(&mut self, kind: ComponentKind, origin: impl Into<String>, generators: Vec<MPoly>) -> Result<()> {
        if generators.iter().any(MPoly::is_zero) {
            return Err(Error::ZeroGenerator);
        }
        if generators.iter().any(MPoly::is_constant) {
            return Ok(());
        }
        let mut gens: Vec<MPoly> = Vec::with_capacity(generators.len());
        for g in generators.iter().map(MPoly::monic) {
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
        let c = Component { kind, origin: origin.into(), generators: gens };
        if !self.components.contains(&c) {
            self.components.push(c);
        }
        Ok(())
    }

    pub fn union(mut self, other: ExceptionalSet) -> Self {
        for c in other.components {
            if !self.components.contains(&c) {
                self.components.push(c);
            }
        }
        self
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, point: &Point) -> Result<bool> {
        for c in &self.components {
            if c.contains(point)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Every generator of every component, in order.
    pub fn generators(&self) -> impl Iterator<Item = &MPoly> {
        self.components.iter().flat_map(|c| c.generators.iter())
    }

    /// One polynomial with the same zero set, when every generator is in
    /// the single parameter `param`: the product over components of the
    /// monic gcd of their generators. `1` for the empty set.
    pub fn univariate_generator(&self, param: &str) -> Option<MPoly> {
        let mut out = UniPoly::new(param, vec![GaussRat::from_int(1)]);
        for c in &self.components {
            let mut g = UniPoly::zero(param);
            for gen in &c.generators {
                g = g.gcd(&UniPoly::from_mpoly(gen, param).ok()?);
            }
            out = out.mul(&g);
        }
        out.to_mpoly()
    }
}

/// Where a parameterized series vanishes identically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Locus {
    Set {
        set: ExceptionalSet,
        /// Reported in the one-parameter case only: the locus is finite, so
        /// its complement is dense.
        complement_dense: Option<bool>,
    },
    AllSpace,
}

/// The set of parameters at which every known coefficient vanishes.
pub fn vanishing_locus(ps: &ParamSeries) -> Result<Locus> {
    let nonzero: Vec<MPoly> = ps.coeffs().iter().filter(|c| !c.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Ok(Locus::AllSpace);
    }
    if let [param] = ps.params() {
        let g = nonzero
            .iter()
            .map(|c| UniPoly::from_mpoly(c, param))
            .try_fold(UniPoly::zero(param.as_str()), |acc, u| u.map(|u| acc.gcd(&u)))?;
        let gen = g.to_mpoly().expect("scalar coefficients");
        let set = ExceptionalSet::from_generators(ComponentKind::CommonZeros, ps.var(), vec![gen])?;
        return Ok(Locus::Set { set, complement_dense: Some(true) });
    }
    let set = ExceptionalSet::from_generators(ComponentKind::CommonZeros, ps.var(), nonzero)?;
    Ok(Locus::Set { set, complement_dense: None })
}

/// Parameters where the reconstructed denominator may degenerate:
/// `{c_0 = 0}` for order one, `{A(0, r0-1) = 0}` otherwise.
pub fn exceptional_set(ps: &ParamSeries, recon: &Reconstruction<MPoly>) -> Result<ExceptionalSet> {
    match recon.r0 {
        0 => Ok(ExceptionalSet::empty()),
        1 => ExceptionalSet::from_generators(ComponentKind::ConstantTerm, ps.var(), vec![ps.as_series().coeff(0)?.clone()]),
        r0 => {
            let a = hankel_det(ps.as_series(), 0, r0 - 1)?;
            ExceptionalSet::from_generators(ComponentKind::HankelMinor, ps.var(), vec![a])
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NontrivialitySample {
    pub point: String,
    pub in_set: bool,
    /// Whether the specialized denominator is a nonzero polynomial.
    pub nontrivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NontrivialityReport {
    pub samples: Vec<NontrivialitySample>,
    /// Points outside the set where the denominator specializes to zero.
    pub violations: usize,
}

/// Specialize `q` (a polynomial in series variables and parameters) at each
/// point and check that it stays nonzero off the exceptional set.
pub fn nontriviality_check(q: &MPoly, set: &ExceptionalSet, points: &[Point]) -> Result<NontrivialityReport> {
    let samples: Vec<NontrivialitySample> = points
        .iter()
        .map(|p| {
            Ok(NontrivialitySample {
                point: format_point(p),
                in_set: set.contains(p)?,
                nontrivial: !q.eval_partial(p).is_zero(),
            })
        })
        .collect::<Result<_>>()?;
    let violations = samples.iter().filter(|s| !s.in_set && !s.nontrivial).count();
    Ok(NontrivialityReport { samples, violations })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointwiseOrder {
    pub point: String,
    /// `None` if no order up to `r_max` fits, or the series vanishes.
    pub r0: Option<usize>,
}

/// Minimal order of each specialized scalar series.
pub fn pointwise_orders(ps: &ParamSeries, points: &[Point], r_max: usize, certify_margin: usize) -> Result<Vec<PointwiseOrder>> {
    points
        .par_iter()
        .map(|p| {
            let s = ps.specialize(p)?;
            let r0 = if s.is_zero() { Some(0) } else { minimal_order(&s, r_max, certify_margin)?.r0() };
            Ok(PointwiseOrder { point: format_point(p), r0 })
        })
        .collect()
}

/// Flatten a reconstructed `Q` with parameter coefficients to one polynomial.
pub fn flatten(q: &UniPoly<MPoly>) -> MPoly {
    q.to_mpoly().expect("polynomial coefficients")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kronecker::reconstruct;
    use crate::parse::{parse_mpoly, parse_ratfunc};

    fn mp(s: &str) -> MPoly {
        parse_mpoly(s).unwrap()
    }

    fn ps(c: &[&str]) -> ParamSeries {
        ParamSeries::new("z", vec!["w".into()], c.iter().map(|s| mp(s)).collect()).unwrap()
    }

    fn at(w: i64) -> Point {
        Point::from([("w".to_string(), GaussRat::from_int(w))])
    }

    fn up(v: &[i64]) -> UniPoly<GaussRat> {
        UniPoly::new("z", v.iter().map(|&n| GaussRat::from_int(n)).collect())
    }

    #[test]
    fn degree_bound() {
        let mut c = vec!["w^2", "0", "w"];
        c.extend(["0"; 9]);
        assert_eq!(detect_degree_bound(&ps(&c)).unwrap(), DegreeBound { k0: 2, identically_zero: false });
        assert_eq!(detect_degree_bound(&ps(&["0"; 5])).unwrap(), DegreeBound { k0: 0, identically_zero: true });
        assert_eq!(detect_degree_bound(&ps(&["1", "w", "w^2"])).unwrap_err(), Error::NotPolynomialWithinWindow { order: 3 });
        assert_eq!(detect_degree_bound(&ps(&[])).unwrap_err(), Error::EmptySeries);
        assert!(ParamSeries::new("z", vec!["w".into()], vec![mp("z")]).is_err());
    }

    #[test]
    fn profile() {
        let p = degree_profile(&ps(&["w", "1-w"]), &[at(0), at(1), at(2)]).unwrap();
        let d: Vec<_> = p.samples.iter().map(|s| s.degree).collect();
        assert_eq!(d, vec![Some(1), Some(0), Some(1)]);
        assert_eq!(p.buckets, BTreeMap::from([(0, 1), (1, 2)]));
        assert_eq!(degree_profile(&ps(&["0", "0"]), &[at(3)]).unwrap().samples[0].degree, None);
        assert_eq!(degree_profile(&ps(&["1", "w"]), &[at(0)]).unwrap().samples[0].degree, Some(0));
    }

    #[test]
    fn interpolation() {
        let s = vec![
            (GaussRat::from_int(0), up(&[1])),
            (GaussRat::from_int(1), up(&[1, 1])),
            (GaussRat::from_int(2), up(&[1, 2])),
        ];
        let r = interpolate_coefficients("z", "w", &s, 1).unwrap();
        assert_eq!(r.coeffs(), &[mp("1"), mp("w")]);
        let one = interpolate_coefficients("z", "w", &s[..1], 0).unwrap();
        assert_eq!(one.coeffs(), &[mp("1")]);
        let sq: Vec<_> = (0..4).map(|w| (GaussRat::from_int(w), up(&[w * w]))).collect();
        assert!(matches!(interpolate_coefficients("z", "w", &sq, 1), Err(Error::InconsistentSamples { bound: 1, .. })));
        let dup = vec![s[0].clone(), s[0].clone()];
        assert!(matches!(interpolate_coefficients("z", "w", &dup, 1), Err(Error::DuplicateSamplePoint(_))));
        assert!(matches!(interpolate_coefficients("z", "w", &s[..1], 1), Err(Error::InsufficientSamples { .. })));
    }

    #[test]
    fn vanishing() {
        let Locus::Set { set, complement_dense } = vanishing_locus(&ps(&["w", "w^2", "w^3"])).unwrap() else { panic!() };
        assert_eq!(set.generators().collect::<Vec<_>>(), vec![&mp("w")]);
        assert_eq!(complement_dense, Some(true));
        let Locus::Set { set, .. } = vanishing_locus(&ps(&["1", "w"])).unwrap() else { panic!() };
        assert!(set.is_empty());
        assert_eq!(vanishing_locus(&ps(&["0", "0", "0"])).unwrap(), Locus::AllSpace);
    }

    #[test]
    fn exceptional_sets() {
        let f = ParamSeries::from_ratfunc(&parse_ratfunc("w/(1-w*z)").unwrap(), "z", vec!["w".into()], 12).unwrap();
        let r = reconstruct(f.as_series(), 2, 8).unwrap();
        let e = exceptional_set(&f, &r).unwrap();
        assert_eq!(e.generators().collect::<Vec<_>>(), vec![&mp("w")]);
        assert!(e.contains(&at(0)).unwrap());
        assert!(!e.contains(&at(1)).unwrap());
        let rep = nontriviality_check(&flatten(&r.denominator), &e, &[at(0), at(1), at(-3)]).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(!rep.samples[0].nontrivial);

        let g = ParamSeries::from_ratfunc(&parse_ratfunc("1/(1-w*z)").unwrap(), "z", vec!["w".into()], 12).unwrap();
        let r = reconstruct(g.as_series(), 2, 8).unwrap();
        assert!(exceptional_set(&g, &r).unwrap().is_empty());

        let h = ParamSeries::from_ratfunc(&parse_ratfunc("1/(1-w*z-z^2)").unwrap(), "z", vec!["w".into()], 14).unwrap();
        assert_eq!(h.coeffs()[2], mp("w^2+1"));
        let r = reconstruct(h.as_series(), 3, 8).unwrap();
        assert_eq!(r.r0, 2);
        assert!(exceptional_set(&h, &r).unwrap().is_empty());
    }

    #[test]
    fn zero_generator_rejected() {
        assert_eq!(
            ExceptionalSet::from_generators(ComponentKind::HankelMinor, "z", vec![MPoly::zero()]).unwrap_err(),
            Error::ZeroGenerator
        );
    }

    #[test]
    fn pointwise_orders_drop_at_special_points() {
        let h = ParamSeries::from_ratfunc(&parse_ratfunc("w/(1-w*z)").unwrap(), "z", vec!["w".into()], 12).unwrap();
        let o = pointwise_orders(&h, &[at(0), at(2)], 2, 8).unwrap();
        assert_eq!(o[0].r0, Some(0));
        assert_eq!(o[1].r0, Some(1));
    }
}
