//! Reconstruction in several series variables by recursion on the first.
//!
//! At each level `f` is expanded in the leading variable `z` with
//! coefficients `c_j` in the field of rational functions of the remaining
//! variables and parameters. The minimal order `r0` is found over that
//! field and `P`, `Q` are assembled symbolically in atoms `c_0 … c_{2r0-1}`.
//! Each atom is then rewritten as a quotient `p_s/q_s` of polynomials, by
//! recursing on the remaining variables or, at the last level, from the
//! rational function itself. Multiplying through by `∏ q_s^{K_s}` yields
//! polynomial `P̂`, `Q̂` with `f·Q̂ = P̂`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hankel::{minimal_order_with_table, MinimalOrder};
use crate::kronecker::{self, Reconstruction};
use crate::mpoly::MPoly;
use crate::param::{Component, ComponentKind, ExceptionalSet, Point};
use crate::poly1::UniPoly;
use crate::ratfunc::RatFunc;
use crate::series::{expand_quotient, TruncSeries};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiOptions {
    pub r_max: usize,
    pub certify_margin: usize,
    /// Truncation order per level, 1-based. Missing levels use
    /// `2·r_max + certify_margin`.
    pub budgets: BTreeMap<usize, usize>,
}

impl Default for MultiOptions {
    fn default() -> Self {
        MultiOptions { r_max: 8, certify_margin: 8, budgets: BTreeMap::new() }
    }
}

impl MultiOptions {
    pub fn budget(&self, level: usize) -> usize {
        self.budgets.get(&level).copied().unwrap_or(2 * self.r_max + self.certify_margin)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelTrace {
    /// Path through the recursion, e.g. `z1/c2/z2`.
    pub origin: String,
    pub level: usize,
    pub var: String,
    pub r0: usize,
    pub truncation: usize,
    /// `K_s` for each atom `c_s`.
    pub clearing_exponents: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiRecon {
    pub vars: Vec<String>,
    pub params: Vec<String>,
    pub p_hat: MPoly,
    pub q_hat: MPoly,
    pub f_hat: ExceptionalSet,
    pub trace: Vec<LevelTrace>,
    /// Highest index in the leading variable at which `f·Q̂ - P̂` was
    /// checked.
    pub verified_to: usize,
    /// `num(f)·Q̂ = P̂·den(f)` holds as a polynomial identity.
    pub exact_identity: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiReport {
    pub variables: Vec<String>,
    pub parameters: Vec<String>,
    #[serde(rename = "P_hat")]
    pub p_hat: String,
    #[serde(rename = "Q_hat")]
    pub q_hat: String,
    pub verified_to: usize,
    pub exact_identity: bool,
    pub exceptional: ExceptionalReport,
    pub trace: Vec<LevelTrace>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionalReport {
    #[serde(rename = "F1")]
    pub f1: Vec<Component>,
    #[serde(rename = "F2")]
    pub f2: Vec<Component>,
}

impl MultiRecon {
    /// Components from the level generators, at every depth.
    pub fn f_hat1(&self) -> Vec<&Component> {
        self.f_hat.components.iter().filter(|c| !self.is_top_denominator(c)).collect()
    }

    /// The locus where every parameter coefficient of `Q̂` vanishes.
    pub fn f_hat2(&self) -> Vec<&Component> {
        self.f_hat.components.iter().filter(|c| self.is_top_denominator(c)).collect()
    }

    fn is_top_denominator(&self, c: &Component) -> bool {
        c.kind == ComponentKind::DenominatorVanishing && c.origin == self.vars[0]
    }

    /// `Q̂` specialized at a parameter point is a nonzero polynomial.
    pub fn nontrivial_at(&self, point: &Point) -> bool {
        !self.q_hat.eval_partial(point).is_zero()
    }

    /// Cross-multiplication equality with a reconstruction over the field of
    /// rational functions in the trailing variables.
    pub fn agrees_with(&self, tower: &Reconstruction<RatFunc>) -> bool {
        let z = &self.vars[0];
        let lift = |p: &MPoly| UniPoly::new(z.as_str(), p.as_univariate(z).into_iter().map(RatFunc::from).collect());
        UniPoly::cross_eq(&lift(&self.p_hat), &lift(&self.q_hat), &tower.numerator, &tower.denominator)
    }

    pub fn report(&self) -> MultiReport {
        MultiReport {
            variables: self.vars.clone(),
            parameters: self.params.clone(),
            p_hat: self.p_hat.to_string(),
            q_hat: self.q_hat.to_string(),
            verified_to: self.verified_to,
            exact_identity: self.exact_identity,
            exceptional: ExceptionalReport {
                f1: self.f_hat1().into_iter().cloned().collect(),
                f2: self.f_hat2().into_iter().cloned().collect(),
            },
            trace: self.trace.clone(),
        }
    }
}

/// Coefficients of `f` in powers of `var`, as rational functions of the
/// other variables. The denominator must not vanish identically at `var = 0`.
pub fn hartogs_expand(f: &RatFunc, var: &str, n: usize) -> Result<TruncSeries<RatFunc>> {
    let lift = |p: &MPoly| p.as_univariate(var).into_iter().map(RatFunc::from).collect::<Vec<_>>();
    let c = expand_quotient(&lift(f.num()), &lift(f.den()), n, var)?;
    Ok(TruncSeries::new(var, c))
}

/// For input already given as a series of series, the expansion is the
/// outer coefficient list.
pub fn hartogs_expand_nested<R: Clone>(f: &TruncSeries<TruncSeries<R>>, n: usize) -> Result<Vec<TruncSeries<R>>> {
    Ok(f.truncate(n)?.into_coeffs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cleared {
    pub p: UniPoly<MPoly>,
    pub q: UniPoly<MPoly>,
    /// `K_s` per atom.
    pub exponents: Vec<u32>,
}

/// Replace each atom variable `atoms[s]` in the coefficients of `p` and `q`
/// by `quotients[s] = (p_s, q_s)` and multiply through by `∏ q_s^{K_s}`,
/// where `K_s` is the largest power of the atom occurring anywhere.
pub fn clear_denominators(
    p: &UniPoly<MPoly>,
    q: &UniPoly<MPoly>,
    atoms: &[String],
    quotients: &[(MPoly, MPoly)],
) -> Result<Cleared> {
    if let Some(index) = quotients.iter().position(|(_, d)| d.is_zero()) {
        return Err(Error::ZeroDenominatorPolynomial { index });
    }
    let all: Vec<&MPoly> = p.coeffs().iter().chain(q.coeffs()).collect();
    let exponents: Vec<u32> = atoms.iter().map(|a| all.iter().map(|c| c.degree_in(a)).max().unwrap_or(0)).collect();
    let powers = |base: &MPoly, k: u32| {
        let mut v = vec![MPoly::one()];
        for _ in 0..k {
            let next = v.last().expect("nonempty") * base;
            v.push(next);
        }
        v
    };
    let num_pows: Vec<Vec<MPoly>> = quotients.iter().zip(&exponents).map(|((n, _), &k)| powers(n, k)).collect();
    let den_pows: Vec<Vec<MPoly>> = quotients.iter().zip(&exponents).map(|((_, d), &k)| powers(d, k)).collect();
    let substitute = |c: &MPoly| -> MPoly {
        let vars = c.vars();
        let mut acc = MPoly::zero();
        for (e, coeff) in c.terms() {
            let mut rest = Vec::new();
            let mut atom_exp = vec![0u32; atoms.len()];
            for (k, &ek) in e.iter().enumerate() {
                match atoms.iter().position(|a| *a == vars[k]) {
                    Some(s) => atom_exp[s] = ek,
                    None if ek > 0 => rest.push((vars[k].as_str(), ek)),
                    None => {}
                }
            }
            let mut t = MPoly::term(coeff.clone(), &rest);
            for s in 0..atoms.len() {
                let k = exponents[s];
                let es = atom_exp[s];
                t = &(&t * &num_pows[s][es as usize]) * &den_pows[s][(k - es) as usize];
            }
            acc = &acc + &t;
        }
        acc
    };
    Ok(Cleared {
        p: UniPoly::new(p.var(), p.coeffs().iter().map(substitute).collect()),
        q: UniPoly::new(q.var(), q.coeffs().iter().map(substitute).collect()),
        exponents,
    })
}

struct Node {
    p: MPoly,
    q: MPoly,
    set: ExceptionalSet,
    trace: Vec<LevelTrace>,
}

/// Reconstruct `f` in the series variables `var_order`, with `params` as
/// polynomial parameters.
pub fn reconstruct_recursive(f: &RatFunc, var_order: &[String], params: &[String], opts: &MultiOptions) -> Result<MultiRecon> {
    if var_order.is_empty() {
        return Err(Error::InvalidArgument("at least one series variable is required".into()));
    }
    if let Some(v) = f.vars().into_iter().find(|v| !var_order.contains(v) && !params.contains(v)) {
        return Err(Error::UnexpectedVariable(v));
    }
    if let Some(v) = var_order.iter().find(|v| params.contains(v)) {
        return Err(Error::InvalidArgument(format!("`{v}` is both a series variable and a parameter")));
    }
    let node = level(f, var_order, opts, 1, var_order[0].clone())?;
    let exact_identity = &(f.num() * &node.q) == &(&node.p * f.den());
    Ok(MultiRecon {
        vars: var_order.to_vec(),
        params: params.to_vec(),
        p_hat: node.p,
        q_hat: node.q,
        f_hat: node.set,
        trace: node.trace,
        verified_to: opts.budget(1) - 1,
        exact_identity,
    })
}

fn level(f: &RatFunc, vars: &[String], opts: &MultiOptions, depth: usize, origin: String) -> Result<Node> {
    let var = &vars[0];
    let rest = &vars[1..];
    let n = opts.budget(depth);
    let series = hartogs_expand(f, var, n)?;
    let mut trace = LevelTrace {
        origin: origin.clone(),
        level: depth,
        var: var.clone(),
        r0: 0,
        truncation: n,
        clearing_exponents: Vec::new(),
    };
    if series.is_zero() {
        return Ok(Node { p: MPoly::zero(), q: MPoly::one(), set: ExceptionalSet::empty(), trace: vec![trace] });
    }
    let (order, table) = minimal_order_with_table(&series, opts.r_max, opts.certify_margin)?;
    let r0 = match order {
        MinimalOrder::Found { r0, .. } => r0,
        MinimalOrder::NotFound { r_max } => return Err(Error::NotRationalWithinWindow { r_max, order: n }),
    };
    let atoms: Vec<String> = (0..2 * r0).map(|s| format!("$c{s}")).collect();
    let generic = TruncSeries::new(var.as_str(), atoms.iter().map(|a| MPoly::var(a)).collect());
    let (p_sym, q_sym) = kronecker::assemble(&generic, r0)?;

    let children: Vec<Node> = (0..2 * r0)
        .into_par_iter()
        .map(|s| {
            let c = &series.coeffs()[s];
            if rest.is_empty() {
                let (p, q) = c.clone().into_parts();
                Ok(Node { p, q, set: ExceptionalSet::empty(), trace: Vec::new() })
            } else {
                level(c, rest, opts, depth + 1, format!("{origin}/c{s}/{}", rest[0]))
            }
        })
        .collect::<Result<_>>()?;
    let quotients: Vec<(MPoly, MPoly)> = children.iter().map(|c| (c.p.clone(), c.q.clone())).collect();
    let cleared = clear_denominators(&p_sym, &q_sym, &atoms, &quotients)?;

    let lift = |u: &UniPoly<MPoly>| u.map(|c| RatFunc::from(c.clone()));
    if !kronecker::verify_product(&series, &lift(&cleared.p), &lift(&cleared.q), n - 1)? {
        return Err(Error::VerificationFailed(format!("{origin}: f*Q - P does not vanish below index {n}")));
    }
    let p = cleared.p.to_mpoly().expect("polynomial coefficients");
    let q = cleared.q.to_mpoly().expect("polynomial coefficients");
    if q.is_zero() {
        return Err(Error::VerificationFailed(format!("{origin}: cleared denominator is zero")));
    }

    let generator = if r0 == 1 { series.coeffs()[0].clone() } else { table.get(0, r0 - 1).expect("computed").clone() };
    let g = generator.num();
    let mut set = ExceptionalSet::empty();
    if rest.is_empty() {
        let kind = if r0 == 1 { ComponentKind::ConstantTerm } else { ComponentKind::HankelMinor };
        set.add(kind, origin.as_str(), vec![g.clone()])?;
    } else {
        set.add(ComponentKind::LevelSlice, origin.as_str(), g.coefficients_wrt(rest).into_values().collect())?;
    }
    let mut traces = Vec::new();
    for child in children {
        set = set.union(child.set);
        traces.extend(child.trace);
    }
    set.add(ComponentKind::DenominatorVanishing, origin.as_str(), q.coefficients_wrt(vars).into_values().collect())?;

    trace.r0 = r0;
    trace.clearing_exponents = cleared.exponents;
    let mut all = vec![trace];
    all.extend(traces);
    Ok(Node { p, q, set, trace: all })
}

/// Single-level reconstruction over the field of rational functions in the
/// trailing variables and parameters. Used as an independent check.
pub fn cross_check_fieldtower(f: &RatFunc, var_order: &[String], opts: &MultiOptions) -> Result<Reconstruction<RatFunc>> {
    let var = var_order.first().ok_or_else(|| Error::InvalidArgument("no series variable".into()))?;
    let series = hartogs_expand(f, var, opts.budget(1))?;
    kronecker::reconstruct(&series, opts.r_max, opts.certify_margin)
}

/// The field-level reconstruction's own exceptional set: parameters at which
/// `Q(0)` vanishes identically in the trailing variables.
pub fn fieldtower_exceptional(tower: &Reconstruction<RatFunc>, var_order: &[String]) -> Result<ExceptionalSet> {
    let q0 = tower.denominator.coeff(0);
    if tower.r0 == 0 {
        return Ok(ExceptionalSet::empty());
    }
    let kind = if tower.r0 == 1 { ComponentKind::ConstantTerm } else { ComponentKind::HankelMinor };
    let gens = q0.num().coefficients_wrt(&var_order[1..]).into_values().collect();
    ExceptionalSet::from_generators(kind, var_order[0].as_str(), gens)
}
