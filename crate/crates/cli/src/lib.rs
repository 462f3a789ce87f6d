//! Job specifications and report generation for the `hankel-recon` binary.
//!
//! A job is a JSON document:
//!
//! ```json
//! {
//!   "mode": "reconstruct-param",
//!   "parameters": ["w"],
//!   "series": {"var": "z", "coeffs": ["1", "w", "w^2+1"]},
//!   "r_max": 8,
//!   "certify_margin": 8
//! }
//! ```
//!
//! Exactly one input source is allowed: `series`, `expr` or `samples`.
//! Command-line flags are merged into the same document before validation,
//! so both paths share one set of checks.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use hankel_recon::hankel::{det_table, minimal_order};
use hankel_recon::kronecker::{bm_linear_complexity, denominator_sample_check, reconstruct, verify_product, verify_recurrence};
use hankel_recon::mpoly::natural_cmp;
use hankel_recon::multivar::{cross_check_fieldtower, fieldtower_exceptional, hartogs_expand, reconstruct_recursive, MultiOptions};
use hankel_recon::param::{
    degree_profile, detect_degree_bound, exceptional_set, flatten, interpolate_coefficients, nontriviality_check,
    pointwise_orders, vanishing_locus, Locus, ParamSeries, Point,
};
use hankel_recon::parse::{parse_mpoly, parse_ratfunc, parse_scalar};
use hankel_recon::series::series_of_ratfunc;
use hankel_recon::{Error, GaussRat, MPoly, ParseError, TruncSeries, UniPoly};
use serde::Deserialize;
use serde_json::{json, Value};

pub const DEFAULT_R_MAX: usize = 8;
pub const DEFAULT_MARGIN: usize = 8;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Expand,
    Analyze,
    Reconstruct,
    ReconstructParam,
    ReconstructMulti,
    Classify,
    Verify,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesField {
    var: Option<String>,
    coeffs: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    mode: Option<Mode>,
    #[serde(default)]
    variables: Vec<String>,
    #[serde(default)]
    parameters: Vec<String>,
    series: Option<SeriesField>,
    expr: Option<String>,
    samples: Option<Vec<(String, String)>>,
    r_max: Option<i64>,
    certify_margin: Option<i64>,
    #[serde(default)]
    budgets: BTreeMap<String, i64>,
    #[serde(default)]
    points: Vec<String>,
    order: Option<usize>,
    m_max: Option<usize>,
    s_max: Option<usize>,
    degree_bound: Option<usize>,
    numerator: Option<String>,
    denominator: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Coeffs(Vec<String>),
    Expr(String),
    /// `(parameter value, polynomial in the series variable)` pairs.
    Samples(Vec<(String, String)>),
}

/// A validated job.
#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub mode: Mode,
    pub input: Input,
    /// Series variable of a coefficient list, or the leading variable.
    pub var: String,
    pub variables: Vec<String>,
    pub parameters: Vec<String>,
    pub r_max: usize,
    /// False when `r_max` is the default, which then shrinks to fit short
    /// coefficient lists.
    pub r_max_given: bool,
    pub certify_margin: usize,
    pub budgets: BTreeMap<usize, usize>,
    pub points: Vec<String>,
    pub order: Option<usize>,
    pub m_max: Option<usize>,
    pub s_max: Option<usize>,
    pub degree_bound: Option<usize>,
    pub numerator: Option<String>,
    pub denominator: Option<String>,
}

/// 1-based line and column of the first occurrence of `"key"`, or the
/// document start.
fn locate(text: &str, key: &str) -> (usize, usize) {
    let Some(at) = text.find(&format!("\"{key}\"")) else {
        return (1, 1);
    };
    let before = &text[..at];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn invalid(text: &str, key: &str, msg: impl Into<String>) -> ParseError {
    let (line, column) = locate(text, key);
    ParseError::new(line, column, msg)
}

/// Parse and validate a JSON job.
pub fn parse_spec(text: &str) -> Result<JobSpec, ParseError> {
    let raw: RawSpec =
        serde_json::from_str(text).map_err(|e| ParseError::new(e.line().max(1), e.column().max(1), e.to_string()))?;
    let mode = raw.mode.ok_or_else(|| invalid(text, "mode", "missing \"mode\""))?;
    let sources = [raw.series.is_some(), raw.expr.is_some(), raw.samples.is_some()];
    let input = match (raw.series, raw.expr, raw.samples) {
        _ if sources.iter().filter(|&&b| b).count() > 1 => {
            let key = if sources[1] { "expr" } else { "samples" };
            return Err(invalid(text, key, "exactly one of \"series\", \"expr\", \"samples\" may be given"));
        }
        (Some(s), None, None) => (s.var, Input::Coeffs(s.coeffs)),
        (None, Some(e), None) => (None, Input::Expr(e)),
        (None, None, Some(s)) => (None, Input::Samples(s)),
        _ => return Err(ParseError::new(1, 1, "no input: give \"series\", \"expr\" or \"samples\"")),
    };
    let (series_var, input) = input;
    let r_max = raw.r_max.unwrap_or(DEFAULT_R_MAX as i64);
    if r_max < 1 {
        return Err(invalid(text, "r_max", format!("r_max must be at least 1, got {r_max}")));
    }
    let margin = raw.certify_margin.unwrap_or(DEFAULT_MARGIN as i64);
    if margin < 0 {
        return Err(invalid(text, "certify_margin", format!("certify_margin must be non-negative, got {margin}")));
    }
    let mut budgets = BTreeMap::new();
    for (k, v) in &raw.budgets {
        let level: usize = k
            .parse()
            .ok()
            .filter(|&l| l >= 1)
            .ok_or_else(|| invalid(text, "budgets", format!("budget level `{k}` is not a positive integer")))?;
        if *v < 1 {
            return Err(invalid(text, "budgets", format!("budget for level {level} must be positive")));
        }
        budgets.insert(level, *v as usize);
    }
    for p in &raw.parameters {
        if raw.variables.contains(p) {
            return Err(invalid(text, "parameters", format!("`{p}` is both a variable and a parameter")));
        }
    }
    let needs = |ok: bool, key: &str, msg: &str| if ok { Ok(()) } else { Err(invalid(text, key, msg)) };
    match mode {
        Mode::ReconstructMulti => needs(matches!(input, Input::Expr(_)), "mode", "reconstruct-multi needs \"expr\"")?,
        Mode::Verify => needs(
            raw.numerator.is_some() && raw.denominator.is_some(),
            "mode",
            "verify needs \"numerator\" and \"denominator\"",
        )?,
        _ => {}
    }
    if let Input::Samples(_) = input {
        needs(mode == Mode::Classify, "samples", "\"samples\" input is only accepted by classify")?;
        needs(raw.degree_bound.is_some(), "samples", "\"samples\" input needs \"degree_bound\"")?;
        needs(raw.parameters.len() == 1, "samples", "\"samples\" input needs exactly one parameter")?;
    }
    let var = series_var.or_else(|| raw.variables.first().cloned()).unwrap_or_else(|| "z".to_string());
    Ok(JobSpec {
        mode,
        input,
        var,
        variables: raw.variables,
        parameters: raw.parameters,
        r_max: r_max as usize,
        r_max_given: raw.r_max.is_some(),
        certify_margin: margin as usize,
        budgets,
        points: raw.points,
        order: raw.order,
        m_max: raw.m_max,
        s_max: raw.s_max,
        degree_bound: raw.degree_bound,
        numerator: raw.numerator,
        denominator: raw.denominator,
    })
}

/// Report plus process exit status: 0 success, 2 a mathematical finding.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub exit_code: i32,
    pub report: Value,
}

impl JobSpec {
    fn default_order(&self) -> usize {
        self.order.unwrap_or(2 * self.r_max + self.certify_margin)
    }

    /// Largest admissible `r_max` for `n` coefficients unless one was given.
    fn fit_r_max(&self, n: usize) -> usize {
        if self.r_max_given {
            self.r_max
        } else {
            self.r_max.min(n.saturating_sub(self.certify_margin) / 2).max(1)
        }
    }

    fn window(&self, order: usize) -> Value {
        json!({"order": order, "r_max": self.fit_r_max(order), "certify_margin": self.certify_margin})
    }

    fn poly_series(&self) -> Result<TruncSeries<MPoly>, CliError> {
        match &self.input {
            Input::Coeffs(c) => {
                let coeffs = c
                    .iter()
                    .enumerate()
                    .map(|(j, s)| {
                        let p = parse_mpoly(s).map_err(|e| ParseError::new(e.line, e.column, format!("coefficient {j}: {}", e.message)))?;
                        if let Some(v) = p.vars().iter().find(|v| !self.parameters.contains(v)) {
                            return Err(CliError::Compute(Error::UnexpectedVariable(v.clone())));
                        }
                        Ok(p)
                    })
                    .collect::<Result<_, CliError>>()?;
                Ok(TruncSeries::new(self.var.as_str(), coeffs))
            }
            Input::Expr(e) => Ok(series_of_ratfunc(&parse_ratfunc(e)?, &self.var, self.default_order())?),
            Input::Samples(_) => Err(Error::InvalidArgument("this mode needs \"series\" or \"expr\" input".into()).into()),
        }
    }

    fn param_series(&self) -> Result<ParamSeries, CliError> {
        let s = self.poly_series()?;
        Ok(ParamSeries::new(self.var.as_str(), self.parameters.clone(), s.into_coeffs())?)
    }

    /// `--points` entries: `w=1, v=2`, or a bare value when there is exactly
    /// one name to bind.
    fn parse_points(&self, names: &[String]) -> Result<Vec<Point>, CliError> {
        self.points
            .iter()
            .map(|p| {
                let mut point = Point::new();
                if p.contains('=') {
                    for part in p.split(',') {
                        let (k, v) = part
                            .split_once('=')
                            .ok_or_else(|| ParseError::new(1, 1, format!("malformed point `{p}`")))?;
                        point.insert(k.trim().to_string(), parse_scalar(v.trim())?);
                    }
                } else if let [name] = names {
                    point.insert(name.clone(), parse_scalar(p)?);
                } else {
                    return Err(ParseError::new(1, 1, format!("point `{p}` must name its coordinates")).into());
                }
                Ok(point)
            })
            .collect()
    }

    fn series_variables(&self, f: &hankel_recon::RatFunc) -> Vec<String> {
        if !self.variables.is_empty() {
            return self.variables.clone();
        }
        let mut v: Vec<String> = f.vars().into_iter().filter(|v| !self.parameters.contains(v)).collect();
        v.sort_by(|a, b| natural_cmp(a, b));
        v
    }
}

fn finding(e: &Error, window: Value) -> RunOutput {
    RunOutput { exit_code: 2, report: json!({"finding": e.to_string(), "window": window}) }
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Execute a job.
pub fn run(spec: &JobSpec) -> Result<RunOutput, CliError> {
    let out = match spec.mode {
        Mode::Expand => run_expand(spec),
        Mode::Analyze => run_analyze(spec),
        Mode::Reconstruct => run_reconstruct(spec),
        Mode::ReconstructParam => run_reconstruct_param(spec),
        Mode::ReconstructMulti => run_reconstruct_multi(spec),
        Mode::Classify => run_classify(spec),
        Mode::Verify => run_verify(spec),
    };
    match out {
        Err(CliError::Compute(e)) if e.is_finding() => {
            let order = match &spec.input {
                Input::Coeffs(c) => c.len(),
                _ => spec.default_order(),
            };
            Ok(finding(&e, spec.window(order)))
        }
        other => other,
    }
}

fn ok(report: Value) -> Result<RunOutput, CliError> {
    Ok(RunOutput { exit_code: 0, report })
}

fn run_expand(spec: &JobSpec) -> Result<RunOutput, CliError> {
    let (var, coeffs) = match &spec.input {
        Input::Expr(e) => {
            let f = parse_ratfunc(e)?;
            let var = spec.series_variables(&f).first().cloned().unwrap_or_else(|| spec.var.clone());
            let s = hartogs_expand(&f, &var, spec.default_order())?;
            (var, strings(s.coeffs()))
        }
        _ => {
            let s = spec.poly_series()?;
            (spec.var.clone(), strings(s.coeffs()))
        }
    };
    ok(json!({"var": var, "order": coeffs.len(), "coeffs": coeffs}))
}

fn run_analyze(spec: &JobSpec) -> Result<RunOutput, CliError> {
    let s = spec.poly_series()?;
    let n = s.order();
    if n == 0 {
        return Err(Error::EmptySeries.into());
    }
    let m_max = spec.m_max.unwrap_or_else(|| spec.fit_r_max(n).min((n - 1) / 2));
    let table = det_table(&s, m_max, spec.s_max)?;
    let order = match minimal_order(&s, spec.fit_r_max(n), spec.certify_margin) {
        Ok(o) => serde_json::to_value(o).expect("serializable"),
        Err(Error::InsufficientTruncation { .. }) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    ok(json!({
        "window": spec.window(n),
        "m_max": m_max,
        "s_max": spec.s_max.unwrap_or(n - 1),
        "minimal_order": order,
        "entries": table.records(),
    }))
}

fn run_reconstruct(spec: &JobSpec) -> Result<RunOutput, CliError> {
    let s = spec.poly_series()?.to_scalar()?;
    let r = reconstruct(&s, spec.fit_r_max(s.order()), spec.certify_margin)?;
    let view = |p: &UniPoly<GaussRat>, q: &UniPoly<GaussRat>| json!({"P": p.to_string(), "Q": q.to_string()});
    let unit = r.unit_constant().map(|u| view(&u.numerator, &u.denominator));
    let red = r.reduced();
    let mut report = json!({
        "window": spec.window(s.order()),
        "reconstruction": r.report(),
        "unit_constant": unit,
        "reduced": view(&red.numerator, &red.denominator),
        "linear_complexity": bm_linear_complexity(&s),
    });
    if !spec.points.is_empty() {
        let pts = spec.parse_points(&[s.var().to_string()])?;
        let xs: Vec<GaussRat> = pts.into_iter().map(|p| p.into_values().next().expect("one coordinate")).collect();
        report["denominator_samples"] = serde_json::to_value(denominator_sample_check(&r.denominator, &xs)).expect("serializable");
    }
    ok(report)
}

fn run_reconstruct_param(spec: &JobSpec) -> Result<RunOutput, CliError> {
    let ps = spec.param_series()?;
    let r = reconstruct(ps.as_series(), spec.fit_r_max(ps.order()), spec.certify_margin)?;
    let fset = exceptional_set(&ps, &r)?;
    let pts = spec.parse_points(&spec.parameters)?;
    let mut report = json!({
        "window": spec.window(ps.order()),
        "parameters": spec.parameters,
        "reconstruction": r.report(),
        "exceptional_generators": fset.generators().map(ToString::to_string).collect::<Vec<_>>(),
        "exceptional_set": fset,
        "vanishing_locus": vanishing_locus(&ps)?,
    });
    if !pts.is_empty() {
        report["nontriviality"] = serde_json::to_value(nontriviality_check(&flatten(&r.denominator), &fset, &pts)?).expect("serializable");
        report["pointwise_orders"] =
            serde_json::to_value(pointwise_orders(&ps, &pts, spec.fit_r_max(ps.order()), spec.certify_margin)?).expect("serializable");
    }
    ok(report)
}

fn run_reconstruct_multi(spec: &JobSpec) -> Result<RunOutput, CliError> {
    let Input::Expr(e) = &spec.input else { unreachable!("validated") };
    let f = parse_ratfunc(e)?;
    let vars = spec.series_variables(&f);
    if vars.is_empty() {
        return Err(Error::InvalidArgument("expression has no series variable".into()).into());
    }
    let opts = MultiOptions { r_max: spec.r_max, certify_margin: spec.certify_margin, budgets: spec.budgets.clone() };
    let r = reconstruct_recursive(&f, &vars, &spec.parameters, &opts)?;
    let tower = cross_check_fieldtower(&f, &vars, &opts)?;
    let tower_set = fieldtower_exceptional(&tower, &vars)?;
    let mut report = json!({
        "window": spec.window(opts.budget(1)),
        "reconstruction": r.report(),
        "field_tower": {
            "r0": tower.r0,
            "P": tower.numerator.to_string(),
            "Q": tower.denominator.to_string(),
            "agrees": r.agrees_with(&tower),
            "exceptional_set": tower_set,
        },
    });
    let pts = spec.parse_points(&spec.parameters)?;
    if !pts.is_empty() {
        report["nontriviality"] = serde_json::to_value(nontriviality_check(&r.q_hat, &r.f_hat, &pts)?).expect("serializable");
    }
    ok(report)
}

fn run_classify(spec: &JobSpec) -> Result<RunOutput, CliError> {
    let ps = match &spec.input {
        Input::Samples(samples) => {
            let param = &spec.parameters[0];
            let parsed = samples
                .iter()
                .map(|(x, p)| {
                    let poly = UniPoly::from_mpoly(&parse_mpoly(p)?, &spec.var)?;
                    Ok((parse_scalar(x)?, poly))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let fit = interpolate_coefficients(&spec.var, param, &parsed, spec.degree_bound.expect("validated"))?;
            // Sampled polynomials are exact, so trailing zeros are known.
            fit.padded(fit.order() + spec.certify_margin.max(1))
        }
        _ => spec.param_series()?,
    };
    let bound = detect_degree_bound(&ps)?;
    let pts = spec.parse_points(&spec.parameters)?;
    let locus = vanishing_locus(&ps)?;
    let generators: Vec<String> = match &locus {
        Locus::AllSpace => Vec::new(),
        Locus::Set { set, .. } => set.generators().map(ToString::to_string).collect(),
    };
    let mut report = json!({
        "window": spec.window(ps.order()),
        "k0": bound.k0,
        "identically_zero": bound.identically_zero,
        "coeffs": strings(&ps.coeffs()[..=bound.k0]),
        "exceptional_generators": generators,
        "vanishing_locus": locus,
    });
    if !pts.is_empty() {
        report["degree_profile"] = serde_json::to_value(degree_profile(&ps, &pts)?).expect("serializable");
    }
    ok(report)
}

fn run_verify(spec: &JobSpec) -> Result<RunOutput, CliError> {
    let s = spec.poly_series()?;
    let n = s.order();
    if n == 0 {
        return Err(Error::EmptySeries.into());
    }
    let as_uni = |text: &str| -> Result<UniPoly<MPoly>, CliError> {
        let p = parse_mpoly(text)?;
        Ok(UniPoly::new(spec.var.as_str(), p.as_univariate(&spec.var)))
    };
    let p = as_uni(spec.numerator.as_deref().expect("validated"))?;
    let q = as_uni(spec.denominator.as_deref().expect("validated"))?;
    let r0 = q.coeffs().len().saturating_sub(1);
    let product = verify_product(&s, &p, &q, n - 1)?;
    let recurrence = if n > r0 { verify_recurrence(&s, &q, 0..=n - 1 - r0)? } else { true };
    let report = json!({
        "window": spec.window(n),
        "verified_to": n - 1,
        "product": product,
        "recurrence": recurrence,
    });
    Ok(RunOutput { exit_code: if product && recurrence { 0 } else { 2 }, report })
}

/// Indented `key: value` rendering of a report.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render(&mut out, v, 0);
    out
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::String(_) | Value::Number(_))) => {
            Some(format!("[{}]", a.iter().map(|x| scalar_text(x).expect("scalar")).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar_text(x) {
                    Some(t) => writeln!(out, "{pad}{k}: {t}").expect("string write"),
                    None => {
                        writeln!(out, "{pad}{k}:").expect("string write");
                        render(out, x, indent + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar_text(x) {
                    Some(t) => writeln!(out, "{pad}- {t}").expect("string write"),
                    None => {
                        writeln!(out, "{pad}-").expect("string write");
                        render(out, x, indent + 1);
                    }
                }
            }
        }
        x => writeln!(out, "{pad}{}", scalar_text(x).expect("scalar")).expect("string write"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_job() {
        let s = parse_spec(r#"{"mode": "reconstruct", "series": {"coeffs": ["1", "1"]}}"#).unwrap();
        assert_eq!(s.mode, Mode::Reconstruct);
        assert_eq!(s.var, "z");
        assert_eq!(s.r_max, DEFAULT_R_MAX);
        assert_eq!(s.input, Input::Coeffs(vec!["1".into(), "1".into()]));
    }

    #[test]
    fn rejects_two_sources() {
        let e = parse_spec("{\"mode\": \"reconstruct\",\n \"series\": {\"coeffs\": [\"1\"]},\n \"expr\": \"1/(1-z)\"}").unwrap_err();
        assert_eq!((e.line, e.column), (3, 2));
    }

    #[test]
    fn rejects_zero_r_max() {
        let e = parse_spec(r#"{"mode": "reconstruct", "expr": "1", "r_max": 0}"#).unwrap_err();
        assert!(e.message.contains("r_max"));
        assert!(parse_spec(r#"{"mode": "reconstruct", "expr": "1", "certify_margin": -1}"#).is_err());
    }

    #[test]
    fn syntax_errors_carry_position() {
        let e = parse_spec("{\n  \"mode\": \"reconstruct\",\n  \"expr\": }").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_spec(r#"{"mode": "reconstruct", "expr": "1", "bogus": 1}"#).unwrap_err();
        assert!(e.message.contains("bogus"));
    }

    #[test]
    fn text_rendering() {
        let t = render_text(&json!({"a": 1, "b": {"c": ["x", "y"]}, "d": [{"e": null}]}));
        assert_eq!(t, "a: 1\nb:\n  c: [x, y]\nd:\n  -\n    e: -\n");
    }
}
