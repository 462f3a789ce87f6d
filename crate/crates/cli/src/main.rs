use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hankel_recon_cli::{parse_spec, render_text, run, CliError};
use serde_json::{Map, Value};

/// Exact rational reconstruction of truncated power series.
#[derive(Parser)]
#[command(name = "hankel-recon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Taylor coefficients in the leading variable.
    Expand(JobArgs),
    /// Hankel determinant table and minimal order.
    Analyze(JobArgs),
    /// Reconstruct P/Q from a series with constant coefficients.
    Reconstruct(JobArgs),
    /// Reconstruct with coefficients polynomial in parameters, with the
    /// exceptional parameter set.
    ReconstructParam(JobArgs),
    /// Recursive reconstruction in several series variables.
    ReconstructMulti(JobArgs),
    /// Detect a polynomial degree bound and the vanishing locus.
    Classify(JobArgs),
    /// Check f·Q = P within the known coefficients.
    Verify(JobArgs),
}

impl Command {
    fn parts(&self) -> (&'static str, &JobArgs) {
        match self {
            Command::Expand(a) => ("expand", a),
            Command::Analyze(a) => ("analyze", a),
            Command::Reconstruct(a) => ("reconstruct", a),
            Command::ReconstructParam(a) => ("reconstruct-param", a),
            Command::ReconstructMulti(a) => ("reconstruct-multi", a),
            Command::Classify(a) => ("classify", a),
            Command::Verify(a) => ("verify", a),
        }
    }
}

#[derive(clap::Args)]
struct JobArgs {
    /// JSON job file; flags override its fields.
    spec: Option<PathBuf>,
    /// Comma-separated coefficients c_0, c_1, …
    #[arg(long)]
    coeffs: Option<String>,
    /// Rational expression to expand.
    #[arg(long)]
    expr: Option<String>,
    /// Series variable of --coeffs.
    #[arg(long)]
    var: Option<String>,
    /// Comma-separated series variables, leading variable first.
    #[arg(long)]
    vars: Option<String>,
    /// Comma-separated parameter names.
    #[arg(long)]
    params: Option<String>,
    /// Semicolon-separated `value=polynomial` samples in one parameter.
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    r_max: Option<i64>,
    /// Extra coefficients beyond 2·r_max used for certification.
    #[arg(long)]
    margin: Option<i64>,
    /// Truncation order for recursion level L (1-based); repeatable.
    #[arg(long, value_name = "L=N")]
    budget: Vec<String>,
    /// Semicolon-separated sample points, e.g. "0;1;1/2+i" or "w=1,v=2;w=0,v=1".
    #[arg(long)]
    points: Option<String>,
    /// Number of coefficients to expand from --expr.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    m_max: Option<usize>,
    #[arg(long)]
    s_max: Option<usize>,
    #[arg(long)]
    numerator: Option<String>,
    #[arg(long)]
    denominator: Option<String>,
    /// Parameter degree bound for --samples.
    #[arg(long)]
    degree_bound: Option<usize>,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn list(s: &str, sep: char) -> Value {
    Value::Array(s.split(sep).map(|x| Value::String(x.trim().to_string())).filter(|v| v != "").collect())
}

impl JobArgs {
    fn overrides(&self) -> Result<Map<String, Value>, String> {
        let mut m = Map::new();
        let mut put = |k: &str, v: Value| {
            m.insert(k.to_string(), v);
        };
        if let Some(c) = &self.coeffs {
            let mut series = Map::new();
            series.insert("coeffs".into(), list(c, ','));
            if let Some(v) = &self.var {
                series.insert("var".into(), v.clone().into());
            }
            put("series", Value::Object(series));
        }
        if let Some(e) = &self.expr {
            put("expr", e.clone().into());
        }
        if let Some(v) = &self.vars {
            put("variables", list(v, ','));
        } else if let (Some(v), None) = (&self.var, &self.coeffs) {
            put("variables", Value::Array(vec![v.clone().into()]));
        }
        if let Some(p) = &self.params {
            put("parameters", list(p, ','));
        }
        if let Some(s) = &self.samples {
            let pairs = s
                .split(';')
                .filter(|x| !x.trim().is_empty())
                .map(|x| {
                    let (a, b) = x.split_once('=').ok_or_else(|| format!("sample `{x}` is not value=polynomial"))?;
                    Ok(Value::Array(vec![a.trim().into(), b.trim().into()]))
                })
                .collect::<Result<_, String>>()?;
            put("samples", Value::Array(pairs));
        }
        if let Some(r) = self.r_max {
            put("r_max", r.into());
        }
        if let Some(r) = self.margin {
            put("certify_margin", r.into());
        }
        if !self.budget.is_empty() {
            let mut b = Map::new();
            for x in &self.budget {
                let (l, n) = x.split_once('=').ok_or_else(|| format!("budget `{x}` is not L=N"))?;
                let n: i64 = n.trim().parse().map_err(|_| format!("budget `{x}` is not L=N"))?;
                b.insert(l.trim().to_string(), n.into());
            }
            put("budgets", Value::Object(b));
        }
        if let Some(p) = &self.points {
            put("points", list(p, ';'));
        }
        for (k, v) in [("order", self.order), ("m_max", self.m_max), ("s_max", self.s_max), ("degree_bound", self.degree_bound)] {
            if let Some(v) = v {
                put(k, v.into());
            }
        }
        if let Some(p) = &self.numerator {
            put("numerator", p.clone().into());
        }
        if let Some(p) = &self.denominator {
            put("denominator", p.clone().into());
        }
        Ok(m)
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("HANKEL_RECON_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            // Only fails if a pool already exists.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn execute(mode: &str, args: &JobArgs) -> Result<i32, CliError> {
    let overrides = args.overrides().map_err(|m| hankel_recon::ParseError::new(1, 1, m))?;
    let file_text = match &args.spec {
        Some(path) => Some(std::fs::read_to_string(path)?),
        None => None,
    };
    let spec = match &file_text {
        Some(text) if overrides.is_empty() && text.contains(&format!("\"mode\": \"{mode}\"")) => parse_spec(text)?,
        _ => {
            let mut doc = match &file_text {
                Some(text) => match serde_json::from_str::<Value>(text) {
                    Ok(Value::Object(m)) => m,
                    Ok(_) => return Err(hankel_recon::ParseError::new(1, 1, "job file must hold a JSON object").into()),
                    Err(_) => {
                        // Report the syntax error with its position in the file.
                        parse_spec(text)?;
                        unreachable!("parse_spec rejects invalid JSON");
                    }
                },
                None => Map::new(),
            };
            doc.extend(overrides);
            doc.insert("mode".into(), mode.into());
            parse_spec(&serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable"))?
        }
    };
    let out = run(&spec)?;
    let text = if args.json {
        serde_json::to_string_pretty(&out.report).expect("serializable") + "\n"
    } else {
        render_text(&out.report)
    };
    match &args.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(out.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let (mode, args) = cli.command.parts();
    match execute(mode, args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
