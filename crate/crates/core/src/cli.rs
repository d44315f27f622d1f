//! The `mix` command line: exact profiles, estimators, bound calculators and
//! seeded validation experiments, with CSV or JSON output.
//!
//! Exit codes: 0 on success, 1 on bad input, 2 when an experiment finds a bound violated.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{
    atmix_outer_xi, atmix_sample_size, deviation_sample_size, evaluate_json, mad_and_pac_uniform, mad_bound_general,
    pac_sample_size_general, AtmixInput, ErgodicCandidate, PacConstants, RateKind, RateModel, C_ERGODIC_DEFAULT,
    C_UNIFORM,
};
use crate::chain::{
    is_ergodic, reversibility_residual, spectral_summary, stationary_distribution, ProbabilityVector, StochasticMatrix,
};
use crate::error::{Error, Result};
use crate::estimation::{
    avg_mixing_time_hat, beta_hat, confidence_interval, coverage_experiment, deviation_experiment, mad_experiment,
    read_trajectory, sample_trajectory, skipped_counts, write_trajectory, StartMode, Trajectory,
};
use crate::families::{
    gap_search, pt_beta_lower, pt_beta_upper_best, pt_chain, FamilyParams, FamilySpec, PtSpec, Sequence, TwoPointChain,
};
use crate::io::{atomic_write, parse_matrix_csv, profile_table, Table};
use crate::mixing::{entropic_sup, exact_beta, mixing_profile, mixing_times, t_sharp, PValue};
use crate::random::{random_ergodic, random_reversible};

/// Default horizon for exact searches.
const T_CAP: usize = 1_000_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mix", version, about = "Mixing times, average-mixing estimators and sample-size bounds")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact mixing and average-mixing times of a chain.
    Exact(ExactArgs),
    /// Estimate beta(s) and the average-mixing time from one trajectory.
    Estimate(EstimateArgs),
    /// Evaluate a bound or sample-size calculator.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Run a seeded validation experiment.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
    /// Build a chain from a family description and export it.
    Family(FamilyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write here instead of stdout (atomically).
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    /// Chain spec, e.g. `two_point:p=0.1,q=0.4`, `file:p.json`, `csv:p.csv`, `random:n=5,seed=1`.
    #[arg(long)]
    pub chain: String,
    #[arg(long, value_delimiter = ',', default_value = "0.25")]
    pub xi: Vec<f64>,
    /// Also report `max_{s <= t_sharp(xi)} J_p^(s)` for these exponents.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<PValue>,
    /// Emit the profile `t, beta(t), d(t)` for `t <= T` instead of mixing times.
    #[arg(long)]
    pub profile: Option<usize>,
    #[arg(long, default_value_t = T_CAP)]
    pub t_cap: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Trajectory file written by `--save` (u32 little-endian states plus a JSON sidecar).
    #[arg(long, conflicts_with = "chain")]
    pub trajectory: Option<PathBuf>,
    /// Simulate from this chain instead.
    #[arg(long)]
    pub chain: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `stationary` or a state index.
    #[arg(long, default_value = "stationary")]
    pub start: String,
    /// Save the simulated trajectory here.
    #[arg(long)]
    pub save: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub s: Vec<usize>,
    /// Estimate `t_hat(xi)` for each value instead of listing `beta_hat(s)`.
    #[arg(long, value_delimiter = ',')]
    pub xi: Vec<f64>,
    /// Add the interval `[t_hat(xi/(1-eps)), t_hat(xi/(1+eps))]`.
    #[arg(long)]
    pub eps: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AtmixMode {
    Uniform,
    Finite,
    Ergodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RateArg {
    Exponential,
    SubExponential,
    Polynomial,
}

impl From<RateArg> for RateKind {
    fn from(r: RateArg) -> Self {
        match r {
            RateArg::Exponential => RateKind::Exponential,
            RateArg::SubExponential => RateKind::SubExponential,
            RateArg::Polynomial => RateKind::Polynomial,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    /// Sample size for estimating the average-mixing time.
    Atmix {
        #[arg(long, value_enum)]
        mode: AtmixMode,
        #[arg(long, value_delimiter = ',')]
        xi: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        delta: Vec<f64>,
        #[arg(long)]
        tmix: Option<usize>,
        #[arg(long)]
        size: Option<usize>,
        /// `J_{inf, xi(1-eps)}` for the uniform mode.
        #[arg(long)]
        j_inf: Option<f64>,
        /// Chain used to fill in whatever was not given.
        #[arg(long)]
        chain: Option<String>,
        #[arg(long, default_value_t = C_ERGODIC_DEFAULT)]
        c_erg: f64,
        #[arg(long, value_delimiter = ',', default_value = "1.5,2,4,8")]
        p: Vec<PValue>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact MAD bound `3 sqrt((1/2 + B_p) J_p / m)` on a chain.
    Mad {
        #[arg(long)]
        chain: String,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        s: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,4,inf")]
        p: Vec<PValue>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// General ergodic PAC sample size for `beta_hat(s)` on a chain.
    Pac {
        #[arg(long)]
        chain: String,
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        delta: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        s: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,4,inf")]
        p: Vec<PValue>,
        /// Use one constant `c` everywhere with `log(1/delta)` instead of the proof constants.
        #[arg(long)]
        statement_constant: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Uniformly ergodic MAD bound and PAC sample size.
    Uniform {
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        delta: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        s: Vec<usize>,
        #[arg(long)]
        tmix: usize,
        #[arg(long)]
        j_inf: f64,
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Trajectory length for a deviation inequality under a rate envelope.
    Deviation {
        #[arg(long, value_enum)]
        rate: RateArg,
        #[arg(long, default_value_t = 1.0)]
        beta0: f64,
        #[arg(long)]
        beta1: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        delta: Vec<f64>,
        /// Take `t_sharp` from this chain instead of the envelope.
        #[arg(long)]
        chain: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate a `{"bound": ..., "params": {...}}` request (file path or `-` for stdin).
    Json {
        #[arg(long)]
        request: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    #[arg(long, default_value_t = 200)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum ExperimentCommand {
    /// Empirical `E|beta_hat(s) - beta(s)|` against the MAD bound.
    Mad {
        #[arg(long)]
        chain: String,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        s: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,4,inf")]
        p: Vec<PValue>,
        #[command(flatten)]
        seed: SeedArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Coverage of `t_hat(xi)` over the window `[t_sharp(xi(1+eps)), t_sharp(xi(1-eps))]`.
    Coverage {
        #[arg(long)]
        chain: String,
        #[arg(long)]
        xi: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        /// Trajectory lengths; defaults to the finite-space sample size.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[command(flatten)]
        seed: SeedArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Upper-tail frequency of the empirical mean of a centered `f`.
    Deviation {
        #[arg(long)]
        chain: String,
        /// Values of `f`, one per state, in `[-1, 1]`.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        f: Vec<f64>,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        /// Defaults to the sample size of the exponential envelope fitted to the chain.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, default_value = "stationary")]
        start: String,
        #[command(flatten)]
        seed: SeedArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact beta of a truncated countable chain between its closed-form bounds.
    Sandwich {
        #[arg(long, default_value_t = 0.2)]
        q: f64,
        /// `nu(x) = min(1/2, x^-a)`.
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// `mu` proportional to `nu(x) x^-c`.
        #[arg(long, default_value_t = 2.5)]
        c: f64,
        #[arg(long, default_value_t = 400)]
        k: usize,
        #[arg(long, default_value_t = 200)]
        t_max: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Two-point chains with `t_mix > M t_sharp`.
    GapSearch {
        #[arg(long, value_delimiter = ',', default_value = "0.1")]
        xi: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        m: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Every calculator evaluated on one chain.
    BoundTable {
        #[arg(long)]
        chain: String,
        #[arg(long, default_value_t = 0.2)]
        xi: f64,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, value_delimiter = ',', default_value = "1.5,2,4,8")]
        p: Vec<PValue>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// Family JSON, inline or as a file path.
    #[arg(long)]
    pub spec: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// A chain resolved from a `--chain` spec.
#[derive(Debug, Clone)]
pub struct ChainInput {
    pub matrix: StochasticMatrix,
    pub pi: ProbabilityVector,
    pub source: String,
}

fn key_values(body: &str) -> Result<Vec<(&str, &str)>> {
    body.split(',')
        .filter(|kv| !kv.trim().is_empty())
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::Config(format!("expected key=value, got {kv:?}")))
        })
        .collect()
}

fn lookup<T: std::str::FromStr>(kv: &[(&str, &str)], key: &str) -> Result<Option<T>> {
    kv.iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| v.parse().map_err(|_| Error::Config(format!("bad value {v:?} for {key}"))))
        .transpose()
}

fn required<T: std::str::FromStr>(kv: &[(&str, &str)], key: &str) -> Result<T> {
    lookup(kv, key)?.ok_or_else(|| Error::Config(format!("missing {key}")))
}

fn read_text(spec: &str) -> Result<String> {
    if spec == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)?;
        Ok(s)
    } else if spec.trim_start().starts_with('{') {
        Ok(spec.to_string())
    } else {
        Ok(std::fs::read_to_string(spec)?)
    }
}

/// Matrix JSON, or a family description when the object has a `family` key.
fn chain_from_json(text: &str) -> Result<(StochasticMatrix, Option<ProbabilityVector>)> {
    let v: Value = serde_json::from_str(text)?;
    if v.get("family").is_some() {
        let built = FamilySpec::from_json(text)?.build()?;
        Ok((built.matrix, built.pi))
    } else {
        Ok((serde_json::from_value(v)?, None))
    }
}

/// Parses `kind:params` chain specs.
pub fn parse_chain(spec: &str) -> Result<ChainInput> {
    let (kind, body) = match spec.split_once(':') {
        Some(_) if spec.trim_start().starts_with('{') => ("", spec),
        Some(pair) => pair,
        None => ("", spec),
    };
    let (matrix, pi) = match kind {
        "two_point" => {
            let kv = key_values(body)?;
            let c = TwoPointChain::new(required(&kv, "p")?, required(&kv, "q")?)?;
            (c.matrix(), Some(c.stationary()))
        }
        "chebyshev" => {
            let kv = key_values(body)?;
            let theta: f64 = required(&kv, "theta")?;
            let spec = FamilySpec {
                params: FamilyParams::Chebyshev { theta, lambda: lookup(&kv, "lambda")? },
                truncation: Some(required(&kv, "k")?),
            };
            let built = spec.build()?;
            (built.matrix, built.pi)
        }
        "random" => {
            let kv = key_values(body)?;
            let (n, seed): (usize, u64) = (required(&kv, "n")?, lookup(&kv, "seed")?.unwrap_or(0));
            if lookup::<bool>(&kv, "reversible")?.unwrap_or(false) {
                let (p, pi) = random_reversible(n, seed)?;
                (p, Some(pi))
            } else {
                (random_ergodic(n, seed)?, None)
            }
        }
        "csv" => (parse_matrix_csv(&std::fs::read_to_string(body)?)?, None),
        "file" if body.ends_with(".csv") => (parse_matrix_csv(&std::fs::read_to_string(body)?)?, None),
        "file" | "family" => chain_from_json(&read_text(body)?)?,
        "" if body.trim_start().starts_with('{') => chain_from_json(body)?,
        "" if body.ends_with(".csv") => (parse_matrix_csv(&std::fs::read_to_string(body)?)?, None),
        "" => chain_from_json(&std::fs::read_to_string(body)?)?,
        other => return Err(Error::Config(format!("unknown chain kind {other:?}"))),
    };
    let report = is_ergodic(&matrix);
    if !report.ergodic {
        return Err(Error::NonErgodic(report.diagnosis));
    }
    let pi = match pi {
        Some(pi) => pi,
        None => stationary_distribution(&matrix)?,
    };
    Ok(ChainInput { matrix, pi, source: spec.to_string() })
}

fn parse_start(s: &str, size: usize) -> Result<StartMode> {
    match s.trim() {
        "stationary" => Ok(StartMode::Stationary),
        other => {
            let x: usize = other.parse().map_err(|_| Error::Config(format!("bad start {other:?}")))?;
            if x >= size {
                return Err(Error::Config(format!("start state {x} outside 0..{size}")));
            }
            Ok(StartMode::Point(x))
        }
    }
}

fn nonempty<'a, T>(name: &str, v: &'a [T]) -> Result<&'a [T]> {
    if v.is_empty() {
        return Err(Error::Config(format!("--{name} needs at least one value")));
    }
    Ok(v)
}

fn opt_cell<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn cell(v: f64) -> String {
    format!("{v:e}")
}

/// Output of one command, and whether it found a bound violated.
struct Report {
    body: Body,
    violations: Vec<String>,
}

enum Body {
    Table(Table),
    Json(Value),
}

impl Report {
    fn table(t: Table) -> Self {
        Report { body: Body::Table(t), violations: Vec::new() }
    }

    fn render(&self, format: Format) -> String {
        match (&self.body, format) {
            (Body::Table(t), Format::Csv) => t.to_csv(),
            (Body::Table(t), Format::Json) => pretty(&t.to_json()),
            (Body::Json(v), _) => pretty(v),
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
    s.push('\n');
    s
}

fn emit(report: &Report, out: &OutputArgs, default: Format) -> Result<()> {
    let by_extension = out.output.as_deref().and_then(|p| p.extension()).and_then(|e| match e.to_str()? {
        "csv" => Some(Format::Csv),
        "json" => Some(Format::Json),
        _ => None,
    });
    let text = report.render(out.format.or(by_extension).unwrap_or(default));
    match &out.output {
        Some(path) => atomic_write(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_chain_meta(t: Table, chain: &ChainInput) -> Table {
    t.meta("chain", &chain.source).meta("chain_checksum", chain.matrix.checksum()).meta("size", chain.matrix.size())
}

fn run_exact(a: &ExactArgs) -> Result<Report> {
    let chain = parse_chain(&a.chain)?;
    if let Some(t) = a.profile {
        let profile = mixing_profile(&chain.matrix, &chain.pi, t)?;
        return Ok(Report::table(with_chain_meta(profile_table(&profile), &chain)));
    }
    let reversible = reversibility_residual(&chain.matrix, &chain.pi) < 1e-10;
    let t_rel = if reversible { spectral_summary(&chain.matrix, &chain.pi).ok().map(|s| s.t_rel) } else { None };
    let mut rows = Vec::new();
    for &xi in nonempty("xi", &a.xi)? {
        let rep = mixing_times(&chain.matrix, &chain.pi, xi, a.t_cap)?;
        let mut row = json!({ "xi": xi, "t_mix": rep.t_mix, "t_sharp": rep.t_sharp });
        if let Some(t) = t_rel {
            row["t_rel"] = if t.is_finite() { json!(t) } else { json!("inf") };
        }
        for &p in &a.p {
            let sup = entropic_sup(&chain.matrix, &chain.pi, xi, p, a.t_cap)?;
            row[format!("j_sup_p{p}")] = json!(sup.value);
        }
        rows.push(row);
    }
    if a.out.format == Some(Format::Csv) {
        let columns: Vec<String> = rows[0].as_object().map(|o| o.keys().cloned().collect()).unwrap_or_default();
        let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
        let mut t = with_chain_meta(Table::new(&cols), &chain);
        for r in &rows {
            t.push(columns.iter().map(|c| json_cell(&r[c])).collect());
        }
        return Ok(Report::table(t));
    }
    let body = if rows.len() == 1 { rows.pop().unwrap_or_default() } else { Value::Array(rows) };
    Ok(Report { body: Body::Json(body), violations: Vec::new() })
}

fn json_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn load_or_simulate(a: &EstimateArgs) -> Result<Trajectory> {
    if let Some(path) = &a.trajectory {
        return read_trajectory(path);
    }
    let spec = a.chain.as_deref().ok_or_else(|| Error::Config("give --trajectory or --chain".into()))?;
    let chain = parse_chain(spec)?;
    let n = a.n.ok_or_else(|| Error::Config("--chain needs --n".into()))?;
    let start = parse_start(&a.start, chain.matrix.size())?;
    let traj = sample_trajectory(&chain.matrix, &start, n, a.seed)?;
    if let Some(path) = &a.save {
        write_trajectory(&traj, path)?;
    }
    Ok(traj)
}

fn run_estimate(a: &EstimateArgs) -> Result<Report> {
    let traj = load_or_simulate(a)?;
    let meta = |t: Table| {
        t.meta("n", traj.len()).meta("seed", traj.meta().seed).meta("chain_checksum", &traj.meta().chain_checksum)
    };
    if a.xi.is_empty() {
        let mut t = meta(Table::new(&["s", "m", "beta_hat"]));
        for &s in &a.s {
            let r = beta_hat(&skipped_counts(&traj, s)?);
            t.push(vec![s.to_string(), r.m.to_string(), cell(r.beta_hat)]);
        }
        return Ok(Report::table(t));
    }
    let mut t = meta(Table::new(&["xi", "t_hat", "saturated", "lower", "upper"]));
    for &xi in &a.xi {
        let est = avg_mixing_time_hat(&traj, xi);
        let ci = a.eps.map(|eps| confidence_interval(&traj, xi, eps)).transpose()?;
        t.push(vec![
            xi.to_string(),
            est.value.to_string(),
            est.saturated.to_string(),
            opt_cell(ci.map(|c| c.lower)),
            opt_cell(ci.map(|c| c.upper)),
        ]);
    }
    Ok(Report::table(t))
}

fn grid3<'a>(a: &'a [f64], b: &'a [f64], c: &'a [f64]) -> impl Iterator<Item = (f64, f64, f64)> + 'a {
    a.iter().flat_map(move |&x| b.iter().flat_map(move |&y| c.iter().map(move |&z| (x, y, z))))
}

/// `B_p^(s)` summed to convergence of the exact profile.
fn full_bp(chain: &ChainInput, p: PValue, s: usize) -> Result<f64> {
    // B_inf counts every term, so it grows with n.
    if p == PValue::Infinity {
        return Ok(f64::INFINITY);
    }
    let profile = exact_beta(&chain.matrix, &chain.pi, T_CAP)?;
    if !profile.converged() {
        return Err(Error::Unbounded { xi: 0.0, t_cap: T_CAP });
    }
    let n = s * (profile.values().len() / s + 2) + 1;
    profile.b_p(p, s, n)
}

fn ergodic_candidates(chain: &ChainInput, xi: f64, eps: f64, ps: &[PValue]) -> Result<Vec<ErgodicCandidate>> {
    ps.iter()
        .map(|&p| {
            let jp = entropic_sup(&chain.matrix, &chain.pi, xi * (1.0 - eps), p, T_CAP)?.value;
            Ok(ErgodicCandidate { p, bp: full_bp(chain, p, 1)?, jp })
        })
        .collect()
}

fn run_bounds(cmd: &BoundsCommand) -> Result<(Report, Option<&OutputArgs>)> {
    match cmd {
        BoundsCommand::Atmix { mode, xi, eps, delta, tmix, size, j_inf, chain, c_erg, p, out } => {
            let chain = chain.as_deref().map(parse_chain).transpose()?;
            let need_chain =
                || chain.as_ref().ok_or_else(|| Error::Config("this mode needs --chain or explicit values".into()));
            let tm = match (tmix, *mode) {
                (Some(t), _) => Some(*t),
                (None, AtmixMode::Ergodic) => None,
                (None, _) => {
                    let c = need_chain()?;
                    mixing_times(&c.matrix, &c.pi, 0.25, T_CAP)?.t_mix
                }
            };
            let mut t = Table::new(&["xi", "eps", "delta", "n", "chosen_p"])
                .meta("mode", format!("{mode:?}").to_lowercase())
                .meta("constants", format!("C_u={C_UNIFORM}, C={c_erg}"));
            for (x, e, d) in grid3(nonempty("xi", xi)?, nonempty("eps", eps)?, nonempty("delta", delta)?) {
                let input = match mode {
                    AtmixMode::Finite => AtmixInput::Finite {
                        t_mix: tm.ok_or(Error::Unbounded { xi: 0.25, t_cap: T_CAP })?,
                        size: match size {
                            Some(s) => *s,
                            None => need_chain()?.matrix.size(),
                        },
                    },
                    AtmixMode::Uniform => {
                        let j = match j_inf {
                            Some(j) => *j,
                            None => {
                                let c = need_chain()?;
                                entropic_sup(&c.matrix, &c.pi, x * (1.0 - e), PValue::Infinity, T_CAP)?.value
                            }
                        };
                        AtmixInput::Uniform { t_mix: tm.ok_or(Error::Unbounded { xi: 0.25, t_cap: T_CAP })?, j_inf: j }
                    }
                    AtmixMode::Ergodic => {
                        let c = need_chain()?;
                        AtmixInput::Ergodic {
                            candidates: ergodic_candidates(c, x, e, p)?,
                            t_sharp_outer: t_sharp(&c.matrix, &c.pi, atmix_outer_xi(e, d, *c_erg), T_CAP)?,
                            t_sharp_xi: t_sharp(&c.matrix, &c.pi, x, T_CAP)?,
                            c_erg: *c_erg,
                        }
                    }
                };
                let r = atmix_sample_size(x, e, d, &input)?;
                let chosen = r.chosen.map(|i| p[i].to_string());
                t.push(vec![x.to_string(), e.to_string(), d.to_string(), r.n.to_string(), opt_cell(chosen)]);
            }
            Ok((Report::table(t), Some(out)))
        }
        BoundsCommand::Mad { chain, s, n, p, out } => {
            let chain = parse_chain(chain)?;
            let horizon = nonempty("n", n)?.iter().copied().max().unwrap_or(2);
            let profile = exact_beta(&chain.matrix, &chain.pi, horizon)?;
            let mut t = with_chain_meta(Table::new(&["s", "n", "p", "bp", "jp", "bound"]), &chain);
            for &si in s {
                let q = crate::mixing::pair_matrix(&chain.matrix, &chain.pi, si)?;
                for &ni in n {
                    for &pv in p {
                        let bp = profile.b_p(pv, si, ni)?;
                        let jp = crate::mixing::entropic_term(&q, pv);
                        let bound = mad_bound_general(bp, jp, si, ni)?;
                        t.push(vec![si.to_string(), ni.to_string(), pv.to_string(), cell(bp), cell(jp), cell(bound)]);
                    }
                }
            }
            Ok((Report::table(t), Some(out)))
        }
        BoundsCommand::Pac { chain, eps, delta, s, p, statement_constant, out } => {
            let chain = parse_chain(chain)?;
            let constants = statement_constant.map(PacConstants::statement).unwrap_or_default();
            let ts = |xi: f64| t_sharp(&chain.matrix, &chain.pi, xi, T_CAP);
            let mut t = with_chain_meta(Table::new(&["eps", "delta", "s", "p", "n", "t_sharp"]), &chain)
                .meta("constants", serde_json::to_string(&constants)?);
            for &si in s {
                let q = crate::mixing::pair_matrix(&chain.matrix, &chain.pi, si)?;
                for &pv in p {
                    let bp = full_bp(&chain, pv, si)?;
                    let jp = crate::mixing::entropic_term(&q, pv);
                    for &e in nonempty("eps", eps)? {
                        for &d in nonempty("delta", delta)? {
                            let r = pac_sample_size_general(e, d, si, bp, jp, &ts, constants)?;
                            t.push(vec![
                                e.to_string(),
                                d.to_string(),
                                si.to_string(),
                                pv.to_string(),
                                r.n.to_string(),
                                r.t_sharp.to_string(),
                            ]);
                        }
                    }
                }
            }
            Ok((Report::table(t), Some(out)))
        }
        BoundsCommand::Uniform { eps, delta, s, tmix, j_inf, n, out } => {
            let mut t = Table::new(&["eps", "delta", "s", "n", "mad_bound", "pac_n"])
                .meta("constants", format!("C_u={C_UNIFORM}"));
            for &si in s {
                for &ni in nonempty("n", n)? {
                    for &e in nonempty("eps", eps)? {
                        for &d in nonempty("delta", delta)? {
                            let r = mad_and_pac_uniform(e, d, si, *tmix, *j_inf, ni)?;
                            t.push(vec![
                                e.to_string(),
                                d.to_string(),
                                si.to_string(),
                                ni.to_string(),
                                cell(r.mad_bound),
                                r.pac_n.to_string(),
                            ]);
                        }
                    }
                }
            }
            Ok((Report::table(t), Some(out)))
        }
        BoundsCommand::Deviation { rate, beta0, beta1, b, eps, delta, chain, out } => {
            let model = RateModel { kind: (*rate).into(), beta0: *beta0, beta1: *beta1, b: *b }.validated()?;
            let chain = chain.as_deref().map(parse_chain).transpose()?;
            let ts = |xi: f64| match &chain {
                Some(c) => t_sharp(&c.matrix, &c.pi, xi, T_CAP),
                None => model.t_sharp_upper(xi),
            };
            let mut t =
                Table::new(&["eps", "delta", "n", "xi", "t_sharp"]).meta("rate", serde_json::to_string(&model)?);
            for &e in nonempty("eps", eps)? {
                for &d in nonempty("delta", delta)? {
                    let r = deviation_sample_size(&model, e, d, &ts)?;
                    t.push(vec![e.to_string(), d.to_string(), r.n.to_string(), opt_cell(r.xi), opt_cell(r.t_sharp)]);
                }
            }
            Ok((Report::table(t), Some(out)))
        }
        BoundsCommand::Json { request, output } => {
            let resp = evaluate_json(&read_text(request)?)?;
            let text = pretty(&serde_json::to_value(&resp)?);
            match output {
                Some(p) => atomic_write(p, text.as_bytes())?,
                None => print!("{text}"),
            }
            Ok((Report { body: Body::Json(Value::Null), violations: Vec::new() }, None))
        }
    }
}

fn experiment_meta(t: Table, validates: &str, seed: &SeedArgs) -> Table {
    t.meta("validates", validates).meta("seed", seed.seed).meta("replicas", seed.replicas)
}

fn run_experiment(cmd: &ExperimentCommand) -> Result<(Report, &OutputArgs)> {
    match cmd {
        ExperimentCommand::Mad { chain, s, n, p, seed, out } => {
            let chain = parse_chain(chain)?;
            let mut cols = vec!["n".to_string(), "s".into(), "beta".into(), "mad".into(), "mad_stderr".into()];
            cols.extend(p.iter().map(|pv| format!("bound_p{pv}")));
            cols.push("bound".into());
            let colrefs: Vec<&str> = cols.iter().map(String::as_str).collect();
            let mut t = experiment_meta(
                with_chain_meta(Table::new(&colrefs), &chain),
                "mean absolute deviation of beta_hat(s) below 3 sqrt((1/2 + B_p) J_p / floor((n-1)/s))",
                seed,
            )
            .meta("constants", "3, exact B_p^(s) and J_p^(s)");
            let mut violations = Vec::new();
            for &si in s {
                let rows = mad_experiment(&chain.matrix, si, nonempty("n", n)?, seed.replicas, seed.seed, p)?;
                for r in rows {
                    let best = r.bounds.iter().map(|b| b.bound).fold(f64::INFINITY, f64::min);
                    let mut row = vec![r.n.to_string(), r.s.to_string(), cell(r.beta), cell(r.mad), cell(r.mad_stderr)];
                    row.extend(r.bounds.iter().map(|b| cell(b.bound)));
                    row.resize(cols.len() - 1, String::new());
                    row.push(if best.is_finite() { cell(best) } else { String::new() });
                    if best.is_finite() && r.mad > best {
                        violations.push(format!("n={} s={}: mad {} > bound {}", r.n, r.s, r.mad, best));
                    }
                    t.push(row);
                }
            }
            Ok((Report { body: Body::Table(t), violations }, out))
        }
        ExperimentCommand::Coverage { chain, xi, eps, delta, n, seed, out } => {
            let chain = parse_chain(chain)?;
            let tm = mixing_times(&chain.matrix, &chain.pi, 0.25, T_CAP)?
                .t_mix
                .ok_or(Error::Unbounded { xi: 0.25, t_cap: T_CAP })?;
            let n_calc =
                atmix_sample_size(*xi, *eps, *delta, &AtmixInput::Finite { t_mix: tm, size: chain.matrix.size() })?.n;
            let grid = if n.is_empty() { vec![n_calc] } else { n.clone() };
            let mut t = experiment_meta(
                with_chain_meta(Table::new(&["n", "coverage", "window_lo", "window_hi", "hits", "above"]), &chain),
                "t_hat(xi) in [t_sharp(xi(1+eps)), t_sharp(xi(1-eps))] with probability >= 1-delta once n reaches the finite-space sample size",
                seed,
            )
            .meta("xi", xi)
            .meta("eps", eps)
            .meta("delta", delta)
            .meta("sample_size", n_calc)
            .meta("constants", format!("C_u={C_UNIFORM}, J=|X|^2"));
            let mut violations = Vec::new();
            for (g, &ni) in grid.iter().enumerate() {
                let r =
                    coverage_experiment(&chain.matrix, *xi, *eps, ni, seed.replicas, seed.seed.wrapping_add(g as u64))?;
                if ni >= n_calc && r.coverage < 1.0 - delta {
                    violations.push(format!("n={ni}: coverage {} < {}", r.coverage, 1.0 - delta));
                }
                t.push(vec![
                    ni.to_string(),
                    r.coverage.to_string(),
                    r.window.0.to_string(),
                    r.window.1.to_string(),
                    r.hits.to_string(),
                    r.above.to_string(),
                ]);
            }
            Ok((Report { body: Body::Table(t), violations }, out))
        }
        ExperimentCommand::Deviation { chain, f, eps, delta, n, start, seed, out } => {
            let chain = parse_chain(chain)?;
            if f.iter().any(|v| v.abs() > 1.0) {
                return Err(Error::Config("f must take values in [-1, 1]".into()));
            }
            let mean: f64 = f.iter().zip(chain.pi.entries()).map(|(a, b)| a * b).sum();
            if mean.abs() > 1e-9 {
                return Err(Error::Config(format!("f must be centered under pi, mean is {mean:e}")));
            }
            let ts = |xi: f64| t_sharp(&chain.matrix, &chain.pi, xi, T_CAP);
            let model =
                RateModel::fit(&exact_beta(&chain.matrix, &chain.pi, 10_000)?, RateKind::Exponential, 1.0, 1.0)?;
            let calc = deviation_sample_size(&model, *eps, *delta, &ts)?;
            let grid = if n.is_empty() { vec![calc.n] } else { n.clone() };
            let start = parse_start(start, chain.matrix.size())?;
            let mut t = experiment_meta(
                with_chain_meta(Table::new(&["n", "exceed", "exceed_fraction", "mean"]), &chain),
                "P(mean of f > eps) <= delta at n = ceil(8/eps^2 log(4/delta) 2^(1/b) t_sharp(delta eps^2/(16 log(4/delta))))",
                seed,
            )
            .meta("eps", eps)
            .meta("delta", delta)
            .meta("sample_size", calc.n)
            .meta("rate", serde_json::to_string(&model)?);
            let mut violations = Vec::new();
            for (g, &ni) in grid.iter().enumerate() {
                let r = deviation_experiment(
                    &chain.matrix,
                    f,
                    &start,
                    *eps,
                    ni,
                    seed.replicas,
                    seed.seed.wrapping_add(g as u64),
                )?;
                if ni >= calc.n && start == StartMode::Stationary && r.exceed_fraction > *delta {
                    violations.push(format!("n={ni}: exceed fraction {} > {delta}", r.exceed_fraction));
                }
                t.push(vec![ni.to_string(), r.exceed.to_string(), r.exceed_fraction.to_string(), cell(r.mean)]);
            }
            Ok((Report { body: Body::Table(t), violations }, out))
        }
        ExperimentCommand::Sandwich { q, a, c, k, t_max, out } => {
            let nu = Sequence::capped_power(0.5, *a);
            let mu = Sequence::product(vec![nu.clone(), Sequence::power(1.0, *c)]);
            let spec = PtSpec { q: *q, mu, nu, truncation: *k }.with_normalized_mu()?;
            let chain = pt_chain(&spec)?;
            let profile = exact_beta(&chain.matrix, &chain.pi, *t_max)?;
            let mut t = Table::new(&["t", "lower", "beta", "upper", "k_inner"])
                .meta("validates", "lower(t) <= beta(t) <= upper(t) on the truncated chain")
                .meta("q", q)
                .meta("a", a)
                .meta("c", c)
                .meta("truncation", k)
                .meta("tail_mass", chain.tail_mass);
            let mut violations = Vec::new();
            for ti in 2..=*t_max {
                let beta = profile.get(ti).unwrap_or(0.0);
                let lower = pt_beta_lower(&spec, ti, *a)?;
                let up = pt_beta_upper_best(&spec, ti, *k, 64)?;
                if !(lower <= beta && beta <= up.total()) {
                    violations.push(format!("t={ti}: {lower} <= {beta} <= {} fails", up.total()));
                }
                t.push(vec![ti.to_string(), cell(lower), cell(beta), cell(up.total()), up.k_inner.to_string()]);
            }
            Ok((Report { body: Body::Table(t), violations }, out))
        }
        ExperimentCommand::GapSearch { xi, m, budget, out } => {
            let mut t = Table::new(&["xi", "m", "p", "q", "eta", "t_mix", "t_sharp", "ratio", "distance_ratio"])
                .meta("validates", "two-point chains with t_mix(xi) > M t_sharp(xi)")
                .meta("budget", budget);
            let mut violations = Vec::new();
            for &x in xi {
                for &mi in nonempty("m", m)? {
                    let r = gap_search(x, mi, *budget)?;
                    let c = TwoPointChain::new(r.p, r.q)?;
                    let check = mixing_times(&c.matrix(), &c.stationary(), x, T_CAP)?;
                    if check.t_mix != Some(r.t_mix) || check.t_sharp != Some(r.t_sharp) || r.ratio <= mi {
                        violations.push(format!("xi={x} M={mi}: recomputation disagrees"));
                    }
                    t.push(vec![
                        x.to_string(),
                        mi.to_string(),
                        cell(r.p),
                        cell(r.q),
                        cell(r.eta),
                        r.t_mix.to_string(),
                        r.t_sharp.to_string(),
                        r.ratio.to_string(),
                        c.distance_ratio().to_string(),
                    ]);
                }
            }
            Ok((Report { body: Body::Table(t), violations }, out))
        }
        ExperimentCommand::BoundTable { chain, xi, eps, delta, p, out } => {
            let chain = parse_chain(chain)?;
            let mut t = with_chain_meta(Table::new(&["quantity", "p", "value"]), &chain)
                .meta("xi", xi)
                .meta("eps", eps)
                .meta("delta", delta)
                .meta("constants", format!("C_u={C_UNIFORM}, C={C_ERGODIC_DEFAULT}, pac={:?}", PacConstants::PROOF));
            let mut push = |name: &str, p: String, v: String| t.push(vec![name.to_string(), p, v]);
            let times = mixing_times(&chain.matrix, &chain.pi, *xi, T_CAP)?;
            push("t_mix(xi)", String::new(), opt_cell(times.t_mix));
            push("t_sharp(xi)", String::new(), opt_cell(times.t_sharp));
            let tm = mixing_times(&chain.matrix, &chain.pi, 0.25, T_CAP)?.t_mix;
            push("t_mix(1/4)", String::new(), opt_cell(tm));
            if let Some(tm) = tm {
                let n =
                    atmix_sample_size(*xi, *eps, *delta, &AtmixInput::Finite { t_mix: tm, size: chain.matrix.size() })?
                        .n;
                push("atmix_n_finite", String::new(), n.to_string());
                let j = entropic_sup(&chain.matrix, &chain.pi, xi * (1.0 - eps), PValue::Infinity, T_CAP)?.value;
                let n = atmix_sample_size(*xi, *eps, *delta, &AtmixInput::Uniform { t_mix: tm, j_inf: j })?.n;
                push("atmix_n_uniform", String::new(), n.to_string());
            }
            let cands = ergodic_candidates(&chain, *xi, *eps, p)?;
            for c in &cands {
                push("b_p", c.p.to_string(), cell(c.bp));
                push("j_p_sup", c.p.to_string(), cell(c.jp));
            }
            let input = AtmixInput::Ergodic {
                candidates: cands,
                t_sharp_outer: t_sharp(
                    &chain.matrix,
                    &chain.pi,
                    atmix_outer_xi(*eps, *delta, C_ERGODIC_DEFAULT),
                    T_CAP,
                )?,
                t_sharp_xi: t_sharp(&chain.matrix, &chain.pi, *xi, T_CAP)?,
                c_erg: C_ERGODIC_DEFAULT,
            };
            let r = atmix_sample_size(*xi, *eps, *delta, &input)?;
            push("atmix_n_ergodic", opt_cell(r.chosen.map(|i| p[i])), r.n.to_string());
            Ok((Report::table(t), out))
        }
    }
}

fn run_family(a: &FamilyArgs) -> Result<Report> {
    let spec = FamilySpec::from_json(&read_text(&a.spec)?)?;
    let built = spec.build()?;
    if a.out.format == Some(Format::Csv) {
        let mut text = format!("# family: {}\n# tail_mass: {:e}\n", built.family, built.tail_mass);
        for row in built.matrix.to_rows() {
            text.push_str(&row.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(","));
            text.push('\n');
        }
        return Ok(Report { body: Body::Json(Value::String(text)), violations: Vec::new() });
    }
    Ok(Report { body: Body::Json(serde_json::to_value(&built.matrix)?), violations: Vec::new() })
}

/// Translates a `--config` JSON object into command-line arguments.
///
/// `command` (and `experiment` / `bound`) name the subcommand; `params` and any
/// other keys become flags; arrays join with commas; `output` may be a path or
/// `{"path": ..., "format": ...}`.
pub fn config_args(v: &Value) -> Result<Vec<String>> {
    let obj = v.as_object().ok_or_else(|| Error::Config("config must be a JSON object".into()))?;
    let mut args: Vec<String> = Vec::new();
    match obj.get("command").and_then(Value::as_str) {
        Some(c) => args.extend(c.split_whitespace().map(str::to_string)),
        None if obj.contains_key("experiment") => args.push("experiment".into()),
        None if obj.contains_key("bound") => args.push("bounds".into()),
        None => {}
    }
    for key in ["experiment", "bound"] {
        if let Some(name) = obj.get(key).and_then(Value::as_str) {
            args.push(name.to_string());
        }
    }
    let flag_value = |v: &Value| -> Result<Option<String>> {
        Ok(match v {
            Value::Bool(true) => None,
            Value::String(s) => Some(s.clone()),
            Value::Number(n) => Some(n.to_string()),
            Value::Array(items) => Some(items.iter().map(json_cell).collect::<Vec<_>>().join(",")),
            other => return Err(Error::Config(format!("unsupported config value {other}"))),
        })
    };
    let mut push_flag = |k: &str, v: &Value| -> Result<()> {
        if v == &Value::Bool(false) || v.is_null() {
            return Ok(());
        }
        args.push(format!("--{}", k.replace('_', "-")));
        if let Some(s) = flag_value(v)? {
            args.push(s);
        }
        Ok(())
    };
    for (k, v) in obj {
        match k.as_str() {
            "command" | "experiment" | "bound" => {}
            "params" => {
                let params = v.as_object().ok_or_else(|| Error::Config("params must be an object".into()))?;
                for (pk, pv) in params {
                    push_flag(pk, pv)?;
                }
            }
            "output" => match v {
                Value::Object(o) => {
                    for (ok, ov) in o {
                        push_flag(if ok == "path" { "output" } else { ok }, ov)?;
                    }
                }
                other => push_flag("output", other)?,
            },
            _ => push_flag(k, v)?,
        }
    }
    Ok(args)
}

/// Expands `--config path` into flags placed before the explicit ones, so explicit flags win.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let pos = args.iter().position(|a| a == "--config");
    let Some(pos) = pos else { return Ok(args) };
    let path = args.get(pos + 1).ok_or_else(|| Error::Config("--config needs a path".into()))?;
    let v: Value = serde_json::from_str(&std::fs::read_to_string(Path::new(path))?)?;
    let rest: Vec<OsString> =
        args.iter().enumerate().skip(1).filter(|(i, _)| *i != pos && *i != pos + 1).map(|(_, a)| a.clone()).collect();
    let words = rest.iter().take_while(|a| !a.to_string_lossy().starts_with('-')).count();
    let mut from_config = config_args(&v)?;
    // Subcommand words given on the command line replace the config's unless they are a prefix of them.
    let config_words = from_config.iter().take_while(|a| !a.starts_with('-')).count();
    let prefix = words <= config_words && rest[..words].iter().zip(&from_config).all(|(a, b)| a.to_str() == Some(b));
    if words > 0 && !prefix {
        from_config.drain(..config_words);
    }
    let words_from_config: Vec<String> = if prefix { from_config.drain(..config_words).collect() } else { Vec::new() };
    // Explicit flags replace config entries of the same name.
    let explicit: Vec<String> = rest[words..]
        .iter()
        .filter_map(|a| a.to_str())
        .filter(|a| a.starts_with("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect();
    let mut kept = Vec::new();
    let mut skipping = false;
    for a in from_config {
        if a.starts_with("--") {
            skipping = explicit.contains(&a);
        }
        if !skipping {
            kept.push(a);
        }
    }
    let mut out = vec![args[0].clone()];
    if prefix {
        out.extend(words_from_config.into_iter().map(OsString::from));
    } else {
        out.extend(rest[..words].iter().cloned());
    }
    out.extend(kept.into_iter().map(OsString::from));
    out.extend(rest[words..].iter().cloned());
    Ok(out)
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let (report, out, default) = match &cli.command {
        Command::Exact(a) => (run_exact(a)?, Some(&a.out), Format::Json),
        Command::Estimate(a) => (run_estimate(a)?, Some(&a.out), Format::Csv),
        Command::Bounds(b) => {
            let (r, out) = run_bounds(b)?;
            (r, out, Format::Csv)
        }
        Command::Experiment(e) => {
            let (r, out) = run_experiment(e)?;
            (r, Some(out), Format::Csv)
        }
        Command::Family(a) => {
            let report = run_family(a)?;
            let text = match &report.body {
                Body::Json(Value::String(s)) => s.clone(),
                Body::Json(v) => pretty(v),
                Body::Table(t) => t.to_csv(),
            };
            match &a.out.output {
                Some(p) => atomic_write(p, text.as_bytes())?,
                None => print!("{text}"),
            }
            return Ok(EXIT_OK);
        }
    };
    if let Some(out) = out {
        emit(&report, out, default)?;
    }
    if report.violations.is_empty() {
        Ok(EXIT_OK)
    } else {
        for v in &report.violations {
            eprintln!("bound violated: {v}");
        }
        Ok(EXIT_VIOLATION)
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}
