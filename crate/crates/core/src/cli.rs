//! The `attrition` command line.
//!
//! Options come from flags and, optionally, a JSON file given with
//! `--config`; flags win. Every subcommand writes one table (CSV by default,
//! JSON with `--format json`) to standard output or `--output`.
//!
//! Exit codes: 0 on success, 2 for usage or configuration errors, 3 when a
//! solver could not reach the requested accuracy.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::dynamic::{self, ess_rates};
use crate::error::{Error, Result};
use crate::meanfield;
use crate::output::{Cell, Format, Table};
use crate::prize::{PrizeKind, PrizeSpec};
use crate::simulate::{self, Coupling, RoundSampling, Strategy, StrategyFamily, DurationComparison};
use crate::static_model::{self, EssCurve, EssOptions, InvasionMethod, QEvaluator};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "ATTRITION_THREADS";

#[derive(Debug, Parser)]
#[command(name = "attrition", version, about = "N-player war of attrition: solvers, certificates and simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// E[X(t)], Var X(t) and state probabilities of the dynamic game on a time grid
    DynamicMoments,
    /// Transition matrix P(t) of the dynamic game at time --t
    DynamicMatrix,
    /// Expected dynamic-game duration T_N against its limit V(1) - V(0)
    DynamicDuration,
    /// Static equilibrium cdf G_N, density g_N and Q[G_N]
    StaticSolve,
    /// Summary of Q[G_N] (value at 0, minimum, value at the end) over a sweep
    QFunctional,
    /// Payoff gap Delta_N against one immediate quitter over alpha x N
    InvasionSweep,
    /// Limit quitting fraction q(t), or m(t, tau) when --tau is given
    Meanfield,
    /// Sign of the payoff perturbation for the warped cdf q(t)^warp
    Perturbation,
    /// Monte Carlo of the dynamic game
    SimulateDynamic,
    /// Monte Carlo of the static game under G_N
    SimulateStatic,
    /// Partial-duration indistinguishability of two strategy families
    #[command(name = "theorem2", visible_alias = "partial-durations")]
    #[serde(rename = "theorem2")]
    PartialDurations,
    /// Log-log decay rates of A_N and C_N
    RateFit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum PrizeArg {
    Power,
    Polynomial,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum MethodArg {
    ClosedForm,
    Quadrature,
}

impl From<MethodArg> for InvasionMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::ClosedForm => InvasionMethod::ClosedForm,
            MethodArg::Quadrature => InvasionMethod::Quadrature,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Default, clap::Args)]
struct Flags {
    /// JSON file with any of the options below; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Prize family
    #[arg(long, global = true, value_enum)]
    prize: Option<PrizeArg>,
    /// Exponent of V(x) = x^alpha: a value, a list `a,b,c` or a range `a:b:step`
    #[arg(long, global = true)]
    alpha: Option<String>,
    /// Polynomial coefficients `a0,a1,...` (a0 must be 0)
    #[arg(long, global = true)]
    coefficients: Option<String>,
    /// Table knots `x:y,x:y,...` spanning [0, 1]
    #[arg(long, global = true)]
    knots: Option<String>,
    /// Number of players: a value, a list or a range `a:b[:step]`
    #[arg(long, global = true)]
    n: Option<String>,
    /// Time grid `t0:t1:points`
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Single time (dynamic-matrix)
    #[arg(long, global = true)]
    t: Option<f64>,
    /// Waiting-time grid `tau0:tau1:points` (meanfield)
    #[arg(long, global = true)]
    tau: Option<String>,
    /// RK4 step of the static ODE (default V(1)/1e4)
    #[arg(long, global = true)]
    step: Option<f64>,
    /// Stop the static ODE once 1 - G falls below this
    #[arg(long, global = true)]
    tail_tol: Option<f64>,
    /// Route for the invasion gap
    #[arg(long, global = true, value_enum)]
    method: Option<MethodArg>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    replicates: Option<usize>,
    /// Exceedance threshold (partial-durations)
    #[arg(long, global = true)]
    delta: Option<f64>,
    /// Fraction of rounds summed (partial-durations)
    #[arg(long, global = true)]
    q: Option<f64>,
    /// Exponent of the warped cdf q(t)^warp (perturbation)
    #[arg(long, global = true)]
    warp: Option<f64>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Write the table here instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Validate and print the resolved plan without computing
    #[arg(long, global = true)]
    dry_run: bool,
}

/// A number, list or range string in the config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Spread {
    Num(f64),
    List(Vec<f64>),
    Text(String),
}

impl Spread {
    fn into_text(self) -> String {
        match self {
            Spread::Num(v) => v.to_string(),
            Spread::List(v) => v.iter().map(f64::to_string).collect::<Vec<_>>().join(","),
            Spread::Text(s) => s,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    prize: Option<PrizeKind>,
    alpha: Option<Spread>,
    n: Option<Spread>,
    grid: Option<String>,
    t: Option<f64>,
    tau: Option<String>,
    step: Option<f64>,
    tail_tol: Option<f64>,
    method: Option<MethodArg>,
    seed: Option<u64>,
    replicates: Option<usize>,
    delta: Option<f64>,
    q: Option<f64>,
    warp: Option<f64>,
    format: Option<Format>,
    output: Option<PathBuf>,
    alpha_family: Option<StrategyFamily>,
    beta_family: Option<StrategyFamily>,
    coupling: Option<Coupling>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct Grid {
    t0: f64,
    t1: f64,
    points: usize,
}

impl Grid {
    fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.t0];
        }
        (0..self.points)
            .map(|i| self.t0 + (self.t1 - self.t0) * i as f64 / (self.points - 1) as f64)
            .collect()
    }
}

/// Fully resolved options for one run.
#[derive(Debug, Clone, Serialize)]
struct RunConfig {
    command: Command,
    prizes: Vec<PrizeKind>,
    #[serde(rename = "N")]
    ns: Vec<usize>,
    grid: Grid,
    t: f64,
    tau: Option<Grid>,
    step: Option<f64>,
    tail_tol: f64,
    method: MethodArg,
    seed: u64,
    replicates: usize,
    delta: f64,
    q: f64,
    warp: f64,
    format: Format,
    output: Option<PathBuf>,
    alpha_family: StrategyFamily,
    beta_family: StrategyFamily,
    coupling: Coupling,
}

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| cfg_err(format!("not a number: {s:?}")))
}

fn parse_usize(s: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| cfg_err(format!("not a non-negative integer: {s:?}")))
}

/// `v`, `a,b,c` or inclusive `a:b:step`.
fn parse_float_spread(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.len() {
        1 => s.split(',').map(parse_f64).collect(),
        3 => {
            let (a, b, step) = (parse_f64(parts[0])?, parse_f64(parts[1])?, parse_f64(parts[2])?);
            if !(step > 0.0) || b < a {
                return Err(cfg_err(format!("bad range {s:?}: need a <= b and step > 0")));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize + 1;
            Ok((0..count)
                .map(|i| ((a + step * i as f64) * 1e12).round() / 1e12)
                .collect())
        }
        _ => Err(cfg_err(format!("bad range {s:?}: expected a:b:step"))),
    }
}

/// `n`, `a,b,c`, `a:b` or `a:b:step`.
fn parse_int_spread(s: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.len() {
        1 => s.split(',').map(parse_usize).collect(),
        2 | 3 => {
            let a = parse_usize(parts[0])?;
            let b = parse_usize(parts[1])?;
            let step = if parts.len() == 3 { parse_usize(parts[2])? } else { 1 };
            if step == 0 || b < a {
                return Err(cfg_err(format!("bad range {s:?}: need a <= b and step > 0")));
            }
            Ok((a..=b).step_by(step).collect())
        }
        _ => Err(cfg_err(format!("bad range {s:?}"))),
    }
}

fn parse_grid(s: &str) -> Result<Grid> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(cfg_err(format!("grid {s:?} must be t0:t1:points")));
    }
    let g = Grid {
        t0: parse_f64(parts[0])?,
        t1: parse_f64(parts[1])?,
        points: parse_usize(parts[2])?,
    };
    if g.points == 0 || g.t0 < 0.0 || g.t1 < g.t0 {
        return Err(cfg_err(format!("grid {s:?} needs 0 <= t0 <= t1 and points >= 1")));
    }
    Ok(g)
}

fn parse_knots(s: &str) -> Result<Vec<[f64; 2]>> {
    s.split(',')
        .map(|p| {
            let xy: Vec<&str> = p.split(':').collect();
            if xy.len() != 2 {
                return Err(cfg_err(format!("knot {p:?} must be x:y")));
            }
            Ok([parse_f64(xy[0])?, parse_f64(xy[1])?])
        })
        .collect()
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(cfg_err(format!("--{name} must be positive, got {v}")))
    }
}

fn defaults(command: Command) -> (&'static str, &'static str) {
    // (alpha, N)
    match command {
        Command::InvasionSweep => ("0.5:1.5:0.1", "4:35"),
        Command::QFunctional => ("0.5,1,2", "25"),
        Command::DynamicDuration => ("0.5,1,2", "10,50,200"),
        Command::Perturbation => ("0.5,1,2", "10"),
        Command::RateFit => ("0.5", "20,40,80,160,320"),
        Command::PartialDurations => ("1", "50,200,800"),
        _ => ("1", "10"),
    }
}

fn resolve(command: Command, flags: Flags) -> Result<RunConfig> {
    let file: FileConfig = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| cfg_err(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| cfg_err(format!("bad config {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let (alpha_default, n_default) = defaults(command);

    let alpha_text = flags
        .alpha
        .clone()
        .or_else(|| file.alpha.clone().map(Spread::into_text));
    let prizes: Vec<PrizeKind> = match (flags.prize, &file.prize) {
        (Some(PrizeArg::Polynomial), _) => {
            let c = flags
                .coefficients
                .as_deref()
                .ok_or_else(|| cfg_err("--prize polynomial needs --coefficients"))?;
            vec![PrizeKind::Polynomial {
                coefficients: c.split(',').map(parse_f64).collect::<Result<_>>()?,
            }]
        }
        (Some(PrizeArg::Table), _) => {
            let k = flags
                .knots
                .as_deref()
                .ok_or_else(|| cfg_err("--prize table needs --knots"))?;
            vec![PrizeKind::Table { knots: parse_knots(k)? }]
        }
        (None, Some(kind)) if !matches!(kind, PrizeKind::Power { .. }) => {
            if alpha_text.is_some() {
                return Err(cfg_err("--alpha only applies to power prizes"));
            }
            vec![kind.clone()]
        }
        (_, file_kind) => {
            let text = match (alpha_text, file_kind) {
                (Some(t), _) => t,
                (None, Some(PrizeKind::Power { alpha })) => alpha.to_string(),
                _ => alpha_default.to_string(),
            };
            let alphas = parse_float_spread(&text)?;
            for &a in &alphas {
                positive("alpha", a)?;
            }
            alphas.into_iter().map(PrizeKind::power).collect()
        }
    };

    let n_text = flags
        .n
        .clone()
        .or_else(|| file.n.clone().map(Spread::into_text))
        .unwrap_or_else(|| n_default.to_string());
    let ns = parse_int_spread(&n_text)?;
    if ns.is_empty() || ns.iter().any(|&n| n < 2) {
        return Err(cfg_err("every N must be at least 2"));
    }

    let grid = parse_grid(
        flags
            .grid
            .as_deref()
            .or(file.grid.as_deref())
            .unwrap_or("0:1:101"),
    )?;
    let tau = flags
        .tau
        .as_deref()
        .or(file.tau.as_deref())
        .map(parse_grid)
        .transpose()?;
    let t = flags.t.or(file.t).unwrap_or(0.5);
    if !(t >= 0.0) {
        return Err(cfg_err("--t must be non-negative"));
    }
    let step = flags.step.or(file.step).map(|s| positive("step", s)).transpose()?;
    let tail_tol = flags
        .tail_tol
        .or(file.tail_tol)
        .unwrap_or(static_model::DEFAULT_TAIL_TOL);
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(cfg_err("--tail-tol must lie in (0, 1)"));
    }
    let replicates = flags.replicates.or(file.replicates).unwrap_or(match command {
        Command::PartialDurations => 2_000,
        _ => 10_000,
    });
    if replicates == 0 {
        return Err(cfg_err("--replicates must be at least 1"));
    }
    let delta = positive("delta", flags.delta.or(file.delta).unwrap_or(0.1))?;
    let q = flags.q.or(file.q).unwrap_or(0.5);
    if !(q > 0.0 && q <= 1.0) {
        return Err(cfg_err("--q must lie in (0, 1]"));
    }
    let warp = positive("warp", flags.warp.or(file.warp).unwrap_or(1.3))?;
    let format = match flags.format {
        Some(FormatArg::Csv) => Format::Csv,
        Some(FormatArg::Json) => Format::Json,
        None => file.format.unwrap_or_default(),
    };
    let alpha_family = file
        .alpha_family
        .unwrap_or(StrategyFamily::fixed(Strategy::Exponential { rate: 1.0 }));
    let beta_family = file
        .beta_family
        .unwrap_or(StrategyFamily::fixed(Strategy::half_normal_matching(1.0)));
    alpha_family.validate()?;
    beta_family.validate()?;

    // surface prize errors at resolve time so --dry-run catches them
    for kind in &prizes {
        for &n in &ns {
            PrizeSpec::new(kind.clone(), n)?;
        }
    }

    Ok(RunConfig {
        command,
        prizes,
        ns,
        grid,
        t,
        tau,
        step,
        tail_tol,
        method: flags.method.or(file.method).unwrap_or(MethodArg::ClosedForm),
        seed: flags.seed.or(file.seed).unwrap_or(1),
        replicates,
        delta,
        q,
        warp,
        format,
        output: flags.output.or(file.output),
        alpha_family,
        beta_family,
        coupling: file.coupling.unwrap_or_default(),
    })
}

impl RunConfig {
    fn single(&self) -> Result<PrizeSpec> {
        if self.prizes.len() != 1 || self.ns.len() != 1 {
            return Err(cfg_err(format!(
                "{} needs a single prize and a single N",
                serde_json::to_string(&self.command).unwrap_or_default().trim_matches('"')
            )));
        }
        PrizeSpec::new(self.prizes[0].clone(), self.ns[0])
    }

    fn ess_options(&self) -> EssOptions {
        EssOptions {
            step: self.step,
            tail_tol: self.tail_tol,
            ..EssOptions::default()
        }
    }

    /// Every (prize, N) pair, ordered by prize then N.
    fn cells(&self) -> Result<Vec<(PrizeKind, PrizeSpec)>> {
        let mut out = Vec::new();
        for kind in &self.prizes {
            for &n in &self.ns {
                out.push((kind.clone(), PrizeSpec::new(kind.clone(), n)?));
            }
        }
        Ok(out)
    }
}

fn alpha_of(kind: &PrizeKind) -> f64 {
    match kind {
        PrizeKind::Power { alpha } => *alpha,
        _ => f64::NAN,
    }
}

fn common_meta(table: &mut Table, cfg: &RunConfig) {
    if cfg.prizes.len() == 1 {
        let kind = serde_json::to_string(&cfg.prizes[0]).unwrap_or_default();
        table.meta("prize", kind);
    }
}

fn dynamic_moments(cfg: &RunConfig) -> Result<Table> {
    let spec = cfg.single()?;
    let n = spec.n();
    let rseq = ess_rates(&spec);
    let times = cfg.grid.values();
    let dists = dynamic::state_probs_series(&rseq, &times);
    let mut cols = vec!["t".to_string(), "E_X".into(), "Var_X".into()];
    cols.extend((1..=n).map(|i| format!("p_{i}")));
    let mut table = Table::new(cols);
    common_meta(&mut table, cfg);
    table.meta("N", n);
    for d in dists {
        let mut row: Vec<Cell> = vec![d.t.into(), d.mean().into(), d.variance().into()];
        row.extend(d.probs.iter().map(|&p| Cell::from(p)));
        table.push(row);
    }
    Ok(table)
}

fn dynamic_matrix(cfg: &RunConfig) -> Result<Table> {
    let spec = cfg.single()?;
    let n = spec.n();
    let p = dynamic::transition_matrix(&ess_rates(&spec), cfg.t);
    let mut cols = vec!["i".to_string()];
    cols.extend((1..=n).map(|j| format!("P_{j}")));
    let mut table = Table::new(cols);
    common_meta(&mut table, cfg);
    table.meta("N", n).meta("t", cfg.t).meta(
        "method",
        serde_json::to_string(&p.method).unwrap_or_default().trim_matches('"'),
    );
    for (i, row) in p.rows().enumerate() {
        let mut cells: Vec<Cell> = vec![(i + 1).into()];
        cells.extend(row.iter().map(|&v| Cell::from(v)));
        table.push(cells);
    }
    Ok(table)
}

fn dynamic_duration(cfg: &RunConfig) -> Result<Table> {
    let mut table = Table::new(["N", "alpha", "T_N", "limit"]);
    for (kind, spec) in cfg.cells()? {
        let limit = meanfield::total_duration(&spec)?;
        table.push(vec![
            spec.n().into(),
            alpha_of(&kind).into(),
            dynamic::expected_duration(&spec).into(),
            limit.into(),
        ]);
    }
    Ok(table)
}

fn static_solve(cfg: &RunConfig) -> Result<Table> {
    let spec = cfg.single()?;
    let curve = EssCurve::solve(&spec, &cfg.ess_options())?;
    let q = QEvaluator::new(&spec);
    let mut table = Table::new(["t", "G", "g", "Q"]);
    common_meta(&mut table, cfg);
    table
        .meta("N", spec.n())
        .meta("step", curve.step)
        .meta("t_max", curve.t_max);
    for t in cfg.grid.values() {
        let (g_cdf, g) = if t <= curve.t_max {
            (curve.cdf_at(t), curve.density_at(t))
        } else {
            // past the solved range the residual mass is below tail_tol
            (curve.cdf[curve.len() - 1], curve.density[curve.len() - 1])
        };
        table.push(vec![t.into(), g_cdf.into(), g.into(), q.eval(g_cdf, g).into()]);
    }
    Ok(table)
}

fn q_functional(cfg: &RunConfig) -> Result<Table> {
    let mut table = Table::new(["N", "alpha", "convexity", "Q_0", "Q_min", "argmin", "Q_end"]);
    for (kind, spec) in cfg.cells()? {
        let curve = EssCurve::solve(&spec, &cfg.ess_options())?;
        let q = static_model::q_functional(&curve, &spec);
        let conv = serde_json::to_string(&spec.convexity()).unwrap_or_default();
        table.push(vec![
            spec.n().into(),
            alpha_of(&kind).into(),
            conv.trim_matches('"').to_string().into(),
            q.values[0].into(),
            q.min.into(),
            q.argmin.into(),
            q.values[q.values.len() - 1].into(),
        ]);
    }
    Ok(table)
}

fn invasion_sweep(cfg: &RunConfig) -> Result<Table> {
    let method: InvasionMethod = cfg.method.into();
    let opts = cfg.ess_options();
    let rows: Vec<(f64, static_model::InvasionReport)> =
        if cfg.prizes.iter().all(|k| matches!(k, PrizeKind::Power { .. })) {
            let alphas: Vec<f64> = cfg.prizes.iter().map(alpha_of).collect();
            static_model::invasion_sweep(&alphas, &cfg.ns, method, &opts)?
                .into_iter()
                .map(|r| (r.alpha, r.report))
                .collect()
        } else {
            cfg.cells()?
                .into_iter()
                .map(|(kind, spec)| {
                    let curve = EssCurve::solve(&spec, &opts)?;
                    let rep = match method {
                        InvasionMethod::ClosedForm => static_model::delta_invasion_closed(&curve, &spec)?,
                        InvasionMethod::Quadrature => {
                            static_model::delta_invasion_quadrature(&curve, &spec)?
                        }
                    };
                    Ok((alpha_of(&kind), rep))
                })
                .collect::<Result<_>>()?
        };
    let mut table = Table::new(["N", "alpha", "delta", "A_N", "C_N", "method"]);
    for kind in &cfg.prizes {
        let a = alpha_of(kind);
        let first_negative = rows
            .iter()
            .filter(|(ra, r)| (ra == &a || (a.is_nan() && ra.is_nan())) && r.delta < 0.0)
            .map(|(_, r)| r.n)
            .min();
        table.meta(
            format!("smallest_negative_N[alpha={a}]"),
            first_negative.map_or("none".to_string(), |n| n.to_string()),
        );
    }
    for (alpha, r) in rows {
        table.push(vec![
            r.n.into(),
            alpha.into(),
            r.delta.into(),
            r.a_n.into(),
            r.c_n.into(),
            r.method.to_string().into(),
        ]);
    }
    Ok(table)
}

fn meanfield_table(cfg: &RunConfig) -> Result<Table> {
    let spec = cfg.single()?;
    let v0 = spec.eval(0.0)?;
    let vmax = spec.eval(1.0)?;
    // endpoints are nudged inward where V' may vanish or blow up
    let nudge = 1e-9 * (vmax - v0);
    let open = |t: f64| t.clamp(v0 + nudge, vmax - nudge);
    let times: Vec<f64> = cfg.grid.values().into_iter().filter(|t| *t <= vmax).collect();
    match cfg.tau {
        None => {
            let mut table = Table::new(["t", "q", "qdot"]);
            common_meta(&mut table, cfg);
            for t in times {
                let s = meanfield::q_of_t(&spec, open(t))?;
                table.push(vec![t.into(), s.q.into(), s.qdot.into()]);
            }
            Ok(table)
        }
        Some(tau) => {
            let mut table = Table::new(["t", "tau", "m"]);
            common_meta(&mut table, cfg);
            for t in times {
                for w in tau.values() {
                    let m = meanfield::m_density(&spec, open(t), w)?;
                    table.push(vec![t.into(), w.into(), m.into()]);
                }
            }
            Ok(table)
        }
    }
}

fn perturbation(cfg: &RunConfig) -> Result<Table> {
    let mut table = Table::new(["alpha", "convexity", "perturbation"]);
    table.meta("phi", format!("q(t)^{}", cfg.warp));
    for kind in &cfg.prizes {
        let spec = PrizeSpec::new(kind.clone(), cfg.ns[0])?;
        let vmax = spec.eval(1.0)?;
        let warp = cfg.warp;
        let inner = spec.clone();
        let value = meanfield::ess_perturbation(&spec, move |t| {
            inner.inverse(t.min(vmax)).map(|x| x.powf(warp)).unwrap_or(f64::NAN)
        })?;
        let conv = serde_json::to_string(&spec.convexity()).unwrap_or_default();
        table.push(vec![
            alpha_of(kind).into(),
            conv.trim_matches('"').to_string().into(),
            value.into(),
        ]);
    }
    Ok(table)
}

fn simulate_dynamic(cfg: &RunConfig) -> Result<Table> {
    let spec = cfg.single()?;
    let run = simulate::simulate_dynamic_game(
        &spec,
        cfg.seed,
        cfg.replicates,
        &cfg.grid.values(),
        RoundSampling::RoundRate,
    )?;
    let o = &run.outputs;
    let mut table = Table::new(["t", "emp_E_X", "emp_Var_X", "ci"]);
    table.meta("seed", run.seed).meta("replicates", run.replicates);
    common_meta(&mut table, cfg);
    table
        .meta("N", run.n)
        .meta("duration_mean", crate::output::fmt_float(o.duration_mean))
        .meta("duration_ci", crate::output::fmt_float(o.duration_ci))
        .meta("T_N", crate::output::fmt_float(o.duration_expected));
    for j in 0..o.times.len() {
        table.push(vec![
            o.times[j].into(),
            o.mean_x[j].into(),
            o.var_x[j].into(),
            o.ci[j].into(),
        ]);
    }
    Ok(table)
}

fn simulate_static(cfg: &RunConfig) -> Result<Table> {
    let spec = cfg.single()?;
    let curve = EssCurve::solve(&spec, &cfg.ess_options())?;
    let run = simulate::sample_static_game(&curve, &spec, cfg.seed, cfg.replicates)?;
    let o = &run.outputs;
    let mut table = Table::new(["rank", "payoff"]);
    table.meta("seed", run.seed).meta("replicates", run.replicates);
    common_meta(&mut table, cfg);
    table
        .meta("N", run.n)
        .meta("mean_payoff", crate::output::fmt_float(o.mean_payoff))
        .meta("ci", crate::output::fmt_float(o.ci))
        .meta("indifference", crate::output::fmt_float(o.indifference));
    for (k, p) in o.rank_payoff.iter().enumerate() {
        table.push(vec![(k + 1).into(), (*p).into()]);
    }
    Ok(table)
}

fn partial_durations(cfg: &RunConfig) -> Result<Table> {
    let t2 = DurationComparison {
        alpha: cfg.alpha_family.clone(),
        beta: cfg.beta_family.clone(),
        q: cfg.q,
        ns: cfg.ns.clone(),
        delta: cfg.delta,
        coupling: cfg.coupling,
    };
    let run = simulate::compare_partial_durations(&t2, cfg.seed, cfg.replicates)?;
    let mut table = Table::new(["N", "exceedance", "ci_lo", "ci_hi"]);
    table
        .meta("seed", run.seed)
        .meta("replicates", run.replicates)
        .meta("q", cfg.q)
        .meta("delta", cfg.delta);
    for r in &run.outputs {
        table.push(vec![r.n.into(), r.exceedance.into(), r.ci_lo.into(), r.ci_hi.into()]);
    }
    Ok(table)
}

fn rate_fit(cfg: &RunConfig) -> Result<Table> {
    let alpha = match cfg.prizes.as_slice() {
        [PrizeKind::Power { alpha }] => *alpha,
        _ => return Err(cfg_err("rate-fit needs a single power prize")),
    };
    let fit = static_model::rate_fit(alpha, &cfg.ns, &cfg.ess_options())?;
    let mut table = Table::new(["N", "A_N", "C_N"]);
    table
        .meta("alpha", alpha)
        .meta("slope_A", crate::output::fmt_float(fit.slope_a))
        .meta("slope_C", crate::output::fmt_float(fit.slope_c));
    for i in 0..fit.ns.len() {
        table.push(vec![fit.ns[i].into(), fit.a_n[i].into(), fit.c_n[i].into()]);
    }
    Ok(table)
}

fn dispatch(cfg: &RunConfig) -> Result<Table> {
    match cfg.command {
        Command::DynamicMoments => dynamic_moments(cfg),
        Command::DynamicMatrix => dynamic_matrix(cfg),
        Command::DynamicDuration => dynamic_duration(cfg),
        Command::StaticSolve => static_solve(cfg),
        Command::QFunctional => q_functional(cfg),
        Command::InvasionSweep => invasion_sweep(cfg),
        Command::Meanfield => meanfield_table(cfg),
        Command::Perturbation => perturbation(cfg),
        Command::SimulateDynamic => simulate_dynamic(cfg),
        Command::SimulateStatic => simulate_static(cfg),
        Command::PartialDurations => partial_durations(cfg),
        Command::RateFit => rate_fit(cfg),
    }
}

fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(cfg_err(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
    }
}

fn execute(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    if let Some(dir) = cfg.output.as_ref().and_then(|p| p.parent()) {
        if !dir.as_os_str().is_empty() && !dir.is_dir() {
            return Err(cfg_err(format!("output directory {} does not exist", dir.display())));
        }
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::NumericalFailure(format!("thread pool: {e}")))?;
    let table = pool.install(|| dispatch(cfg))?;
    match &cfg.output {
        Some(path) => {
            let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
            table.write(&mut f, cfg.format)?;
            f.flush()?;
        }
        None => table.write(stdout, cfg.format)?,
    }
    Ok(())
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_CONFIG
    }
}

/// Runs the command line with explicit output streams.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    let dry_run = cli.opts.dry_run;
    let cfg = match resolve(cli.command, cli.opts) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    if dry_run {
        let plan = serde_json::json!({ "dry_run": true, "plan": cfg });
        let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&plan).unwrap_or_default());
        return EXIT_OK;
    }
    match execute(&cfg, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs the command line against the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .try_init();
    // unlocked handles: worker threads may log while a command runs
    let mut out = std::io::BufWriter::new(std::io::stdout());
    let code = run_with(args, &mut out, &mut std::io::stderr());
    let _ = out.flush();
    code
}
