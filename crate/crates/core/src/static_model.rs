//! The static (one-shot) N-player game.
//!
//! The symmetric equilibrium candidate `G_N` solves the autonomous ODE
//! `G' = Xi_N(G)`, `G(0) = 0`, where
//!
//! ```text
//! Xi_N(u) = (1 - u^(N-1)) / ((N-1) * sum_r c_r b_{r,N-2}(u))
//! ```
//!
//! and `c_r = V_{r+2} - V_{r+1}`. The curve is integrated on a uniform grid
//! with classical RK4, then used to evaluate the second-order certificate
//! `Q[G_N]`, the pure-strategy payoff (which must be flat in the quitting
//! time) and the payoff gap against a population containing one immediate
//! quitter.

use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::numerics::ode::rk4_scalar;
use crate::numerics::quad::{gauss_legendre, simpson, trapezoid};
use crate::numerics::{ls_slope, BernsteinBasis};
use crate::prize::PrizeSpec;

/// Default number of RK4 steps per unit of `V(1)`.
pub const DEFAULT_STEPS_PER_VMAX: f64 = 1e4;
/// Default truncation level for `1 - G`.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;
/// Largest improper-integral tail accepted by the invasion routes.
pub const MAX_TAIL: f64 = 1e-8;
/// Overshoot of `G` past 1 that triggers `StepTooLarge`.
const OVERSHOOT_TOL: f64 = 1e-9;
const MAX_NODES: usize = 50_000_000;

/// The drift `Xi_N` with its Bernstein basis cached.
#[derive(Debug, Clone)]
pub struct Drift {
    n: usize,
    c: Vec<f64>,
    basis: BernsteinBasis,
}

impl Drift {
    pub fn new(spec: &PrizeSpec) -> Self {
        let n = spec.n();
        Self {
            n,
            c: spec.diffs().to_vec(),
            basis: BernsteinBasis::new(n - 2),
        }
    }

    /// `Xi_N(u)`, with `u` clamped to `[0, 1]` and `Xi_N(1) = 0`.
    pub fn eval(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        if u >= 1.0 {
            return 0.0;
        }
        let numer = -((self.n - 1) as f64 * u.ln()).exp_m1();
        numer / ((self.n - 1) as f64 * self.basis.eval(&self.c, u))
    }
}

/// `Xi_N(xi_val)` for a prize sequence.
pub fn xi(spec: &PrizeSpec, xi_val: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&xi_val) {
        return Err(Error::domain(xi_val, "[0, 1]"));
    }
    Ok(Drift::new(spec).eval(xi_val))
}

/// Solver settings for [`EssCurve::solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EssOptions {
    /// RK4 step; `None` means `V(1) / 1e4`.
    pub step: Option<f64>,
    pub tail_tol: f64,
    /// How many times the step may be halved after `StepTooLarge`.
    pub max_halvings: u32,
}

impl Default for EssOptions {
    fn default() -> Self {
        Self {
            step: None,
            tail_tol: DEFAULT_TAIL_TOL,
            max_halvings: 8,
        }
    }
}

/// `G_N` and `g_N = Xi_N(G_N)` on the uniform grid `t_m = m * step`.
#[derive(Debug, Clone, Serialize)]
pub struct EssCurve {
    #[serde(skip)]
    spec: PrizeSpec,
    #[serde(skip)]
    drift: Drift,
    pub step: f64,
    pub tail_tol: f64,
    #[serde(rename = "G")]
    pub cdf: Vec<f64>,
    #[serde(rename = "g")]
    pub density: Vec<f64>,
    pub t_max: f64,
}

/// Integrates `G' = Xi_N(G)` from `G(0) = 0` with fixed-step RK4 until
/// `1 - G < tail_tol`.
pub fn solve_ess_ode(spec: &PrizeSpec, step: f64, tail_tol: f64) -> Result<EssCurve> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid(format!("step must be positive, got {step}")));
    }
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::domain(tail_tol, "(0, 1)"));
    }
    let drift = Drift::new(spec);
    let mut cdf = vec![0.0];
    let mut y: f64 = 0.0;
    while 1.0 - y >= tail_tol {
        if cdf.len() >= MAX_NODES {
            return Err(Error::NumericalFailure(format!(
                "G reached only {y} after {MAX_NODES} steps"
            )));
        }
        let next = rk4_scalar(|u| drift.eval(u), y, step);
        if !next.is_finite() {
            return Err(Error::NumericalFailure("non-finite G".into()));
        }
        if next < y {
            return Err(Error::StepTooLarge {
                step,
                reason: format!("G decreased from {y} to {next}"),
            });
        }
        if next > 1.0 + OVERSHOOT_TOL {
            return Err(Error::StepTooLarge {
                step,
                reason: format!("G overshot 1 by {:e}", next - 1.0),
            });
        }
        y = next.min(1.0);
        cdf.push(y);
    }
    let density = cdf.iter().map(|&u| drift.eval(u)).collect();
    let t_max = (cdf.len() - 1) as f64 * step;
    Ok(EssCurve {
        spec: spec.clone(),
        drift,
        step,
        tail_tol,
        cdf,
        density,
        t_max,
    })
}

impl EssCurve {
    /// Solves with default or given options, halving the step on
    /// `StepTooLarge`.
    pub fn solve(spec: &PrizeSpec, opts: &EssOptions) -> Result<Self> {
        let mut step = opts.step.unwrap_or(spec.v_max() / DEFAULT_STEPS_PER_VMAX);
        let mut attempt = 0;
        loop {
            match solve_ess_ode(spec, step, opts.tail_tol) {
                Err(Error::StepTooLarge { reason, .. }) if attempt < opts.max_halvings => {
                    log::debug!("ESS ODE step {step} rejected ({reason}); halving");
                    step /= 2.0;
                    attempt += 1;
                }
                other => return other,
            }
        }
    }

    pub fn spec(&self) -> &PrizeSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.spec.n()
    }

    pub fn len(&self) -> usize {
        self.cdf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cdf.is_empty()
    }

    /// Grid time of node `m`.
    pub fn time(&self, m: usize) -> f64 {
        m as f64 * self.step
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|m| self.time(m)).collect()
    }

    /// Residual mass `1 - G(t_max)`.
    pub fn tail_mass(&self) -> f64 {
        1.0 - self.cdf[self.len() - 1]
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let last = self.len() - 1;
        let pos = (t / self.step).max(0.0);
        let m = (pos.floor() as usize).min(last.saturating_sub(1));
        (m, t - self.time(m))
    }

    /// `G(t)` by cubic Hermite interpolation; 1 beyond the grid is not
    /// assumed, the last node value is returned.
    pub fn cdf_at(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= self.t_max {
            return self.cdf[self.len() - 1];
        }
        let (m, dt) = self.locate(t);
        let h = self.step;
        let s = dt / h;
        let (y0, y1) = (self.cdf[m], self.cdf[m + 1]);
        let (d0, d1) = (self.density[m] * h, self.density[m + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let v = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * d0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * d1;
        v.clamp(y0, y1)
    }

    /// `g(t) = Xi_N(G(t))`.
    pub fn density_at(&self, t: f64) -> f64 {
        self.drift.eval(self.cdf_at(t))
    }

    /// `G^{-1}(u)`: bisection on the node values, then on the cell's Hermite
    /// interpolant. Mass beyond `t_max` (below `tail_tol`) maps to `t_max`.
    pub fn quantile(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        if u >= self.cdf[self.len() - 1] {
            return self.t_max;
        }
        let m = self.cdf.partition_point(|&g| g <= u) - 1;
        let (mut lo, mut hi) = (self.time(m), self.time(m + 1));
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.cdf_at(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Cumulative `int_0^{t_m} G^k` at every node, exact for cubics on each
    /// cell (end-corrected trapezoid using `d/dt G^k = k G^{k-1} g`).
    pub fn cumulative_power_integral(&self, k: usize) -> Vec<f64> {
        let h = self.step;
        let kf = k as f64;
        let pw = |m: usize| -> (f64, f64) {
            let u = self.cdf[m];
            let y = u.powi(k as i32);
            let dy = if k == 0 {
                0.0
            } else {
                kf * u.powi(k as i32 - 1) * self.density[m]
            };
            (y, dy)
        };
        let mut out = Vec::with_capacity(self.len());
        out.push(0.0);
        let mut acc = 0.0;
        let mut prev = pw(0);
        for m in 1..self.len() {
            let cur = pw(m);
            acc += h * (prev.0 + cur.0) / 2.0 + h * h * (prev.1 - cur.1) / 12.0;
            out.push(acc);
            prev = cur;
        }
        out
    }
}

/// `sup_t |G_N(t) - min(V^{-1}(t), 1)|` over the curve nodes. When the
/// curve ends before `V(1)` it is extended by its last value on `[t_max, V(1)]`.
pub fn ess_limit_error(curve: &EssCurve, spec: &PrizeSpec) -> Result<f64> {
    let vmax = spec.eval(1.0)?;
    let mut worst: f64 = 0.0;
    for (m, &g) in curve.cdf.iter().enumerate() {
        let t = curve.time(m);
        let limit = if t >= vmax { 1.0 } else { spec.inverse(t)? };
        worst = worst.max((g - limit).abs());
    }
    if curve.t_max < vmax {
        // the limit is increasing, so the gap on the extension peaks at V(1)
        let last = curve.cdf[curve.len() - 1];
        worst = worst.max((1.0 - last).abs());
    }
    Ok(worst)
}

/// `Q[G_N]` on the curve grid with its minimum.
#[derive(Debug, Clone, Serialize)]
pub struct QProfile {
    pub values: Vec<f64>,
    pub min: f64,
    /// Time at which the minimum is attained.
    pub argmin: f64,
}

/// Evaluates `Q[G_N] = 2 G^{N-2} + g (N-2) sum_r (c_{r+1} - c_r) b_{r,N-3}(G)`,
/// the exact time derivative of the Bernstein term (no finite differences).
#[derive(Debug, Clone)]
pub struct QEvaluator {
    n: usize,
    dc: Vec<f64>,
    basis: Option<BernsteinBasis>,
}

impl QEvaluator {
    pub fn new(spec: &PrizeSpec) -> Self {
        let n = spec.n();
        let dc = spec.diffs().windows(2).map(|w| w[1] - w[0]).collect();
        Self {
            n,
            dc,
            basis: (n >= 3).then(|| BernsteinBasis::new(n - 3)),
        }
    }

    /// `Q` at a point where `G = u` and `g = density`.
    pub fn eval(&self, u: f64, density: f64) -> f64 {
        match &self.basis {
            None => 2.0,
            Some(b) => {
                2.0 * u.powi(self.n as i32 - 2) + density * (self.n - 2) as f64 * b.eval(&self.dc, u)
            }
        }
    }
}

/// `Q[G_N]` at every curve node.
pub fn q_functional(curve: &EssCurve, spec: &PrizeSpec) -> QProfile {
    let q = QEvaluator::new(spec);
    let values: Vec<f64> = curve
        .cdf
        .iter()
        .zip(&curve.density)
        .map(|(&u, &g)| q.eval(u, g))
        .collect();
    let (idx, min) = values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    QProfile {
        argmin: curve.time(idx),
        min,
        values,
    }
}

/// `Upsilon_N[a] = int Q[G_N](t) a(t)^2 dt` by the trapezoid rule on the
/// curve grid.
pub fn upsilon(curve: &EssCurve, spec: &PrizeSpec, alpha_fn: impl Fn(f64) -> f64) -> f64 {
    let q = q_functional(curve, spec);
    let ys: Vec<f64> = q
        .values
        .iter()
        .enumerate()
        .map(|(m, qv)| qv * alpha_fn(curve.time(m)).powi(2))
        .collect();
    trapezoid(&ys, curve.step)
}

/// Precomputed data for evaluating [`payoff_pure_vs_ess`] at many times.
pub struct PurePayoff<'a> {
    curve: &'a EssCurve,
    values: Vec<f64>,
    basis: BernsteinBasis,
    cumulative: Vec<f64>,
}

impl<'a> PurePayoff<'a> {
    pub fn new(curve: &'a EssCurve, spec: &PrizeSpec) -> Self {
        let n = spec.n();
        Self {
            curve,
            values: spec.values().to_vec(),
            basis: BernsteinBasis::new(n - 1),
            cumulative: curve.cumulative_power_integral(n - 1),
        }
    }

    /// Expected payoff of quitting at `x` against `N-1` opponents drawing
    /// from `G_N`:
    /// `sum_{r=0}^{N-1} V_{r+1} b_{r,N-1}(G(x)) - x + int_0^x G^{N-1}`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let c = self.curve;
        if !(0.0..=c.t_max * (1.0 + 1e-12)).contains(&x) {
            return Err(Error::domain(x, format!("[0, {}]", c.t_max)));
        }
        let k = self.basis.degree() as i32;
        let u = c.cdf_at(x);
        let (m, dt) = c.locate(x.min(c.t_max));
        let partial = if dt > 0.0 {
            gauss_legendre(|s| c.cdf_at(s).powi(k), c.time(m), c.time(m) + dt)
        } else {
            0.0
        };
        let integral = self.cumulative[m] + partial;
        Ok(self.basis.eval(&self.values, u) - x + integral)
    }
}

/// `J_N(delta_x | g_N^{(N-1)})`; use [`PurePayoff`] for repeated queries.
pub fn payoff_pure_vs_ess(curve: &EssCurve, spec: &PrizeSpec, x: f64) -> Result<f64> {
    PurePayoff::new(curve, spec).eval(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InvasionMethod {
    ClosedForm,
    Quadrature,
}

impl std::fmt::Display for InvasionMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InvasionMethod::ClosedForm => "closed_form",
            InvasionMethod::Quadrature => "quadrature",
        })
    }
}

/// Payoff gap `Delta_N = J(g_N | g_N^{(N-2)}, delta_0) - J(delta_0 | ...)`.
#[derive(Debug, Clone, Serialize)]
pub struct InvasionReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub delta: f64,
    #[serde(rename = "A_N")]
    pub a_n: f64,
    #[serde(rename = "C_N")]
    pub c_n: f64,
    #[serde(rename = "payoff_gN")]
    pub payoff_gn: f64,
    pub payoff_delta0: f64,
    pub method: InvasionMethod,
    /// Estimated contribution of `[t_max, inf)`, already included.
    pub tail: f64,
}

fn check_tail(tail: f64) -> Result<()> {
    if tail.abs() > MAX_TAIL {
        Err(Error::TailNotConverged {
            tail: tail.abs(),
            tolerance: MAX_TAIL,
        })
    } else {
        Ok(())
    }
}

fn check_curve_matches(curve: &EssCurve, spec: &PrizeSpec) -> Result<()> {
    if curve.spec.values() != spec.values() {
        return Err(Error::invalid("curve was solved for a different prize sequence"));
    }
    Ok(())
}

/// `Delta_N` by direct quadrature of the payoff of `g_N` against `N-2`
/// copies of itself and one player quitting at 0.
pub fn delta_invasion_quadrature(curve: &EssCurve, spec: &PrizeSpec) -> Result<InvasionReport> {
    let n = spec.n();
    if n < 3 {
        return Err(Error::invalid("invasion by an immediate quitter needs N >= 3"));
    }
    check_curve_matches(curve, spec)?;
    if curve.tail_tol > 1e-10 {
        return Err(Error::invalid(format!(
            "invasion quadrature needs tail_tol <= 1e-10, curve has {:e}",
            curve.tail_tol
        )));
    }
    let basis = BernsteinBasis::new(n - 2);
    let upper = &spec.values()[1..];
    let h_cum = curve.cumulative_power_integral(n - 2);
    let ys: Vec<f64> = (0..curve.len())
        .map(|m| {
            let (u, g) = (curve.cdf[m], curve.density[m]);
            g * (basis.eval(upper, u) - curve.time(m) + h_cum[m])
        })
        .collect();
    let last = curve.len() - 1;
    let tail = curve.tail_mass() * (spec.v(n) - curve.t_max + h_cum[last]);
    check_tail(tail)?;
    let payoff_gn = simpson(&ys, curve.step) + tail;
    let payoff_delta0 = (spec.v(1) + spec.v(2)) / 2.0;
    let delta = payoff_gn - payoff_delta0;
    Ok(InvasionReport {
        n,
        delta,
        a_n: payoff_gn,
        c_n: -payoff_delta0,
        payoff_gn,
        payoff_delta0,
        method: InvasionMethod::Quadrature,
        tail,
    })
}

/// `int_0^inf (1 - G)(1 - G^{N-2}) dt` with its tail estimate.
fn residual_integral(curve: &EssCurve, spec: &PrizeSpec) -> (f64, f64) {
    let n = spec.n();
    let ys: Vec<f64> = curve
        .cdf
        .iter()
        .map(|&u| (1.0 - u) * (1.0 - u.powi(n as i32 - 2)))
        .collect();
    // 1 - G decays like exp(-t / c_{N-2}) and 1 - G^{N-2} ~ (N-2)(1 - G)
    let c_last = spec.diffs()[n - 2];
    let tail = (n - 2) as f64 * curve.tail_mass().powi(2) * c_last / 2.0;
    (simpson(&ys, curve.step) + tail, tail)
}

/// `Delta_N = A_N + C_N` with the binomial double sum collapsed by
/// [`gamma_sum`]; only `int (1-G)(1-G^{N-2})` is taken from the curve.
pub fn delta_invasion_closed(curve: &EssCurve, spec: &PrizeSpec) -> Result<InvasionReport> {
    let n = spec.n();
    if n < 4 {
        return Err(Error::invalid("the closed-form invasion gap needs N >= 4"));
    }
    check_curve_matches(curve, spec)?;
    let c = spec.diffs();
    let nf = n as f64;
    let binom = BernsteinBasis::new(n - 4);
    let mut sum = 0.0;
    for r in 0..=n - 4 {
        let ln_g = ln_gamma_sum(n - 4 - r, -(3.0 + r as f64));
        let w = (binom.ln_binomial(r) + ln_g).exp();
        sum += (c[r + 2] - c[r + 1]) * w;
    }
    let first = spec.v(n) - (nf - 2.0) / 2.0 * (spec.v(n) - spec.v(n - 1))
        + (nf - 2.0) * (nf - 3.0) / 2.0 * sum;
    let (residual, tail) = residual_integral(curve, spec);
    check_tail(tail)?;
    let a_n = first - residual;
    let payoff_delta0 = (spec.v(1) + spec.v(2)) / 2.0;
    let c_n = -payoff_delta0;
    Ok(InvasionReport {
        n,
        delta: a_n + c_n,
        a_n,
        c_n,
        payoff_gn: a_n,
        payoff_delta0,
        method: InvasionMethod::ClosedForm,
        tail,
    })
}

/// `sum_{k=0}^q C(q,k) (-1)^k / (k - p) = q! Gamma(-p) / Gamma(q+1-p)`.
///
/// `q = 0` is accepted (the sum is `-1/p`).
pub fn gamma_sum(q: usize, p: f64) -> Result<f64> {
    if !p.is_finite() || (p >= 0.0 && p.fract() == 0.0) {
        return Err(Error::invalid(format!(
            "gamma_sum needs p outside {{0, 1, 2, ...}}, got {p}"
        )));
    }
    if p < 0.0 {
        Ok(ln_gamma_sum(q, p).exp())
    } else {
        // Gamma(q+1-p) = Gamma(-p) prod_{k=0}^q (k - p), with possibly
        // negative arguments; use the finite product
        let v = (0..=q).fold(1.0, |acc, k| acc * (k.max(1) as f64) / (k as f64 - p));
        Ok(v)
    }
}

/// `ln(q! Gamma(-p) / Gamma(q+1-p))` for `p < 0`.
fn ln_gamma_sum(q: usize, p: f64) -> f64 {
    debug_assert!(p < 0.0);
    ln_gamma(q as f64 + 1.0) + ln_gamma(-p) - ln_gamma(q as f64 + 1.0 - p)
}

/// One point of an invasion sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    #[serde(flatten)]
    pub report: InvasionReport,
}

/// `Delta_N` for every `(alpha, N)` pair with power prizes, in parallel.
/// Rows come back ordered by alpha, then N.
pub fn invasion_sweep(
    alphas: &[f64],
    ns: &[usize],
    method: InvasionMethod,
    opts: &EssOptions,
) -> Result<Vec<SweepRow>> {
    let jobs: Vec<(f64, usize)> = alphas
        .iter()
        .flat_map(|&a| ns.iter().map(move |&n| (a, n)))
        .collect();
    jobs.par_iter()
        .map(|&(alpha, n)| {
            let spec = PrizeSpec::power(alpha, n)?;
            let curve = EssCurve::solve(&spec, opts)?;
            let report = match method {
                InvasionMethod::ClosedForm => delta_invasion_closed(&curve, &spec)?,
                InvasionMethod::Quadrature => delta_invasion_quadrature(&curve, &spec)?,
            };
            Ok(SweepRow { alpha, report })
        })
        .collect()
}

/// Smallest `N` in `rows` with `Delta_N < 0` for the given `alpha`.
pub fn smallest_invadable_n(rows: &[SweepRow], alpha: f64) -> Option<usize> {
    rows.iter()
        .filter(|r| r.alpha == alpha && r.report.delta < 0.0)
        .map(|r| r.report.n)
        .min()
}

/// Log-log fit of `|A_N|` and `|C_N|` against `N`.
#[derive(Debug, Clone, Serialize)]
pub struct RateFit {
    pub alpha: f64,
    pub ns: Vec<usize>,
    pub a_n: Vec<f64>,
    pub c_n: Vec<f64>,
    pub slope_a: f64,
    pub slope_c: f64,
}

/// Least-squares decay rates of `A_N` and `C_N` for `V(x) = x^alpha`.
pub fn rate_fit(alpha: f64, ns: &[usize], opts: &EssOptions) -> Result<RateFit> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(alpha, "(0, 1]"));
    }
    if ns.len() < 4 || ns.windows(2).any(|w| w[0] >= w[1]) || ns[0] < 4 {
        return Err(Error::invalid(
            "rate fit needs at least 4 strictly increasing N values, all >= 4",
        ));
    }
    let rows = invasion_sweep(&[alpha], ns, InvasionMethod::ClosedForm, opts)?;
    let a_n: Vec<f64> = rows.iter().map(|r| r.report.a_n).collect();
    let c_n: Vec<f64> = rows.iter().map(|r| r.report.c_n).collect();
    let ln_n: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ln_abs = |v: &[f64]| v.iter().map(|x| x.abs().ln()).collect::<Vec<_>>();
    Ok(RateFit {
        alpha,
        ns: ns.to_vec(),
        slope_a: ls_slope(&ln_n, &ln_abs(&a_n)),
        slope_c: ls_slope(&ln_n, &ln_abs(&c_n)),
        a_n,
        c_n,
    })
}
