//! Seeded Monte Carlo for both games.
//!
//! Every replicate draws from its own ChaCha stream, selected by
//! `(channel << 48) | replicate` under a key derived from the run seed, so
//! results do not depend on thread count or scheduling. Replicates are
//! processed in fixed-size blocks whose accumulators are merged in block
//! order.

use std::f64::consts::{FRAC_2_SQRT_PI, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::{erf, erf_inv, erfc_inv};

use crate::dynamic::{ess_rates, expected_duration};
use crate::error::{Error, Result};
use crate::prize::PrizeSpec;
use crate::static_model::EssCurve;

/// Replicates per work unit.
const BLOCK: usize = 256;
/// Two-sided 95% normal quantile used for every interval.
pub const Z95: f64 = 1.959_963_984_540_054;
/// Tolerance for matching strategy densities at zero.
pub const ZERO_MATCH_TOL: f64 = 1e-9;

const CHANNEL_DYNAMIC: u64 = 0;
const CHANNEL_ALPHA: u64 = 1;
const CHANNEL_BETA: u64 = 2;
const CHANNEL_STATIC: u64 = 3;

/// The RNG for one replicate on one channel.
pub fn stream(seed: u64, channel: u64, replicate: u64) -> ChaCha12Rng {
    assert!(replicate < 1 << 48, "replicate index out of range");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream((channel << 48) | replicate);
    rng
}

/// Uniform on `(0, 1]`, safe for logarithms.
fn open_uniform(rng: &mut impl Rng) -> f64 {
    1.0 - rng.random::<f64>()
}

/// A waiting-time distribution on `[0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    Exponential { rate: f64 },
    HalfNormal { scale: f64 },
}

impl Strategy {
    /// The half-normal whose density at zero equals that of `Exponential { rate }`.
    pub fn half_normal_matching(rate: f64) -> Self {
        Strategy::HalfNormal {
            scale: FRAC_2_SQRT_PI / SQRT_2 / rate,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = match *self {
            Strategy::Exponential { rate } => rate,
            Strategy::HalfNormal { scale } => scale,
        };
        if p > 0.0 && p.is_finite() {
            Ok(())
        } else {
            Err(Error::invalid(format!("strategy parameter must be positive: {self:?}")))
        }
    }

    pub fn density(&self, tau: f64) -> f64 {
        if tau < 0.0 {
            return 0.0;
        }
        match *self {
            Strategy::Exponential { rate } => rate * (-rate * tau).exp(),
            Strategy::HalfNormal { scale } => {
                FRAC_2_SQRT_PI / SQRT_2 / scale * (-0.5 * (tau / scale).powi(2)).exp()
            }
        }
    }

    pub fn density_at_zero(&self) -> f64 {
        self.density(0.0)
    }

    pub fn cdf(&self, tau: f64) -> f64 {
        if tau <= 0.0 {
            return 0.0;
        }
        match *self {
            Strategy::Exponential { rate } => -(-rate * tau).exp_m1(),
            Strategy::HalfNormal { scale } => erf(tau / (scale * SQRT_2)),
        }
    }

    /// Minimum of `count` independent draws, from one uniform `u` in `(0, 1]`:
    /// `F^{-1}(1 - u^{1/count})`.
    pub fn sample_min(&self, count: usize, u: f64) -> f64 {
        let ln_survival = u.ln() / count as f64;
        match *self {
            Strategy::Exponential { rate } => -ln_survival / rate,
            Strategy::HalfNormal { scale } => {
                let p = -ln_survival.exp_m1();
                let z = if p < 0.5 {
                    erf_inv(p)
                } else {
                    erfc_inv(ln_survival.exp())
                };
                scale * SQRT_2 * z
            }
        }
    }
}

/// Density of the minimum of `count` independent draws.
pub fn order_stat_density(strategy: &Strategy, count: usize, tau: f64) -> Result<f64> {
    if count == 0 {
        return Err(Error::invalid("order statistic needs at least one draw"));
    }
    if !(tau >= 0.0) {
        return Err(Error::domain(tau, "[0, inf)"));
    }
    let surv = 1.0 - strategy.cdf(tau);
    Ok(count as f64 * strategy.density(tau) * surv.powi(count as i32 - 1))
}

/// Per-round strategies. `ByRound` uses entry `(i - 1) mod len` in round `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum StrategyFamily {
    Fixed { strategy: Strategy },
    ByRound { strategies: Vec<Strategy> },
}

impl StrategyFamily {
    pub fn fixed(strategy: Strategy) -> Self {
        StrategyFamily::Fixed { strategy }
    }

    /// Strategy used in round `i` (1-based).
    pub fn round(&self, i: usize) -> &Strategy {
        match self {
            StrategyFamily::Fixed { strategy } => strategy,
            StrategyFamily::ByRound { strategies } => &strategies[(i - 1) % strategies.len()],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            StrategyFamily::Fixed { strategy } => strategy.validate(),
            StrategyFamily::ByRound { strategies } => {
                if strategies.is_empty() {
                    return Err(Error::invalid("by-round family needs at least one strategy"));
                }
                strategies.iter().try_for_each(Strategy::validate)
            }
        }
    }
}

/// Record of a seeded experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimRun<T> {
    pub seed: u64,
    pub replicates: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub outputs: T,
}

/// Wilson score interval for `successes` out of `trials` at 95%.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

fn check_replicates(replicates: usize) -> Result<()> {
    if replicates == 0 {
        Err(Error::invalid("replicates must be at least 1"))
    } else {
        Ok(())
    }
}

fn blocks(replicates: usize) -> Vec<std::ops::Range<usize>> {
    (0..replicates)
        .step_by(BLOCK)
        .map(|s| s..(s + BLOCK).min(replicates))
        .collect()
}

/// Sample mean and variance accumulator, merged in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: usize,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(&mut self, o: &Moments) {
        self.n += o.n;
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
    }

    fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    fn variance(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let m = self.mean();
        ((self.sum_sq - self.n as f64 * m * m) / (self.n - 1) as f64).max(0.0)
    }

    fn ci_half_width(&self) -> f64 {
        Z95 * (self.variance() / self.n as f64).sqrt()
    }
}

/// How round durations of the dynamic game are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundSampling {
    /// One exponential with the round rate `lambda_k`.
    #[default]
    RoundRate,
    /// Minimum of `N - k + 1` individual exponential waiting times.
    PlayerMinimum,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DynamicOutputs {
    pub times: Vec<f64>,
    pub mean_x: Vec<f64>,
    pub var_x: Vec<f64>,
    /// 95% half-width of `mean_x`.
    pub ci: Vec<f64>,
    /// `state_freq[j][i]`: fraction of replicates in state `i + 1` at `times[j]`.
    pub state_freq: Vec<Vec<f64>>,
    /// Sampled total durations (time of the last quit).
    pub duration_mean: f64,
    pub duration_ci: f64,
    /// `T_N` for comparison.
    pub duration_expected: f64,
    /// First round durations, kept for distribution checks (at most 4096).
    pub first_round: Vec<f64>,
}

const KEEP_FIRST_ROUND: usize = 4096;

/// Plays the dynamic game `replicates` times and records the quitting
/// fraction on the time grid `times`.
pub fn simulate_dynamic_game(
    spec: &PrizeSpec,
    seed: u64,
    replicates: usize,
    times: &[f64],
    sampling: RoundSampling,
) -> Result<SimRun<DynamicOutputs>> {
    check_replicates(replicates)?;
    if times.iter().any(|t| !(*t >= 0.0)) {
        return Err(Error::invalid("time grid must be non-negative"));
    }
    let n = spec.n();
    let rseq = ess_rates(spec);
    let rates = rseq.rates()[..n - 1].to_vec();

    struct Acc {
        counts: Vec<u64>,
        duration: Moments,
        first: Vec<f64>,
    }

    let run_block = |range: std::ops::Range<usize>| -> Acc {
        let mut acc = Acc {
            counts: vec![0; times.len() * n],
            duration: Moments::default(),
            first: Vec::new(),
        };
        let mut jumps = vec![0.0; n - 1];
        for rep in range {
            let mut rng = stream(seed, CHANNEL_DYNAMIC, rep as u64);
            let mut clock = 0.0;
            for (k, &rate) in rates.iter().enumerate() {
                let dt = match sampling {
                    RoundSampling::RoundRate => -open_uniform(&mut rng).ln() / rate,
                    RoundSampling::PlayerMinimum => {
                        let per_player = rate / (n - k) as f64;
                        (0..n - k)
                            .map(|_| -open_uniform(&mut rng).ln() / per_player)
                            .fold(f64::INFINITY, f64::min)
                    }
                };
                if k == 0 && rep < KEEP_FIRST_ROUND {
                    acc.first.push(dt);
                }
                clock += dt;
                jumps[k] = clock;
            }
            acc.duration.push(clock);
            for (j, &t) in times.iter().enumerate() {
                let quits = jumps.partition_point(|&s| s <= t);
                acc.counts[j * n + quits] += 1;
            }
        }
        acc
    };

    let parts: Vec<Acc> = blocks(replicates).into_par_iter().map(run_block).collect();
    let mut counts = vec![0u64; times.len() * n];
    let mut duration = Moments::default();
    let mut first_round = Vec::new();
    for p in &parts {
        for (c, x) in counts.iter_mut().zip(&p.counts) {
            *c += x;
        }
        duration.merge(&p.duration);
        first_round.extend_from_slice(&p.first);
    }

    let r = replicates as f64;
    let nf = n as f64;
    let mut mean_x = Vec::with_capacity(times.len());
    let mut var_x = Vec::with_capacity(times.len());
    let mut ci = Vec::with_capacity(times.len());
    let mut state_freq = Vec::with_capacity(times.len());
    for j in 0..times.len() {
        let row = &counts[j * n..(j + 1) * n];
        let freq: Vec<f64> = row.iter().map(|&c| c as f64 / r).collect();
        let m: f64 = freq.iter().enumerate().map(|(i, f)| i as f64 / nf * f).sum();
        let m2: f64 = freq
            .iter()
            .enumerate()
            .map(|(i, f)| (i as f64 / nf).powi(2) * f)
            .sum();
        let v = (m2 - m * m).max(0.0);
        mean_x.push(m);
        var_x.push(v);
        ci.push(Z95 * (v / r).sqrt());
        state_freq.push(freq);
    }
    Ok(SimRun {
        seed,
        replicates,
        n,
        outputs: DynamicOutputs {
            times: times.to_vec(),
            mean_x,
            var_x,
            ci,
            state_freq,
            duration_mean: duration.mean(),
            duration_ci: duration.ci_half_width(),
            duration_expected: expected_duration(spec),
            first_round,
        },
    })
}

/// Whether the two families of waiting-time distributions are sampled from
/// independent or identical random streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    #[default]
    Independent,
    Shared,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DurationComparisonRow {
    #[serde(rename = "N")]
    pub n: usize,
    /// Number of rounds summed, `floor(q N)`.
    pub rounds: usize,
    pub exceedance: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub mean_alpha: f64,
    pub mean_beta: f64,
    /// `sum_i Var(T_i)` estimated per round for the first family.
    pub var_sum_alpha: f64,
}

/// Setup of a two-family comparison of partial game durations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DurationComparison {
    pub alpha: StrategyFamily,
    pub beta: StrategyFamily,
    /// Fraction of rounds summed, in `(0, 1]`.
    pub q: f64,
    pub ns: Vec<usize>,
    pub delta: f64,
    #[serde(default)]
    pub coupling: Coupling,
}

/// For each `N`, the empirical `P{|S^a - S^b| >= delta}` where `S` sums the
/// first `floor(q N)` round durations and round `i` lasts the minimum of
/// `N - i + 1` draws from the family's round-`i` strategy.
pub fn compare_partial_durations(
    cfg: &DurationComparison,
    seed: u64,
    replicates: usize,
) -> Result<SimRun<Vec<DurationComparisonRow>>> {
    check_replicates(replicates)?;
    cfg.alpha.validate()?;
    cfg.beta.validate()?;
    if !(cfg.q > 0.0 && cfg.q <= 1.0) {
        return Err(Error::domain(cfg.q, "(0, 1]"));
    }
    if !(cfg.delta > 0.0) {
        return Err(Error::domain(cfg.delta, "(0, inf)"));
    }
    if cfg.ns.is_empty() || cfg.ns.iter().any(|&n| n < 2) {
        return Err(Error::invalid("N list must be non-empty with every N >= 2"));
    }
    let max_rounds = cfg
        .ns
        .iter()
        .map(|&n| (cfg.q * n as f64).floor() as usize)
        .max()
        .unwrap_or(0);
    for i in 1..=max_rounds {
        let (a, b) = (
            cfg.alpha.round(i).density_at_zero(),
            cfg.beta.round(i).density_at_zero(),
        );
        if (a - b).abs() > ZERO_MATCH_TOL {
            return Err(Error::MismatchedAtZero {
                round: i,
                alpha: a,
                beta: b,
            });
        }
    }
    let beta_channel = match cfg.coupling {
        Coupling::Independent => CHANNEL_BETA,
        Coupling::Shared => CHANNEL_ALPHA,
    };

    struct Acc {
        exceed: usize,
        a: Moments,
        b: Moments,
        per_round: Vec<Moments>,
    }

    let mut rows = Vec::with_capacity(cfg.ns.len());
    for (idx, &n) in cfg.ns.iter().enumerate() {
        let rounds = ((cfg.q * n as f64).floor() as usize).min(n - 1);
        // distinct stream key per N so sweeps do not reuse draws
        let key = seed ^ ((idx as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let sum_rounds = |family: &StrategyFamily, rng: &mut ChaCha12Rng, per: Option<&mut [Moments]>| {
            let mut total = 0.0;
            let mut per = per;
            for i in 1..=rounds {
                let t = family.round(i).sample_min(n - i + 1, open_uniform(rng));
                if let Some(p) = per.as_deref_mut() {
                    p[i - 1].push(t);
                }
                total += t;
            }
            total
        };
        let run_block = |range: std::ops::Range<usize>| -> Acc {
            let mut acc = Acc {
                exceed: 0,
                a: Moments::default(),
                b: Moments::default(),
                per_round: vec![Moments::default(); rounds],
            };
            for rep in range {
                let mut ra = stream(key, CHANNEL_ALPHA, rep as u64);
                let mut rb = stream(key, beta_channel, rep as u64);
                let sa = sum_rounds(&cfg.alpha, &mut ra, Some(&mut acc.per_round));
                let sb = sum_rounds(&cfg.beta, &mut rb, None);
                if (sa - sb).abs() >= cfg.delta {
                    acc.exceed += 1;
                }
                acc.a.push(sa);
                acc.b.push(sb);
            }
            acc
        };
        let parts: Vec<Acc> = blocks(replicates).into_par_iter().map(run_block).collect();
        let mut exceed = 0;
        let mut a = Moments::default();
        let mut b = Moments::default();
        let mut per_round = vec![Moments::default(); rounds];
        for p in &parts {
            exceed += p.exceed;
            a.merge(&p.a);
            b.merge(&p.b);
            for (x, y) in per_round.iter_mut().zip(&p.per_round) {
                x.merge(y);
            }
        }
        let (ci_lo, ci_hi) = wilson_interval(exceed, replicates);
        rows.push(DurationComparisonRow {
            n,
            rounds,
            exceedance: exceed as f64 / replicates as f64,
            ci_lo,
            ci_hi,
            mean_alpha: a.mean(),
            mean_beta: b.mean(),
            var_sum_alpha: per_round.iter().map(Moments::variance).sum(),
        });
    }
    Ok(SimRun {
        seed,
        replicates,
        n: cfg.ns.iter().copied().max().unwrap_or(0),
        outputs: rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaticOutputs {
    /// Mean payoff of the player finishing in position `k` (1-based index `k - 1`).
    pub rank_payoff: Vec<f64>,
    /// Mean payoff per player.
    pub mean_payoff: f64,
    pub ci: f64,
    /// Flat payoff `V_1` every quitting time earns against the equilibrium.
    pub indifference: f64,
}

/// Plays the one-shot game with every player drawing from `G_N`.
/// The `k`-th to quit receives `V_k` and pays its own time; the last player
/// receives `V_N` and pays the second-to-last quitting time.
pub fn sample_static_game(
    curve: &EssCurve,
    spec: &PrizeSpec,
    seed: u64,
    replicates: usize,
) -> Result<SimRun<StaticOutputs>> {
    check_replicates(replicates)?;
    if curve.n() != spec.n() {
        return Err(Error::invalid("curve and prize disagree on N"));
    }
    let n = spec.n();

    struct Acc {
        ranks: Vec<f64>,
        player: Moments,
    }

    let run_block = |range: std::ops::Range<usize>| -> Acc {
        let mut acc = Acc {
            ranks: vec![0.0; n],
            player: Moments::default(),
        };
        let mut draws: Vec<(f64, usize)> = Vec::with_capacity(n);
        for rep in range {
            let mut rng = stream(seed, CHANNEL_STATIC, rep as u64);
            draws.clear();
            draws.extend((0..n).map(|j| (curve.quantile(rng.random::<f64>()), j)));
            draws.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut total = 0.0;
            for k in 0..n {
                let pay = if k + 1 < n {
                    spec.v(k + 1) - draws[k].0
                } else {
                    spec.v(n) - draws[n - 2].0
                };
                acc.ranks[k] += pay;
                total += pay;
            }
            acc.player.push(total / n as f64);
        }
        acc
    };

    let parts: Vec<Acc> = blocks(replicates).into_par_iter().map(run_block).collect();
    let mut ranks = vec![0.0; n];
    let mut player = Moments::default();
    for p in &parts {
        for (r, x) in ranks.iter_mut().zip(&p.ranks) {
            *r += x;
        }
        player.merge(&p.player);
    }
    for r in ranks.iter_mut() {
        *r /= replicates as f64;
    }
    Ok(SimRun {
        seed,
        replicates,
        n,
        outputs: StaticOutputs {
            rank_payoff: ranks,
            mean_payoff: player.mean(),
            ci: player.ci_half_width(),
            indifference: spec.v(1),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_distinct_and_reproducible() {
        let a: f64 = stream(7, 1, 3).random();
        let b: f64 = stream(7, 1, 3).random();
        let c: f64 = stream(7, 2, 3).random();
        let d: f64 = stream(7, 1, 4).random();
        assert_eq!(a, b);
        assert!(a != c && a != d && c != d);
    }

    #[test]
    fn matched_half_normal() {
        let e = Strategy::Exponential { rate: 2.5 };
        let h = Strategy::half_normal_matching(2.5);
        assert!((e.density_at_zero() - h.density_at_zero()).abs() < 1e-15);
    }

    #[test]
    fn sample_min_inverts_the_min_cdf() {
        for s in [
            Strategy::Exponential { rate: 1.7 },
            Strategy::half_normal_matching(0.8),
        ] {
            for count in [1, 3, 400] {
                for u in [1e-9, 0.01, 0.3, 0.77, 0.999_999] {
                    let x = s.sample_min(count, u);
                    let surv = (1.0 - s.cdf(x)).powi(count as i32);
                    assert!((surv - u).abs() < 1e-9 * u.max(1e-3), "{s:?} n={count} u={u}");
                }
            }
        }
    }

    #[test]
    fn order_stat_density_examples() {
        let s = Strategy::Exponential { rate: 1.3 };
        for tau in [0.0, 0.4, 2.0] {
            assert_eq!(order_stat_density(&s, 1, tau).unwrap(), s.density(tau));
            let e5 = 5.0 * 1.3 * (-5.0 * 1.3 * tau).exp();
            assert!((order_stat_density(&s, 5, tau).unwrap() - e5).abs() < 1e-12);
        }
        let h = Strategy::HalfNormal { scale: 0.6 };
        let total = crate::numerics::quad::gauss_legendre_composite(
            |t| order_stat_density(&h, 7, t).unwrap(),
            0.0,
            10.0,
            400,
        );
        assert!((total - 1.0).abs() < 1e-8);
        assert!(order_stat_density(&h, 0, 0.1).is_err());
    }

    #[test]
    fn family_rounds_cycle() {
        let a = Strategy::Exponential { rate: 1.0 };
        let b = Strategy::half_normal_matching(1.0);
        let f = StrategyFamily::ByRound {
            strategies: vec![a, b],
        };
        assert_eq!(*f.round(1), a);
        assert_eq!(*f.round(2), b);
        assert_eq!(*f.round(5), a);
        assert!(StrategyFamily::ByRound { strategies: vec![] }.validate().is_err());
    }

    #[test]
    fn wilson_examples() {
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.03 && hi < 0.04);
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo + hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dynamic_single_replicate_is_deterministic() {
        let spec = PrizeSpec::power(1.0, 5).unwrap();
        let times = [0.1, 0.5];
        let a = simulate_dynamic_game(&spec, 3, 1, &times, RoundSampling::RoundRate).unwrap();
        let b = simulate_dynamic_game(&spec, 3, 1, &times, RoundSampling::RoundRate).unwrap();
        assert_eq!(a, b);
        assert!(simulate_dynamic_game(&spec, 3, 0, &times, RoundSampling::RoundRate).is_err());
    }

    #[test]
    fn mismatched_densities_are_rejected() {
        let cfg = DurationComparison {
            alpha: StrategyFamily::fixed(Strategy::Exponential { rate: 1.0 }),
            beta: StrategyFamily::fixed(Strategy::Exponential { rate: 1.1 }),
            q: 0.5,
            ns: vec![10],
            delta: 0.1,
            coupling: Coupling::Independent,
        };
        assert!(matches!(
            compare_partial_durations(&cfg, 1, 10),
            Err(Error::MismatchedAtZero { round: 1, .. })
        ));
    }

    #[test]
    fn identical_families_on_shared_streams_never_differ() {
        let s = StrategyFamily::fixed(Strategy::half_normal_matching(1.0));
        let cfg = DurationComparison {
            alpha: s.clone(),
            beta: s,
            q: 0.5,
            ns: vec![20, 80],
            delta: 1e-12,
            coupling: Coupling::Shared,
        };
        let run = compare_partial_durations(&cfg, 9, 500).unwrap();
        assert!(run.outputs.iter().all(|r| r.exceedance == 0.0));
    }
}
