//! The dynamic (re-randomising) N-player game as a pure-birth Markov chain.
//!
//! Round `k` ends after an exponential time with rate
//! `lambda_k = (N-k+1) / ((N-k)(V_{k+1} - V_k))`, so the number of players
//! who have quit is a pure-birth chain on states `1..=N` (state `i` means
//! `i-1` players are out) with `lambda_N = 0`.
//!
//! State probabilities and transition matrices have partial-fraction closed
//! forms, but those sum terms of alternating sign whose magnitudes grow
//! combinatorially with `N`. They are used for `N <= CLOSED_FORM_MAX_N` with
//! well separated rates; otherwise (or when the closed form fails its own
//! sanity check) the Kolmogorov forward equations are integrated directly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::ode::{DormandPrince, OdeSystem};
use crate::numerics::{min_relative_gap, pairwise_sum, SignedLog};
use crate::prize::PrizeSpec;

/// Largest `N` for which partial-fraction formulas are attempted.
pub const CLOSED_FORM_MAX_N: usize = 40;
/// Rates closer than this (relative) are treated as coincident.
pub const MIN_RELATIVE_GAP: f64 = 1e-9;
/// Negative rounding noise up to this size is clamped to zero.
pub const NEGATIVE_CLAMP: f64 = 1e-12;
/// Relative tolerance of the forward-equation integrator.
pub const KOLMOGOROV_RTOL: f64 = 1e-10;

/// Holding rates `lambda_1, ..., lambda_N` of the birth chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateSequence {
    rates: Vec<f64>,
    min_gap: f64,
}

impl RateSequence {
    /// Builds a chain from `lambda_1..lambda_{N-1}`; `lambda_N = 0` is appended.
    pub fn from_rates(active: &[f64]) -> Result<Self> {
        if active.is_empty() {
            return Err(Error::invalid("a birth chain needs at least one positive rate"));
        }
        if let Some(bad) = active.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::invalid(format!("rates must be positive and finite, got {bad}")));
        }
        let mut rates = active.to_vec();
        rates.push(0.0);
        let min_gap = min_relative_gap(&rates);
        Ok(Self { rates, min_gap })
    }

    /// Number of states `N`.
    pub fn n(&self) -> usize {
        self.rates.len()
    }

    /// All `N` rates, the last being zero.
    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// `lambda_k`, 1-based.
    pub fn rate(&self, k: usize) -> f64 {
        self.rates[k - 1]
    }

    pub fn min_relative_gap(&self) -> f64 {
        self.min_gap
    }

    /// Whether the rates are pairwise distinct in the sense required by the
    /// closed forms. `false` is the "DegenerateRates" flag.
    pub fn is_distinct(&self) -> bool {
        self.min_gap > MIN_RELATIVE_GAP
    }

    fn closed_form_ok(&self) -> bool {
        self.n() <= CLOSED_FORM_MAX_N && self.is_distinct()
    }

    /// The chain restricted to states `from..=N` (1-based).
    fn tail(&self, from: usize) -> Option<RateSequence> {
        if from >= self.n() {
            return None;
        }
        let rates = self.rates[from - 1..].to_vec();
        let min_gap = min_relative_gap(&rates);
        Some(RateSequence { rates, min_gap })
    }
}

/// The ESS round rates for a prize sequence.
pub fn ess_rates(spec: &PrizeSpec) -> RateSequence {
    let n = spec.n();
    let active: Vec<f64> = (1..n)
        .map(|k| (n - k + 1) as f64 / ((n - k) as f64 * (spec.v(k + 1) - spec.v(k))))
        .collect();
    let rseq = RateSequence::from_rates(&active).expect("valid prize gives positive rates");
    if !rseq.is_distinct() {
        log::debug!(
            "ESS rates for N = {n} are degenerate (gap {:e}); closed forms disabled",
            rseq.min_gap
        );
    }
    rseq
}

/// Density of a sum of independent exponentials with distinct rates
/// (the hypoexponential density) at `t`.
pub fn hypoexp_density(rates: &[f64], t: f64) -> Result<f64> {
    if rates.is_empty() || rates.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(Error::invalid("hypoexponential rates must be positive"));
    }
    if !(t >= 0.0) {
        return Err(Error::domain(t, "[0, inf)"));
    }
    let gap = min_relative_gap(rates);
    if gap <= MIN_RELATIVE_GAP {
        return Err(Error::DegenerateRates { gap });
    }
    let numer = rates
        .iter()
        .fold(SignedLog::ONE, |acc, &r| acc.times(r));
    let terms: Vec<f64> = rates
        .iter()
        .enumerate()
        .map(|(l, &rl)| {
            let coef = rates
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != l)
                .fold(numer, |acc, (_, &rk)| acc.over(rk - rl));
            coef.times_exp(-rl * t)
        })
        .collect();
    clamp_nonnegative(pairwise_sum(&terms), "hypoexponential density")
}

fn clamp_nonnegative(v: f64, what: &str) -> Result<f64> {
    if v >= 0.0 {
        Ok(v)
    } else if v >= -NEGATIVE_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::NumericalFailure(format!("{what} evaluated to {v:e}")))
    }
}

/// How a quantity was (or should be) computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Partial fractions / explicit eigen-decomposition.
    ClosedForm,
    /// Adaptive integration of the Kolmogorov forward equations.
    Kolmogorov,
}

/// `p_i(t) = P{X(t) = (i-1)/N}` for `i = 1..=N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateDistribution {
    pub t: f64,
    pub probs: Vec<f64>,
    pub method: Method,
}

impl StateDistribution {
    pub fn n(&self) -> usize {
        self.probs.len()
    }

    /// `E[X(t)] = sum_i (i/N) p_{i+1}(t)`.
    pub fn mean(&self) -> f64 {
        let n = self.n() as f64;
        self.probs
            .iter()
            .enumerate()
            .map(|(i, p)| i as f64 / n * p)
            .sum()
    }

    /// `Var(X(t))`, clamped at zero.
    pub fn variance(&self) -> f64 {
        let n = self.n() as f64;
        let m2: f64 = self
            .probs
            .iter()
            .enumerate()
            .map(|(i, p)| (i as f64 / n).powi(2) * p)
            .sum();
        (m2 - self.mean().powi(2)).max(0.0)
    }
}

struct ForwardEquations<'a> {
    rates: &'a [f64],
}

impl OdeSystem for ForwardEquations<'_> {
    fn dim(&self) -> usize {
        self.rates.len()
    }

    fn rhs(&self, _t: f64, p: &[f64], dp: &mut [f64]) {
        dp[0] = -self.rates[0] * p[0];
        for i in 1..p.len() {
            dp[i] = self.rates[i - 1] * p[i - 1] - self.rates[i] * p[i];
        }
    }
}

/// State probabilities at `t`, choosing closed form or integration
/// automatically.
pub fn state_probs(rseq: &RateSequence, t: f64) -> StateDistribution {
    state_probs_series(rseq, &[t]).pop().expect("one time point")
}

/// State probabilities at every time in `times` (sorted ascending). One
/// forward integration covers the whole grid when integration is needed.
pub fn state_probs_series(rseq: &RateSequence, times: &[f64]) -> Vec<StateDistribution> {
    assert!(
        times.iter().all(|t| *t >= 0.0) && times.windows(2).all(|w| w[0] <= w[1]),
        "time grid must be non-negative and sorted"
    );
    if rseq.closed_form_ok() {
        let closed: Option<Vec<_>> = times
            .iter()
            .map(|&t| state_probs_closed(rseq, t).ok())
            .collect();
        if let Some(v) = closed {
            return v;
        }
        log::debug!("closed-form state probabilities failed sanity check; integrating");
    }
    state_probs_kolmogorov(rseq, times).expect("forward equations integrate for positive rates")
}

/// Partial-fraction state probabilities. Fails with `DegenerateRates` when
/// the rates are too close, and `NumericalFailure` when cancellation makes
/// the result visibly wrong (negative mass or mass not summing to one).
pub fn state_probs_closed(rseq: &RateSequence, t: f64) -> Result<StateDistribution> {
    if !rseq.is_distinct() {
        return Err(Error::DegenerateRates { gap: rseq.min_gap });
    }
    let probs = closed_form_row(rseq.rates(), t)?;
    Ok(StateDistribution {
        t,
        probs,
        method: Method::ClosedForm,
    })
}

/// Row 1 of `P(t)` for the chain with the given rates, by partial fractions.
fn closed_form_row(rates: &[f64], t: f64) -> Result<Vec<f64>> {
    let n = rates.len();
    if t == 0.0 {
        let mut probs = vec![0.0; n];
        probs[0] = 1.0;
        return Ok(probs);
    }
    // denom[l] accumulates prod_{k <= i, k != l} (lambda_k - lambda_l)
    let mut denom: Vec<SignedLog> = vec![SignedLog::ONE; n];
    let mut numer = SignedLog::ONE; // prod_{k < i} lambda_k
    let mut probs = Vec::with_capacity(n);
    for i in 0..n {
        // add lambda_i to the denominators of earlier terms, and build the new one
        for l in 0..i {
            denom[l] = denom[l].times(rates[i] - rates[l]);
        }
        denom[i] = (0..i).fold(SignedLog::ONE, |acc, k| acc.times(rates[k] - rates[i]));
        let terms: Vec<f64> = (0..=i)
            .map(|l| {
                let c = SignedLog {
                    ln_abs: numer.ln_abs - denom[l].ln_abs,
                    negative: numer.negative ^ denom[l].negative,
                };
                c.times_exp(-rates[l] * t)
            })
            .collect();
        probs.push(pairwise_sum(&terms));
        numer = numer.times(rates[i]);
    }
    sanitize_distribution(&mut probs)?;
    Ok(probs)
}

fn sanitize_distribution(probs: &mut [f64]) -> Result<()> {
    for p in probs.iter_mut() {
        if !p.is_finite() {
            return Err(Error::NumericalFailure("non-finite state probability".into()));
        }
        *p = clamp_nonnegative(*p, "state probability")?;
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::NumericalFailure(format!(
            "state probabilities sum to {total}"
        )));
    }
    Ok(())
}

/// State probabilities by integrating the forward equations.
pub fn state_probs_kolmogorov(rseq: &RateSequence, times: &[f64]) -> Result<Vec<StateDistribution>> {
    let sys = ForwardEquations {
        rates: rseq.rates(),
    };
    let mut p0 = vec![0.0; rseq.n()];
    p0[0] = 1.0;
    let solver = DormandPrince {
        rtol: KOLMOGOROV_RTOL,
        atol: 1e-15,
        ..DormandPrince::default()
    };
    let states = solver.integrate_to(&sys, 0.0, &p0, times)?;
    Ok(times
        .iter()
        .zip(states)
        .map(|(&t, mut probs)| {
            for p in probs.iter_mut() {
                if *p < 0.0 && *p >= -1e-9 {
                    *p = 0.0;
                }
            }
            StateDistribution {
                t,
                probs,
                method: Method::Kolmogorov,
            }
        })
        .collect())
}

/// `E[X(t)]`.
pub fn expectation_x(rseq: &RateSequence, t: f64) -> f64 {
    state_probs(rseq, t).mean()
}

/// `Var(X(t))`.
pub fn variance_x(rseq: &RateSequence, t: f64) -> f64 {
    state_probs(rseq, t).variance()
}

/// Split expectation of `V(X(t))` at the `(1 - epsilon)` quantile of the
/// state space: `(sum_{i <= floor((1-eps)N)}, sum_{i > floor((1-eps)N)})` of
/// `V(i/N) p_{i+1}(t)`, with `i` running over `1..=N-1`.
pub fn expectation_v_x(
    rseq: &RateSequence,
    spec: &PrizeSpec,
    t: f64,
    epsilon: f64,
) -> Result<(f64, f64)> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain(epsilon, "(0, 1)"));
    }
    if spec.n() != rseq.n() {
        return Err(Error::invalid("prize and rate sequence disagree on N"));
    }
    let dist = state_probs(rseq, t);
    Ok(split_expectation(&dist, spec, epsilon))
}

pub(crate) fn split_expectation(dist: &StateDistribution, spec: &PrizeSpec, epsilon: f64) -> (f64, f64) {
    let n = spec.n();
    let cut = ((1.0 - epsilon) * n as f64).floor() as usize;
    let mut lower = 0.0;
    let mut upper = 0.0;
    for i in 1..n {
        let term = spec.v(i) * dist.probs[i];
        if i <= cut {
            lower += term;
        } else {
            upper += term;
        }
    }
    (lower, upper)
}

/// Expected duration `T_N = sum_k (N-k)/(N-k+1) (V_{k+1} - V_k)` of the
/// dynamic game.
pub fn expected_duration(spec: &PrizeSpec) -> f64 {
    let n = spec.n();
    (1..n)
        .map(|k| (n - k) as f64 / (n - k + 1) as f64 * (spec.v(k + 1) - spec.v(k)))
        .sum()
}

/// Row-major `N x N` transition matrix `P(t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionMatrix {
    pub t: f64,
    pub n: usize,
    pub entries: Vec<f64>,
    pub method: Method,
}

impl TransitionMatrix {
    /// Entry `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    /// Row `i`, 1-based.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[(i - 1) * self.n..i * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.n)
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &TransitionMatrix) -> TransitionMatrix {
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for k in i..n {
                let a = self.entries[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in k..n {
                    entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        TransitionMatrix {
            t: self.t + other.t,
            n,
            entries,
            method: self.method,
        }
    }
}

/// Right eigenvector matrix of the generator, columns `v_1..v_N`:
/// `V_{ij} = prod_{k=i}^{j-1} lambda_k / prod_{k=i}^{j-1} (lambda_k - lambda_j)`
/// for `i <= j`.
pub fn eigenvector_matrix(rseq: &RateSequence) -> Result<Vec<Vec<f64>>> {
    if !rseq.is_distinct() {
        return Err(Error::DegenerateRates { gap: rseq.min_gap });
    }
    let lam = rseq.rates();
    let n = lam.len();
    let mut v = vec![vec![0.0; n]; n];
    for i in 0..n {
        v[i][i] = 1.0;
        for j in i + 1..n {
            let c = (i..j).fold(SignedLog::ONE, |acc, k| acc.times(lam[k]).over(lam[k] - lam[j]));
            v[i][j] = c.to_f64();
        }
    }
    Ok(v)
}

/// `V^{-1}`, equal to the coefficient matrix `a_{ij}` of `A(t) = V^{-1} P(t)`:
/// `a_{ij} = (-1)^{i+j} prod_{k=i}^{j-1} lambda_k / prod_{k=i+1}^{j} (lambda_i - lambda_k)`.
pub fn eigenvector_inverse(rseq: &RateSequence) -> Result<Vec<Vec<f64>>> {
    if !rseq.is_distinct() {
        return Err(Error::DegenerateRates { gap: rseq.min_gap });
    }
    Ok(coefficient_matrix_log(rseq.rates())
        .into_iter()
        .map(|row| row.into_iter().map(SignedLog::to_f64).collect())
        .collect())
}

fn coefficient_matrix_log(lam: &[f64]) -> Vec<Vec<SignedLog>> {
    let n = lam.len();
    let zero = SignedLog {
        ln_abs: f64::NEG_INFINITY,
        negative: false,
    };
    let mut a = vec![vec![zero; n]; n];
    for i in 0..n {
        a[i][i] = SignedLog::ONE;
        let mut acc = SignedLog::ONE;
        for j in i + 1..n {
            // extend prod lambda_k (k < j) and prod (lambda_i - lambda_k) (k <= j)
            acc = acc.times(lam[j - 1]).over(lam[i] - lam[j]);
            let sign_flip = (i + j) % 2 == 1;
            a[i][j] = SignedLog {
                ln_abs: acc.ln_abs,
                negative: acc.negative ^ sign_flip,
            };
        }
    }
    a
}

/// `P(t)`: explicit `V A(t)` for small well-separated chains, forward
/// integration of each row otherwise.
pub fn transition_matrix(rseq: &RateSequence, t: f64) -> TransitionMatrix {
    if rseq.closed_form_ok() {
        if let Ok(m) = transition_matrix_closed(rseq, t) {
            return m;
        }
        log::debug!("closed-form transition matrix failed sanity check; integrating");
    }
    transition_matrix_kolmogorov(rseq, t).expect("forward equations integrate for positive rates")
}

/// `P(t) = V A(t)` with `A(t)_{ij} = a_{ij} e^{-lambda_i t}`.
pub fn transition_matrix_closed(rseq: &RateSequence, t: f64) -> Result<TransitionMatrix> {
    let v = eigenvector_matrix(rseq)?;
    let lam = rseq.rates();
    let a = coefficient_matrix_log(lam);
    let n = lam.len();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let terms: Vec<f64> = (i..=j)
                .map(|m| {
                    let vm = SignedLog::from_f64(v[i][m]);
                    SignedLog {
                        ln_abs: vm.ln_abs + a[m][j].ln_abs,
                        negative: vm.negative ^ a[m][j].negative,
                    }
                    .times_exp(-lam[m] * t)
                })
                .collect();
            entries[i * n + j] = pairwise_sum(&terms);
        }
        sanitize_distribution(&mut entries[i * n..(i + 1) * n])?;
    }
    Ok(TransitionMatrix {
        t,
        n,
        entries,
        method: Method::ClosedForm,
    })
}

/// `P(t)` row by row: row `i` is the distribution at `t` of the chain
/// started in state `i`.
pub fn transition_matrix_kolmogorov(rseq: &RateSequence, t: f64) -> Result<TransitionMatrix> {
    let n = rseq.n();
    let mut entries = vec![0.0; n * n];
    for i in 1..=n {
        let row = &mut entries[(i - 1) * n..i * n];
        match rseq.tail(i) {
            Some(sub) => {
                let dist = state_probs_kolmogorov(&sub, &[t])?.remove(0);
                row[i - 1..].copy_from_slice(&dist.probs);
            }
            None => row[n - 1] = 1.0,
        }
    }
    Ok(TransitionMatrix {
        t,
        n,
        entries,
        method: Method::Kolmogorov,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prize::PrizeSpec;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn rates_two_players() {
        let spec = PrizeSpec::new(
            crate::prize::PrizeKind::Table {
                knots: vec![[0.0, 0.0], [0.5, 0.5], [1.0, 1.0]],
            },
            2,
        )
        .unwrap();
        let r = ess_rates(&spec);
        assert_close(r.rate(1), 4.0, 1e-12);
        assert_eq!(r.rate(2), 0.0);
    }

    #[test]
    fn rates_three_players_linear() {
        let r = ess_rates(&PrizeSpec::power(1.0, 3).unwrap());
        assert_close(r.rate(1), 4.5, 1e-12);
        assert_close(r.rate(2), 6.0, 1e-12);
        assert_eq!(r.rate(3), 0.0);
        assert!(r.is_distinct());
    }

    #[test]
    fn last_rate_is_always_zero() {
        for n in [2, 5, 50] {
            let r = ess_rates(&PrizeSpec::power(0.7, n).unwrap());
            assert_eq!(r.rates()[n - 1], 0.0);
            assert!(r.rates()[..n - 1].iter().all(|x| *x > 0.0));
        }
    }

    #[test]
    fn degenerate_rates_are_flagged() {
        let r = RateSequence::from_rates(&[2.0, 2.0 * (1.0 + 1e-12), 3.0]).unwrap();
        assert!(!r.is_distinct());
        assert!(matches!(
            state_probs_closed(&r, 0.5),
            Err(Error::DegenerateRates { .. })
        ));
        // automatic path still works
        let d = state_probs(&r, 0.5);
        assert_eq!(d.method, Method::Kolmogorov);
        assert_close(d.probs.iter().sum::<f64>(), 1.0, 1e-10);
        assert!(matches!(
            hypoexp_density(&[1.0, 1.0], 0.3),
            Err(Error::DegenerateRates { .. })
        ));
    }

    #[test]
    fn hypoexp_single_and_pair() {
        assert_close(hypoexp_density(&[2.0], 0.5).unwrap(), 2.0 * (-1.0f64).exp(), 1e-15);
        for &t in &[0.0f64, 0.1, 0.7, 2.5, 9.0] {
            let exact = 2.0 * (-t).exp() - 2.0 * (-2.0 * t).exp();
            assert_close(hypoexp_density(&[1.0, 2.0], t).unwrap(), exact, 1e-14);
        }
    }

    #[test]
    fn hypoexp_pair_against_convolution_quadrature() {
        // oracle: int_0^t f1(s) f2(t-s) ds by composite Simpson
        let (a, b) = (1.3, 0.4);
        for &t in &[0.2, 1.0, 3.0] {
            let m = 2000;
            let h = t / m as f64;
            let ys: Vec<f64> = (0..=m)
                .map(|i| {
                    let s = i as f64 * h;
                    a * (-a * s).exp() * b * (-b * (t - s)).exp()
                })
                .collect();
            let conv = crate::numerics::quad::simpson(&ys, h);
            assert_close(hypoexp_density(&[a, b], t).unwrap(), conv, 1e-12);
        }
    }

    #[test]
    fn hypoexp_integrates_to_one() {
        let rates: Vec<f64> = (0..12).map(|i| 0.6 + 0.8 * i as f64).collect();
        let total = crate::numerics::quad::gauss_legendre_composite(
            |t| hypoexp_density(&rates, t).unwrap(),
            0.0,
            80.0,
            800,
        );
        assert_close(total, 1.0, 1e-8);
    }

    #[test]
    fn initial_distribution() {
        let r = ess_rates(&PrizeSpec::power(2.0, 12).unwrap());
        let d = state_probs(&r, 0.0);
        assert_eq!(d.probs[0], 1.0);
        assert!(d.probs[1..].iter().all(|p| *p == 0.0));
        assert_eq!(d.mean(), 0.0);
        assert_eq!(d.variance(), 0.0);
    }

    #[test]
    fn absorbs_in_last_state() {
        let spec = PrizeSpec::power(1.0, 10).unwrap();
        let r = ess_rates(&spec);
        let d = state_probs(&r, 20.0);
        assert!(d.probs[9] > 1.0 - 1e-9);
        assert_close(d.mean(), 0.9, 1e-9);
    }

    #[test]
    fn closed_form_agrees_with_integration() {
        for (alpha, n) in [(1.0, 3), (2.0, 10), (0.5, 25), (2.0, 25), (1.5, 40)] {
            let r = ess_rates(&PrizeSpec::power(alpha, n).unwrap());
            let times = [0.0, 0.05, 0.3, 0.8, 1.5];
            let ode = state_probs_kolmogorov(&r, &times).unwrap();
            for (&t, o) in times.iter().zip(&ode) {
                match state_probs_closed(&r, t) {
                    Ok(c) => {
                        for (a, b) in c.probs.iter().zip(&o.probs) {
                            assert_close(*a, *b, 1e-9);
                        }
                    }
                    // cancellation is allowed to be detected, never silent
                    Err(e) => {
                        assert!(n > 3, "closed form failed at N = {n}: {e}");
                        eprintln!("alpha = {alpha}, N = {n}, t = {t}: {e}");
                    }
                }
            }
        }
    }

    #[test]
    fn large_n_uses_integration() {
        let r = ess_rates(&PrizeSpec::power(2.0, 200).unwrap());
        let d = state_probs(&r, 0.25);
        assert_eq!(d.method, Method::Kolmogorov);
        assert!((d.mean() - 0.5).abs() < 0.05);
    }

    #[test]
    fn split_expectation_for_linear_prize() {
        let spec = PrizeSpec::power(1.0, 200).unwrap();
        let r = ess_rates(&spec);
        let (lower, upper) = expectation_v_x(&r, &spec, 0.5, 0.1).unwrap();
        assert!((lower - 0.5).abs() < 0.05, "lower = {lower}");
        assert!(upper < 1e-6);
        let (l0, u0) = expectation_v_x(&r, &spec, 0.0, 0.1).unwrap();
        assert_eq!((l0, u0), (0.0, 0.0));
        assert!(expectation_v_x(&r, &spec, 0.5, 1.0).is_err());
    }

    #[test]
    fn split_parts_partition_the_expectation() {
        let spec = PrizeSpec::power(0.8, 30).unwrap();
        let r = ess_rates(&spec);
        for &eps in &[0.1, 0.5, 0.9] {
            let d = state_probs(&r, 0.6);
            let (l, u) = split_expectation(&d, &spec, eps);
            let full: f64 = (1..30).map(|i| spec.v(i) * d.probs[i]).sum();
            assert_close(l + u, full, 1e-14);
        }
    }

    #[test]
    fn duration_examples() {
        assert_close(expected_duration(&PrizeSpec::power(1.0, 2).unwrap()), 0.25, 1e-15);
        for n in [3, 10, 50] {
            let spec = PrizeSpec::power(1.3, n).unwrap();
            let bound = spec.v_max() - spec.v(1) + (spec.v(2) - spec.v(1));
            assert!(expected_duration(&spec) < bound);
        }
    }

    #[test]
    fn transition_matrix_at_zero_is_identity() {
        let r = RateSequence::from_rates(&[1.0, 2.5, 0.7, 4.0]).unwrap();
        let p = transition_matrix(&r, 0.0);
        for i in 1..=5 {
            for j in 1..=5 {
                assert_close(p.get(i, j), if i == j { 1.0 } else { 0.0 }, 1e-14);
            }
        }
    }

    #[test]
    fn eigen_decomposition_is_consistent() {
        let r = RateSequence::from_rates(&[1.0, 2.5, 0.7, 4.0, 1.9]).unwrap();
        let v = eigenvector_matrix(&r).unwrap();
        let vinv = eigenvector_inverse(&r).unwrap();
        let n = r.n();
        let lam = r.rates();
        for i in 0..n {
            for j in 0..n {
                let prod: f64 = (0..n).map(|k| v[i][k] * vinv[k][j]).sum();
                assert_close(prod, if i == j { 1.0 } else { 0.0 }, 1e-12);
            }
        }
        // Q v_j = -lambda_j v_j
        for j in 0..n {
            for i in 0..n {
                let qv = -lam[i] * v[i][j] + if i + 1 < n { lam[i] * v[i + 1][j] } else { 0.0 };
                assert_close(qv, -lam[j] * v[i][j], 1e-12);
            }
        }
    }

    #[test]
    fn first_row_of_matrix_is_state_distribution() {
        let r = ess_rates(&PrizeSpec::power(1.7, 8).unwrap());
        for &t in &[0.1, 0.4, 1.1] {
            let p = transition_matrix(&r, t);
            let d = state_probs(&r, t);
            for (a, b) in p.row(1).iter().zip(&d.probs) {
                assert_close(*a, *b, 1e-9);
            }
        }
    }

    #[test]
    fn matrix_paths_agree() {
        let r = RateSequence::from_rates(&[3.0, 1.0, 2.2, 0.6, 5.0]).unwrap();
        let a = transition_matrix_closed(&r, 0.37).unwrap();
        let b = transition_matrix_kolmogorov(&r, 0.37).unwrap();
        for (x, y) in a.entries.iter().zip(&b.entries) {
            assert_close(*x, *y, 1e-9);
        }
    }
}
