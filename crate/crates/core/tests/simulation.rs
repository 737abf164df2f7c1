//! Monte Carlo outputs against exact values.

use attrition::dynamic::{ess_rates, state_probs};
use attrition::simulate::{
    order_stat_density, sample_static_game, simulate_dynamic_game, stream, compare_partial_durations,
    Coupling, RoundSampling, Strategy, StrategyFamily, DurationComparison,
};
use attrition::static_model::{EssCurve, EssOptions};
use attrition::PrizeSpec;
use rand::Rng;

/// Kolmogorov-Smirnov distance between a sample and a cdf.
fn ks(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn state_frequencies_match_probabilities() {
    let spec = PrizeSpec::power(2.0, 6).unwrap();
    let times = [0.1, 0.4, 0.8];
    let reps = 40_000;
    let run = simulate_dynamic_game(&spec, 5, reps, &times, RoundSampling::PlayerMinimum).unwrap();
    let rseq = ess_rates(&spec);
    for (j, &t) in times.iter().enumerate() {
        let exact = state_probs(&rseq, t);
        for (f, p) in run.outputs.state_freq[j].iter().zip(&exact.probs) {
            let sd = (p * (1.0 - p) / reps as f64).sqrt();
            assert!((f - p).abs() <= 4.0 * sd + 1e-12, "t={t}: {f} vs {p}");
        }
    }
}

#[test]
fn two_player_first_round_is_exponential_with_round_rate() {
    let spec = PrizeSpec::power(1.0, 2).unwrap();
    let lambda = ess_rates(&spec).rate(1);
    for sampling in [RoundSampling::RoundRate, RoundSampling::PlayerMinimum] {
        let run = simulate_dynamic_game(&spec, 8, 4096, &[0.0], sampling).unwrap();
        let d = ks(run.outputs.first_round.clone(), |x| 1.0 - (-lambda * x).exp());
        assert!(d < 1.63 / 4096f64.sqrt(), "{sampling:?}: KS {d}");
    }
}

#[test]
fn quantile_sampling_reproduces_ess_cdf() {
    let spec = PrizeSpec::power(1.5, 15).unwrap();
    let curve = EssCurve::solve(&spec, &EssOptions::default()).unwrap();
    let mut rng = stream(77, 9, 0);
    let xs: Vec<f64> = (0..100_000).map(|_| curve.quantile(rng.random::<f64>())).collect();
    let d = ks(xs, |x| curve.cdf_at(x.min(curve.t_max)));
    assert!(d <= 0.01, "KS {d}");
}

#[test]
fn static_game_mean_payoff_is_smallest_prize() {
    for alpha in [0.5, 2.0] {
        let spec = PrizeSpec::power(alpha, 7).unwrap();
        let curve = EssCurve::solve(&spec, &EssOptions::default()).unwrap();
        let o = sample_static_game(&curve, &spec, 21, 100_000).unwrap().outputs;
        assert!(
            (o.mean_payoff - o.indifference).abs() <= o.ci * 2.575_829 / 1.959_964,
            "alpha={alpha}: {} vs {} +- {}",
            o.mean_payoff,
            o.indifference,
            o.ci
        );
        assert_eq!(o.indifference, spec.v(1));
    }
}

#[test]
fn interval_halves_when_replicates_quadruple() {
    let spec = PrizeSpec::power(1.0, 10).unwrap();
    let small = simulate_dynamic_game(&spec, 3, 10_000, &[0.5], RoundSampling::RoundRate).unwrap();
    let large = simulate_dynamic_game(&spec, 3, 40_000, &[0.5], RoundSampling::RoundRate).unwrap();
    let ratio = large.outputs.ci[0] / small.outputs.ci[0];
    assert!((ratio - 0.5).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn exceedance_shrinks_with_players() {
    let cfg = DurationComparison {
        alpha: StrategyFamily::fixed(Strategy::Exponential { rate: 2.0 }),
        beta: StrategyFamily::fixed(Strategy::half_normal_matching(2.0)),
        q: 0.5,
        ns: vec![50, 200, 800],
        delta: 0.1,
        coupling: Coupling::Independent,
    };
    let rows = compare_partial_durations(&cfg, 4, 1000).unwrap().outputs;
    assert!(rows.windows(2).all(|w| w[1].exceedance < w[0].exceedance));
    assert!(rows.iter().all(|r| r.rounds == r.n / 2));
}

#[test]
fn mismatched_densities_at_zero_are_rejected() {
    let cfg = DurationComparison {
        alpha: StrategyFamily::fixed(Strategy::Exponential { rate: 1.0 }),
        beta: StrategyFamily::fixed(Strategy::half_normal_matching(1.5)),
        q: 0.5,
        ns: vec![20],
        delta: 0.1,
        coupling: Coupling::Shared,
    };
    assert!(compare_partial_durations(&cfg, 1, 10).is_err());
}

#[test]
fn order_statistic_density_integrates_to_one() {
    let s = Strategy::half_normal_matching(1.0);
    let h = 1e-3;
    let total: f64 = (0..20_000)
        .map(|i| order_stat_density(&s, 5, (i as f64 + 0.5) * h).unwrap() * h)
        .sum();
    assert!((total - 1.0).abs() < 1e-6);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let spec = PrizeSpec::power(1.0, 12).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| simulate_dynamic_game(&spec, 17, 5000, &[0.3, 0.9], RoundSampling::RoundRate).unwrap())
    };
    assert_eq!(run(1).outputs, run(3).outputs);
}

#[test]
fn last_player_pays_the_previous_quitting_time() {
    // with two players both pay the first quitting time, so the rank
    // payoffs differ by exactly V_2 - V_1 in every replicate
    let spec = PrizeSpec::power(2.0, 2).unwrap();
    let curve = EssCurve::solve(&spec, &EssOptions::default()).unwrap();
    let o = sample_static_game(&curve, &spec, 6, 5000).unwrap().outputs;
    let gap = o.rank_payoff[1] - o.rank_payoff[0];
    assert!((gap - (spec.v(2) - spec.v(1))).abs() < 1e-12, "{gap}");
}

#[test]
fn summed_round_variances_stay_bounded() {
    let cfg = DurationComparison {
        alpha: StrategyFamily::fixed(Strategy::Exponential { rate: 1.0 }),
        beta: StrategyFamily::fixed(Strategy::half_normal_matching(1.0)),
        q: 0.5,
        ns: vec![50, 200, 800, 3200],
        delta: 0.1,
        coupling: Coupling::Independent,
    };
    let rows = compare_partial_durations(&cfg, 10, 2000).unwrap().outputs;
    // the k-th round (counting from the largest pool) has variance about 1/(N-k+1)^2
    for r in &rows {
        let bound: f64 = (1..=r.rounds).map(|k| 1.0 / ((r.n - k + 1) as f64).powi(2)).sum();
        assert!(r.var_sum_alpha < 1.5 * bound + 1e-3, "N={}: {}", r.n, r.var_sum_alpha);
    }
    assert!(rows.last().unwrap().var_sum_alpha < rows[0].var_sum_alpha);
}
