//! Library results against independent computations.

use attrition::dynamic::{
    ess_rates, expected_duration, state_probs, state_probs_closed, state_probs_kolmogorov,
    transition_matrix, RateSequence,
};
use attrition::static_model::{gamma_sum, EssCurve, EssOptions};
use attrition::PrizeSpec;
use nalgebra::DMatrix;

fn generator(rseq: &RateSequence) -> DMatrix<f64> {
    let n = rseq.n();
    let mut q = DMatrix::zeros(n, n);
    for i in 0..n - 1 {
        q[(i, i)] = -rseq.rates()[i];
        q[(i, i + 1)] = rseq.rates()[i];
    }
    q
}

#[test]
fn ess_transition_matrix_matches_expm() {
    for alpha in [0.5, 1.0, 2.0] {
        for n in [3, 6, 12] {
            let rseq = ess_rates(&PrizeSpec::power(alpha, n).unwrap());
            for t in [0.05, 0.3, 1.0] {
                let p = transition_matrix(&rseq, t);
                let oracle = (generator(&rseq) * t).exp();
                for i in 0..n {
                    for j in 0..n {
                        assert!(
                            (p.get(i + 1, j + 1) - oracle[(i, j)]).abs() < 1e-9,
                            "alpha={alpha} N={n} t={t} ({i},{j})"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn closed_and_integrated_probabilities_agree_for_small_chains() {
    let rseq = RateSequence::from_rates(&[4.0, 2.5, 1.0]).unwrap();
    let times = [0.0, 0.1, 0.7, 2.0];
    let integrated = state_probs_kolmogorov(&rseq, &times).unwrap();
    for (t, d) in times.iter().zip(&integrated) {
        let closed = state_probs_closed(&rseq, *t).unwrap();
        for (a, b) in closed.probs.iter().zip(&d.probs) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn kolmogorov_residual_is_small() {
    // central difference of p(t) against the forward equations
    let rseq = ess_rates(&PrizeSpec::power(1.5, 30).unwrap());
    let h = 1e-4;
    for t in [0.2, 0.6] {
        let lo = state_probs(&rseq, t - h).probs;
        let mid = state_probs(&rseq, t).probs;
        let hi = state_probs(&rseq, t + h).probs;
        for i in 0..rseq.n() {
            let inflow = if i == 0 { 0.0 } else { rseq.rates()[i - 1] * mid[i - 1] };
            let rhs = inflow - rseq.rates()[i] * mid[i];
            let lhs = (hi[i] - lo[i]) / (2.0 * h);
            assert!((lhs - rhs).abs() < 1e-5, "t={t} i={i}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn two_player_expected_duration() {
    // one round with rate 1/(V_2 - V_1): mean V_2 - V_1, halved by the (N-k)/(N-k+1) weight
    let spec = PrizeSpec::power(1.0, 2).unwrap();
    assert!((expected_duration(&spec) - 0.5 * (spec.v(2) - spec.v(1))).abs() < 1e-15);
}

#[test]
fn gamma_sum_matches_alternating_binomial_sum() {
    for p in [-1.7, -0.5, 0.3, 0.5, 2.5] {
        for q in [0usize, 1, 5, 15] {
            let mut binom = 1.0;
            let mut direct = 0.0;
            for k in 0..=q {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                direct += sign * binom / (k as f64 - p);
                binom = binom * (q - k) as f64 / (k + 1) as f64;
            }
            let got = gamma_sum(q, p).unwrap();
            assert!((got - direct).abs() < 1e-9 * direct.abs().max(1.0), "q={q} p={p}: {got} vs {direct}");
        }
    }
}

#[test]
fn linear_prize_curve_against_fine_step() {
    let spec = PrizeSpec::power(1.0, 20).unwrap();
    let coarse = EssCurve::solve(&spec, &EssOptions { step: Some(2e-3), ..EssOptions::default() }).unwrap();
    let fine = EssCurve::solve(&spec, &EssOptions { step: Some(2.5e-4), ..EssOptions::default() }).unwrap();
    for t in [0.1, 0.4, 0.9, 1.3] {
        assert!((coarse.cdf_at(t) - fine.cdf_at(t)).abs() < 1e-9);
    }
}

#[test]
fn upper_part_of_split_expectation_is_small_in_l1() {
    // int_0^{V(1)} upper(t) dt <= eps sup|V V'| + O(1/N)
    use attrition::dynamic::expectation_v_x;
    let eps = 0.1;
    for alpha in [1.0, 2.0] {
        let spec = PrizeSpec::power(alpha, 200).unwrap();
        let rseq = ess_rates(&spec);
        let h = 5e-3;
        let l1: f64 = (0..200)
            .map(|i| expectation_v_x(&rseq, &spec, (i as f64 + 0.5) * h, eps).unwrap().1 * h)
            .sum();
        let sup_vv = alpha; // V V' = alpha x^{2 alpha - 1}, largest at x = 1
        assert!(l1 <= eps * sup_vv + 5.0 / 200.0, "alpha={alpha}: {l1}");
    }
}
