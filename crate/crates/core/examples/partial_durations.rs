//! Two very different waiting-time laws with the same density at zero give
//! nearly identical partial game durations once `N` is large.

use attrition::simulate::{compare_partial_durations, Coupling, Strategy, StrategyFamily, DurationComparison};

fn main() -> attrition::Result<()> {
    let cfg = DurationComparison {
        alpha: StrategyFamily::fixed(Strategy::Exponential { rate: 1.0 }),
        beta: StrategyFamily::fixed(Strategy::half_normal_matching(1.0)),
        q: 0.5,
        ns: vec![50, 200, 800, 3200],
        delta: 0.1,
        coupling: Coupling::Independent,
    };
    let run = compare_partial_durations(&cfg, 3, 1000)?;
    for r in &run.outputs {
        println!(
            "N={:<5} rounds={:<5} P(|S_a - S_b| >= 0.1) = {:.3} [{:.3}, {:.3}]",
            r.n, r.rounds, r.exceedance, r.ci_lo, r.ci_hi
        );
    }
    Ok(())
}
