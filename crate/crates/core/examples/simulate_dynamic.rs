//! Monte Carlo of the dynamic game against the exact state probabilities.

use attrition::dynamic::{ess_rates, state_probs};
use attrition::simulate::{simulate_dynamic_game, RoundSampling};
use attrition::PrizeSpec;

fn main() -> attrition::Result<()> {
    let spec = PrizeSpec::power(1.0, 10)?;
    let times = [0.2, 0.5, 1.0];
    let run = simulate_dynamic_game(&spec, 7, 100_000, &times, RoundSampling::RoundRate)?;
    let rates = ess_rates(&spec);
    for (j, &t) in times.iter().enumerate() {
        let exact = state_probs(&rates, t);
        println!(
            "t={t}: E[X] sim {:.5} +- {:.5}, exact {:.5}",
            run.outputs.mean_x[j],
            run.outputs.ci[j],
            exact.mean()
        );
    }
    println!(
        "duration: sim {:.5} +- {:.5}, exact {:.5}",
        run.outputs.duration_mean, run.outputs.duration_ci, run.outputs.duration_expected
    );
    Ok(())
}
