//! Play the one-shot game under `G_N`: every player's mean payoff equals
//! the smallest prize `V_1`.

use attrition::simulate::sample_static_game;
use attrition::static_model::{EssCurve, EssOptions};
use attrition::PrizeSpec;

fn main() -> attrition::Result<()> {
    let spec = PrizeSpec::power(2.0, 8)?;
    let curve = EssCurve::solve(&spec, &EssOptions::default())?;
    let run = sample_static_game(&curve, &spec, 11, 200_000)?;
    let o = &run.outputs;
    println!("mean payoff {:.5} +- {:.5}, V_1 = {:.5}", o.mean_payoff, o.ci, o.indifference);
    for (k, p) in o.rank_payoff.iter().enumerate() {
        println!("  quit {:>2}: {:+.5}", k + 1, p);
    }
    Ok(())
}
