//! Quitting-fraction mean and variance of the dynamic game, compared with
//! the limit `V^{-1}(t)`. For `V(x) = x^2` the limit is `sqrt(t)`.

use attrition::dynamic::{ess_rates, state_probs_series};
use attrition::PrizeSpec;

fn main() -> attrition::Result<()> {
    let spec = PrizeSpec::power(2.0, 200)?;
    let rates = ess_rates(&spec);
    let times: Vec<f64> = (0..=9).map(|i| i as f64 * 0.1).collect();
    println!("{:>5} {:>10} {:>10} {:>12} {:>8}", "t", "E[X]", "sqrt(t)", "Var X", "method");
    for d in state_probs_series(&rates, &times) {
        println!(
            "{:>5.2} {:>10.6} {:>10.6} {:>12.3e} {:>8?}",
            d.t,
            d.mean(),
            d.t.sqrt(),
            d.variance(),
            d.method
        );
    }
    Ok(())
}
