//! Sign of the payoff change when a few players switch to another
//! quitting cdf: positive for convex prizes, negative for concave ones.

use attrition::meanfield::ess_perturbation;
use attrition::PrizeSpec;

fn main() -> attrition::Result<()> {
    for alpha in [2.0, 1.0, 0.5] {
        let spec = PrizeSpec::power(alpha, 50)?;
        for warp in [0.7, 1.3, 2.0] {
            let inner = spec.clone();
            let phi = move |t: f64| inner.inverse(t.min(1.0)).unwrap_or(1.0).powf(warp);
            println!(
                "alpha={alpha:<4} phi=q^{warp:<4} {:+.6e}",
                ess_perturbation(&spec, phi)?
            );
        }
    }
    Ok(())
}
