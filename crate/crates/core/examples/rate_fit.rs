//! Decay rates of the two terms of `Delta_N` on a log-log scale.

use attrition::static_model::{rate_fit, EssOptions};

fn main() -> attrition::Result<()> {
    let ns = [20, 40, 80, 160, 320];
    for alpha in [0.5, 0.8, 1.0] {
        let fit = rate_fit(alpha, &ns, &EssOptions::default())?;
        println!(
            "alpha={alpha:<4} slope |A_N| = {:+.4}  slope |C_N| = {:+.4}",
            fit.slope_a, fit.slope_c
        );
    }
    Ok(())
}
