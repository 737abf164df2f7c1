//! Solve the static equilibrium cdf `G_N` and watch it approach
//! `min(V^{-1}(t), 1)` as `N` grows.

use attrition::static_model::{ess_limit_error, EssCurve, EssOptions};
use attrition::PrizeSpec;

fn main() -> attrition::Result<()> {
    for alpha in [0.5, 1.0, 2.0] {
        for n in [10, 50, 200] {
            let spec = PrizeSpec::power(alpha, n)?;
            let curve = EssCurve::solve(&spec, &EssOptions::default())?;
            println!(
                "alpha={alpha:<4} N={n:<4} nodes={:<6} t_max={:<8.4} sup|G - q| = {:.4}",
                curve.len(),
                curve.t_max,
                ess_limit_error(&curve, &spec)?
            );
        }
    }
    Ok(())
}
