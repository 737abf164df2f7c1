//! The second-order certificate `Q[G_N]` for convex, linear and concave
//! prizes.

use attrition::static_model::{q_functional, EssCurve, EssOptions};
use attrition::PrizeSpec;

fn main() -> attrition::Result<()> {
    for alpha in [2.0, 1.0, 0.5] {
        let spec = PrizeSpec::power(alpha, 25)?;
        let curve = EssCurve::solve(&spec, &EssOptions::default())?;
        let q = q_functional(&curve, &spec);
        println!(
            "alpha={alpha:<4} {:?}: Q(0)={:+.5} min Q={:+.5} at t={:.4}  Q(end)={:.6}",
            spec.convexity(),
            q.values[0],
            q.min,
            q.argmin,
            q.values[q.values.len() - 1]
        );
    }
    Ok(())
}
