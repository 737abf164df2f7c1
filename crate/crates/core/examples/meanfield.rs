//! Limit quitting fraction `q(t)` and the waiting-time density `m(t, tau)`.

use attrition::meanfield::{m_density, q_series, total_duration};
use attrition::PrizeSpec;

fn main() -> attrition::Result<()> {
    let spec = PrizeSpec::power(0.5, 100)?;
    println!("limit duration {}", total_duration(&spec)?);
    for s in q_series(&spec, 5)? {
        let m: Vec<String> = [0.0, 0.1, 0.5]
            .iter()
            .map(|&tau| Ok(format!("{:.4}", m_density(&spec, s.t, tau)?)))
            .collect::<attrition::Result<_>>()?;
        println!("t={:.2} q={:.4} q'={:.4}  m(t, 0|0.1|0.5) = {}", s.t, s.q, s.qdot, m.join(" "));
    }
    Ok(())
}
