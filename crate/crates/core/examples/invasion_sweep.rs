//! Payoff gap `Delta_N` of `g_N` against immediate quitting when one rival
//! quits at once, over a grid of exponents and player counts.

use attrition::static_model::{invasion_sweep, smallest_invadable_n, EssOptions, InvasionMethod};

fn main() -> attrition::Result<()> {
    let alphas = [0.5, 0.8, 1.0, 1.5];
    let ns: Vec<usize> = (4..=35).collect();
    let rows = invasion_sweep(&alphas, &ns, InvasionMethod::ClosedForm, &EssOptions::default())?;
    for &a in &alphas {
        let line: String = rows
            .iter()
            .filter(|r| r.alpha == a)
            .map(|r| if r.report.delta < 0.0 { '-' } else { '+' })
            .collect();
        let first = smallest_invadable_n(&rows, a).map_or("none".into(), |n| n.to_string());
        println!("alpha={a:<4} sign(Delta_N), N=4..35: {line}  first negative N: {first}");
    }
    Ok(())
}
