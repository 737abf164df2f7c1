//! Transition matrix of the quitting chain from its eigenvector
//! factorisation, checked against the semigroup property.

use attrition::dynamic::{transition_matrix, RateSequence};

fn main() -> attrition::Result<()> {
    let rates = RateSequence::from_rates(&[3.0, 2.2, 1.5, 0.9])?;
    let p = transition_matrix(&rates, 0.4);
    println!("P(0.4), method {:?}", p.method);
    for row in p.rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:8.5}")).collect();
        println!("  [{}]  sum = {:.12}", cells.join(" "), row.iter().sum::<f64>());
    }
    let twice = p.compose(&p);
    let direct = transition_matrix(&rates, 0.8);
    let gap = twice
        .entries
        .iter()
        .zip(&direct.entries)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("max |P(0.4)^2 - P(0.8)| = {gap:.3e}");
    Ok(())
}
