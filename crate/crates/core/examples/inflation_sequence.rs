//! Doubling k1 until the solution at T0 = k1^(-μγ) reaches each target
//! H^-1 norm. Pass targets as arguments, e.g. `0.5 0.8`.

use bbm_inflation::lab::{inflation_sequence, SequenceSearch};

fn main() -> bbm_inflation::Result<()> {
    let targets: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("targets are numbers"))
        .collect();
    let targets = if targets.is_empty() { vec![0.5, 0.8] } else { targets };
    for e in inflation_sequence(1.0, &targets, &SequenceSearch::default())? {
        println!(
            "target {:.2}: k1 = {:>5}, T = {:.3e}, ‖u0‖_-1 = {:.4}, ‖u(T)‖_-1 = {:.4}",
            e.target, e.k1, e.t, e.initial_norm, e.achieved_norm
        );
    }
    Ok(())
}
