//! Estimating the constant of ‖Λ(uv)‖_q ≤ C‖u‖_q‖v‖_q from random
//! trigonometric polynomials.

use bbm_inflation::estimates::{bilinear_probe, bilinear_ratio};
use bbm_inflation::SpectralField;

fn main() -> bbm_inflation::Result<()> {
    let u = SpectralField::sine_mode(1, 1.0);
    println!("single mode sin x: ratio {}", bilinear_ratio(&u, &u, 0.0).unwrap_or(f64::NAN));

    for q in [0.0, 0.5, 1.0] {
        for cutoff in [64, 256] {
            let probe = bilinear_probe(q, 1000, 42, cutoff)?;
            println!("q = {q}, N = {cutoff:>3}: max ratio {:.5}", probe.max_ratio);
        }
    }
    Ok(())
}
