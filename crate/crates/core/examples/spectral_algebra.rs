//! Building trigonometric polynomials, multiplying them and measuring them
//! in homogeneous Sobolev norms.

use bbm_inflation::{SobolevIndex, SpectralField};

fn main() -> bbm_inflation::Result<()> {
    let u = SpectralField::sine_mode(3, 1.0);
    let v = SpectralField::cosine_mode(5, 2.0);

    // sin 3x · 2cos 5x = sin 8x - sin 2x
    let w = u.multiply(&v);
    println!("support of u·v: {:?}", w.support());
    println!("coefficient of sin 8x: {}", w.sine(8));
    println!("coefficient of sin 2x: {}", w.sine(2));

    for r in [-1.0, 0.0, 1.0] {
        println!("‖u·v‖_{r:+} = {:.6}", w.sobolev_norm(SobolevIndex::new(r)));
    }

    // grid round trip
    let samples = w.sample(32);
    let back = SpectralField::analyze(&samples, w.cutoff())?;
    println!("grid round-trip error: {:.2e}", back.max_abs_diff(&w));
    Ok(())
}
