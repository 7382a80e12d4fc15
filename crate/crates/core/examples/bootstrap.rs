//! Roots of the bootstrap quadratic A + (B-1)z + Tz² and the trapping
//! verdict along a k1 sweep.

use bbm_inflation::estimates::{bootstrap_report, bootstrap_roots, default_bilinear_constant};
use bbm_inflation::lab::{bootstrap_constants, ExperimentParams};

fn main() -> bbm_inflation::Result<()> {
    let r = bootstrap_roots(0.1, 0.25, 0.01)?;
    println!("A = 0.1, B = 0.25, T = 0.01: z_low = {:.6}, z_high = {:.4}", r.z_low, r.z_high);

    let c = default_bilinear_constant();
    println!("bilinear constant {c:.5}");
    for k1 in [64, 256, 1024, 4096] {
        let p = ExperimentParams::default().with_k1(k1);
        let (a, b) = bootstrap_constants(&p, c);
        let report = bootstrap_report(a, b, p.horizon(), 0.0);
        println!(
            "k1 = {k1:>5}: A = {a:.3e}, B = {b:.3e}, z_low = {:.3e}, 4A = {:.3e}",
            report.z_low.unwrap_or(f64::NAN),
            4.0 * a
        );
    }
    Ok(())
}
