//! The full experiment across a doubling k1 sweep: the data shrink in H^-1
//! while the solution at T0 does not.

use bbm_inflation::lab::{run_sweep, ExperimentParams};

fn main() -> bbm_inflation::Result<()> {
    let sweep = run_sweep(&ExperimentParams::default(), &[64, 128, 256], 3)?;
    for (i, r) in sweep.reports.iter().enumerate() {
        println!(
            "k1 = {:>4}: ‖u0‖_-1 = {:.5}  ‖u(T0)‖_-1 = {:.5}  ‖u1(T0)‖_-1 = {:.5}  ratio {:.4}  bootstrap {}",
            sweep.k1[i],
            sweep.u0_norm[i],
            sweep.u_final[i],
            sweep.u1_final[i],
            sweep.inflation_ratio[i],
            if r.bootstrap.ok { "ok" } else { "violated" }
        );
    }
    let s = &sweep.slopes;
    println!("slope of ‖u1(T0)‖ in k1: {:.4}", s.u1_slope.slope);
    println!("slope of ‖u0‖ in k1:     {:.4}", s.u0_slope.slope);
    println!("slope of the ratio:      {:.4}", s.inflation_slope.slope);
    Ok(())
}
