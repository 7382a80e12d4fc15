//! Integrating the two-mode data and splitting the solution into the linear
//! part, the first iterate and the remainder.

use bbm_inflation::lab::ExperimentParams;
use bbm_inflation::solver::{decompose, integrate, remainder_residual};

fn main() -> bbm_inflation::Result<()> {
    let p = ExperimentParams::default().with_k1(32);
    let traj = integrate(&p)?;
    println!("k1 = {}, N = {}, T = {:.4e}, dt = {:.3e}", p.k1, traj.cutoff(), p.horizon(), p.dt());

    let snaps = decompose(&traj);
    for s in snaps.iter().step_by(40).chain(snaps.last()) {
        println!(
            "t = {:.4e}  ‖u‖_-1 = {:.6}  ‖S(t)u0‖_-1 = {:.6}  ‖u1‖_-1 = {:.6}  ‖y‖_0 = {:.3e}",
            s.t, s.norms.u.hms, s.norms.su0.hms, s.norms.u1.hms, s.norms.y.l2
        );
    }
    println!("remainder identity residual: {:.3e}", remainder_residual(&traj)?);
    Ok(())
}
