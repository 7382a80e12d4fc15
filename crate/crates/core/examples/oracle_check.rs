//! Cross-checking the pseudospectral solver against the Galerkin ODE oracle
//! on a small case.

use bbm_inflation::cli::oracle_check_params;
use bbm_inflation::solver::{conserved_drift, galerkin_oracle, integrate};

fn main() -> bbm_inflation::Result<()> {
    let p = oracle_check_params();
    let solver = integrate(&p)?;
    let oracle = galerkin_oracle(&p, p.cutoff())?;
    let (mass, energy) = conserved_drift(&solver);
    println!("sup_t ‖solver - oracle‖_0 = {:.3e}", solver.sup_l2_distance(&oracle));
    println!("mass drift {mass:.3e}, energy drift {energy:.3e}");
    Ok(())
}
