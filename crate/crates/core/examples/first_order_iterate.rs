//! Closed form of the first Duhamel iterate for two-mode data and how the
//! difference mode comes to dominate it.

use bbm_inflation::duhamel::{dominance_ratio, first_order_term, first_order_terms, leading_norm_prediction};
use bbm_inflation::lab::ExperimentParams;
use bbm_inflation::SobolevIndex;

fn main() {
    let base = ExperimentParams::default();
    println!("{:>6} {:>12} {:>14} {:>14} {:>12}", "k1", "T0", "‖u1(T0)‖_-1", "mode-1 only", "rest/mode-1");
    for k1 in [16, 32, 64, 128, 256, 512] {
        let p = base.with_k1(k1);
        let t = p.t0();
        let u1 = first_order_term(&p, t);
        println!(
            "{k1:>6} {t:>12.4e} {:>14.6} {:>14.6} {:>12.3e}",
            u1.sobolev_norm(SobolevIndex::negative(p.s)),
            leading_norm_prediction(&p, t),
            dominance_ratio(&p, t)
        );
    }

    let p = base.with_k1(8);
    let terms = first_order_terms(&p, p.t0());
    for (name, term) in ["2k1", "2k2", "1", "k1+k2"].iter().zip(&terms) {
        println!("term at wavenumber {name}: support {:?}", term.support());
    }
}
