//! The dispersion symbol, the smoothing multiplier Λ and the linear group
//! S(t), which preserves every Sobolev norm.

use bbm_inflation::operators::{apply_lambda, kappa, propagate, MultiplierTable};
use bbm_inflation::{SobolevIndex, SpectralField};

fn main() {
    let table = MultiplierTable::new(8);
    println!("phase speeds κ_k for k = 1..8: {:.4?}", table.as_slice());
    println!("κ peaks at k = 1 with {}", kappa(1));

    // Λ turns sin x into -κ₁ cos x and annihilates constants
    let mut u = SpectralField::sine_mode(1, 1.0);
    u.set_mean(3.0);
    let lu = apply_lambda(&u);
    println!("Λ(3 + sin x): mean {}, cos x coefficient {}", lu.mean(), lu.cosine(1));

    let mut f = SpectralField::zeros(16);
    for k in 1..=16 {
        f.set_mode(k, 1.0 / k as f64, 0.5 / (k * k) as f64);
    }
    for t in [0.1, 1.0, 7.0] {
        let g = propagate(&f, t);
        let r = SobolevIndex::negative(1.0);
        println!(
            "t = {t:>4}: ‖S(t)f‖_-1 = {:.15}  (‖f‖_-1 = {:.15})",
            g.sobolev_norm(r),
            f.sobolev_norm(r)
        );
    }
}
