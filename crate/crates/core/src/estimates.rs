//! Empirical bilinear constant and the bootstrap quadratic.
//!
//! The remainder bound rests on `‖Λ(uv)‖_q ≤ C_q ‖u‖_q ‖v‖_q` for `q ≥ 0`.
//! [`bilinear_probe`] estimates `C_q` from random trigonometric polynomials;
//! [`bootstrap_roots`] analyses `p(z) = A + (B-1)z + Tz²`, whose small root
//! traps the remainder norm.

use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::apply_lambda;
use crate::spectral::{SobolevIndex, SpectralField};

/// Probe settings behind the constant handed to the bootstrap.
pub const DEFAULT_PROBE_Q: f64 = 0.0;
pub const DEFAULT_PROBE_TRIALS: usize = 1000;
pub const DEFAULT_PROBE_SEED: u64 = 42;
pub const DEFAULT_PROBE_CUTOFF: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub max_ratio: f64,
    pub samples: Vec<f64>,
}

/// `‖Λ(uv)‖_q / (‖u‖_q ‖v‖_q)`, or `None` when either factor has zero norm.
pub fn bilinear_ratio(u: &SpectralField, v: &SpectralField, q: f64) -> Option<f64> {
    let r = SobolevIndex::new(q);
    let denom = u.sobolev_norm(r) * v.sobolev_norm(r);
    if denom == 0.0 {
        return None;
    }
    Some(apply_lambda(&u.multiply(v)).sobolev_norm(r) / denom)
}

/// Mean-zero polynomial with `f_k, g_k ~ N(0,1)·k^{-q-1}`.
fn random_polynomial(rng: &mut ChaCha8Rng, cutoff: usize, q: f64) -> SpectralField {
    let mut f = SpectralField::zeros(cutoff);
    for k in 1..=cutoff {
        let decay = (k as f64).powf(-q - 1.0);
        let a: f64 = StandardNormal.sample(rng);
        let b: f64 = StandardNormal.sample(rng);
        f.set_mode(k, a * decay, b * decay);
    }
    f
}

/// Draws `trials` random pairs and records the bilinear ratio of each.
///
/// Trial `i` uses its own ChaCha stream `i` under `seed`, so the output does
/// not depend on how trials are scheduled across threads.
pub fn bilinear_probe(q: f64, trials: usize, seed: u64, cutoff: usize) -> Result<ProbeResult> {
    if !(q >= 0.0 && q.is_finite()) {
        return Err(Error::InvalidParameter {
            key: "q",
            reason: format!("the bilinear estimate needs q >= 0, got {q}"),
        });
    }
    if cutoff == 0 || trials == 0 {
        return Err(Error::InvalidParameter {
            key: "trials",
            reason: "need at least one trial and one mode".into(),
        });
    }
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            loop {
                let u = random_polynomial(&mut rng, cutoff, q);
                let v = random_polynomial(&mut rng, cutoff, q);
                if let Some(r) = bilinear_ratio(&u, &v, q) {
                    return r;
                }
            }
        })
        .collect();
    let max_ratio = samples.iter().copied().fold(0.0, f64::max);
    Ok(ProbeResult { max_ratio, samples })
}

/// `C_bil`: the 1000-trial probe at `q = 0`, `N = 256`, seed 42 (computed once).
pub fn default_bilinear_constant() -> f64 {
    static CONSTANT: OnceLock<f64> = OnceLock::new();
    *CONSTANT.get_or_init(|| {
        bilinear_probe(
            DEFAULT_PROBE_Q,
            DEFAULT_PROBE_TRIALS,
            DEFAULT_PROBE_SEED,
            DEFAULT_PROBE_CUTOFF,
        )
        .expect("default probe settings are valid")
        .max_ratio
    })
}

/// Roots and verdict of the bootstrap polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BootstrapReport {
    #[serde(rename = "A", serialize_with = "crate::export::sig17")]
    pub a: f64,
    #[serde(rename = "B", serialize_with = "crate::export::sig17")]
    pub b: f64,
    #[serde(rename = "T", serialize_with = "crate::export::sig17")]
    pub t: f64,
    #[serde(serialize_with = "crate::export::sig17_opt")]
    pub z_low: Option<f64>,
    #[serde(serialize_with = "crate::export::sig17_opt")]
    pub z_high: Option<f64>,
    #[serde(rename = "Y_measured", serialize_with = "crate::export::sig17")]
    pub y_measured: f64,
    pub ok: bool,
}

/// Real roots of `p(z) = A + (B-1)z + Tz²`, smallest first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticRoots {
    pub z_low: f64,
    pub z_high: f64,
    /// `z_low ≤ 2A/(1-B)`; established whenever roots exist.
    pub sharp_bound_holds: bool,
    /// `z_low ≤ 4A`, checked in the regime `B < 1/2`, `4AT ≤ (1-B)²/2`;
    /// `None` outside it.
    pub four_a_bound_holds: Option<bool>,
}

pub fn bootstrap_polynomial(a: f64, b: f64, t: f64, z: f64) -> f64 {
    a + (b - 1.0) * z + t * z * z
}

/// Roots of the bootstrap quadratic. The small root uses the rationalised
/// form `2A / ((1-B) + √disc)`, free of cancellation when `AT` is tiny.
pub fn bootstrap_roots(a: f64, b: f64, t: f64) -> Result<QuadraticRoots> {
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter {
            key: "A",
            reason: format!("must be finite and nonnegative, got {a}"),
        });
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter {
            key: "T",
            reason: format!("must be finite and positive, got {t}"),
        });
    }
    if !(b < 1.0) {
        return Err(Error::InvalidParameter {
            key: "B",
            reason: format!("must be below 1, got {b}"),
        });
    }
    let slack = 1.0 - b;
    let disc = slack * slack - 4.0 * a * t;
    if disc < 0.0 {
        return Err(Error::NoRealRoots { discriminant: disc });
    }
    let root = disc.sqrt();
    let z_low = 2.0 * a / (slack + root);
    let z_high = (slack + root) / (2.0 * t);
    let in_regime = b < 0.5 && 4.0 * a * t <= 0.5 * slack * slack;
    Ok(QuadraticRoots {
        z_low,
        z_high,
        sharp_bound_holds: z_low <= 2.0 * a / slack,
        four_a_bound_holds: in_regime.then_some(z_low <= 4.0 * a),
    })
}

/// Full bootstrap verdict for a measured `𝒴(T)`: `ok` iff the roots exist
/// and `𝒴 ≤ min(z_low, 4A)`.
pub fn bootstrap_report(a: f64, b: f64, t: f64, y_measured: f64) -> BootstrapReport {
    let roots = bootstrap_roots(a, b, t).ok();
    BootstrapReport {
        a,
        b,
        t,
        z_low: roots.map(|r| r.z_low),
        z_high: roots.map(|r| r.z_high),
        y_measured,
        ok: roots.is_some_and(|r| y_measured <= r.z_low.min(4.0 * a)),
    }
}
