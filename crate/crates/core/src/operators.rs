//! The two linear operators of periodic BBM, both diagonal in `k`.
//!
//! Writing the equation `u_t + u_x + u u_x - u_xxt = 0` as
//! `u_t = Λu + ½Λ(u²)` with `Λ = -∂_x (1 - ∂_x²)^{-1}` gives a real
//! multiplier of strength `κ_k = k/(1+k²)` that rotates sines into cosines.
//! The linear flow `S(t) = e^{tΛ}` translates each mode by the phase `κ_k t`.

use crate::spectral::SpectralField;

/// `κ_k = k/(1+k²)`, the symbol magnitude and phase speed of mode `k`.
#[inline]
pub fn kappa(k: usize) -> f64 {
    let k = k as f64;
    k / (1.0 + k * k)
}

/// Tabulated `κ_1..κ_N`.
#[derive(Debug, Clone)]
pub struct MultiplierTable {
    kappa: Vec<f64>,
}

impl MultiplierTable {
    pub fn new(cutoff: usize) -> Self {
        MultiplierTable {
            kappa: (1..=cutoff).map(kappa).collect(),
        }
    }

    pub fn cutoff(&self) -> usize {
        self.kappa.len()
    }

    /// `κ_k` for `1 ≤ k ≤ N`.
    pub fn get(&self, k: usize) -> f64 {
        self.kappa[k - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.kappa
    }
}

/// `Λu`: `sin kx ↦ -κ_k cos kx`, `cos kx ↦ κ_k sin kx`, constants ↦ 0.
pub fn apply_lambda(field: &SpectralField) -> SpectralField {
    let mut out = field.clone();
    out.set_mean(0.0);
    for (k, f, g) in out.modes_mut() {
        let c = kappa(k);
        let (fk, gk) = (*f, *g);
        *f = c * gk;
        *g = -c * fk;
    }
    out
}

/// `S(t)u`: `sin kx ↦ sin(kx - κ_k t)`, `cos kx ↦ cos(kx - κ_k t)`.
///
/// Phases are computed from `κ_k t` directly, so any `t` (including
/// negative) is exact to rounding.
pub fn propagate(field: &SpectralField, t: f64) -> SpectralField {
    let mut out = field.clone();
    if t == 0.0 {
        return out;
    }
    for (k, f, g) in out.modes_mut() {
        let (s, c) = (kappa(k) * t).sin_cos();
        let (fk, gk) = (*f, *g);
        *f = fk * c + gk * s;
        *g = gk * c - fk * s;
    }
    out
}
