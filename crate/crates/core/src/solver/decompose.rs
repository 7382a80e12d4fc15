//! Splitting a trajectory as `u = S(t)u₀ + u₁ + y` and checking that the
//! remainder `y` satisfies its own Duhamel identity
//!
//! ```text
//! y(t) = ∫₀ᵗ S(t-τ) Λ[G₀ + G₁ + G₂](τ) dτ
//! G₀ = ½u₁² + u₁·S(τ)u₀,   G₁ = u₁y + y·S(τ)u₀,   G₂ = ½y²
//! ```

use crate::duhamel::first_order_term;
use crate::error::{Error, Result};
use crate::operators::{apply_lambda, propagate};
use crate::spectral::{SobolevIndex, SpectralField};

use super::Trajectory;

/// Relative change of the remainder integral, under a doubling of the
/// quadrature step, above which the quadrature is declared under-resolved.
pub const QUADRATURE_SELF_CHECK: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NormPair {
    /// `‖·‖_{-s}`
    pub hms: f64,
    /// `‖·‖_0`
    pub l2: f64,
}

impl NormPair {
    fn of(f: &SpectralField, s: f64) -> Self {
        NormPair {
            hms: f.sobolev_norm(SobolevIndex::negative(s)),
            l2: f.l2_norm(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SnapshotNorms {
    pub u: NormPair,
    pub su0: NormPair,
    pub u1: NormPair,
    pub y: NormPair,
}

#[derive(Debug, Clone)]
pub struct DecompositionSnapshot {
    pub t: f64,
    pub linear_part: SpectralField,
    pub u1_part: SpectralField,
    pub remainder: SpectralField,
    pub norms: SnapshotNorms,
}

impl DecompositionSnapshot {
    /// `linear_part + u1_part + remainder`.
    pub fn recombined(&self) -> SpectralField {
        &(&self.linear_part + &self.u1_part) + &self.remainder
    }
}

pub fn decompose(traj: &Trajectory) -> Vec<DecompositionSnapshot> {
    let params = &traj.params;
    let u0 = traj.initial();
    let cutoff = traj.cutoff();
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(&t, state)| {
            let linear_part = propagate(u0, t);
            let u1_part = first_order_term(params, t).padded(cutoff);
            let remainder = &(state - &linear_part) - &u1_part;
            let norms = SnapshotNorms {
                u: NormPair::of(state, params.s),
                su0: NormPair::of(&linear_part, params.s),
                u1: NormPair::of(&u1_part, params.s),
                y: NormPair::of(&remainder, params.s),
            };
            DecompositionSnapshot {
                t,
                linear_part,
                u1_part,
                remainder,
                norms,
            }
        })
        .collect()
}

/// `Λ[G₀ + G₁ + G₂]` at one snapshot, projected onto `cutoff` modes.
pub fn remainder_sources(snap: &DecompositionSnapshot, cutoff: usize) -> SpectralField {
    let (lin, u1, y) = (&snap.linear_part, &snap.u1_part, &snap.remainder);
    let g0 = u1.multiply(u1).scaled(0.5).axpy(1.0, &u1.multiply(lin));
    let g1 = &y.multiply(u1) + &y.multiply(lin);
    let g2 = y.multiply(y).scaled(0.5);
    apply_lambda(&(&(&g0 + &g1) + &g2)).truncated(cutoff)
}

/// Composite-trapezoid value of `∫₀^{t_i} S(t_i-τ) Λ[G](τ) dτ` at every
/// snapshot time, using only the snapshot grid (`stride` picks every
/// `stride`-th snapshot; entries off the coarse grid are `None`).
fn trapezoid(sources: &[SpectralField], times: &[f64], stride: usize, cutoff: usize) -> Vec<Option<SpectralField>> {
    // S(t-τ) = S(t)S(-τ): accumulate S(-τ)·source, rotate forward at the end
    let mut out = vec![None; times.len()];
    let mut acc = SpectralField::zeros(cutoff);
    let mut prev: Option<(f64, SpectralField)> = None;
    for i in (0..times.len()).step_by(stride) {
        let pulled = propagate(&sources[i], -times[i]);
        if let Some((tp, fp)) = &prev {
            let h = times[i] - tp;
            acc = acc.axpy(0.5 * h, fp).axpy(0.5 * h, &pulled);
        }
        out[i] = Some(propagate(&acc, times[i]));
        prev = Some((times[i], pulled));
    }
    out
}

/// Quadrature of the remainder identity at every snapshot time.
pub fn remainder_integral(snaps: &[DecompositionSnapshot], cutoff: usize) -> Vec<SpectralField> {
    let times: Vec<f64> = snaps.iter().map(|s| s.t).collect();
    let sources: Vec<SpectralField> = snaps.iter().map(|s| remainder_sources(s, cutoff)).collect();
    trapezoid(&sources, &times, 1, cutoff)
        .into_iter()
        .map(|f| f.expect("stride one fills every slot"))
        .collect()
}

/// `max_t ‖y(t) - ∫₀ᵗ S(t-τ)Λ[G₀+G₁+G₂]dτ‖₀` over the stored grid.
///
/// Fails with `QuadratureUnderResolved` when evaluating the integral on
/// every other grid point moves it by more than 10% (relative to its
/// largest `L²` size).
pub fn remainder_residual(traj: &Trajectory) -> Result<f64> {
    let snaps = decompose(traj);
    let cutoff = traj.cutoff();
    let times: Vec<f64> = snaps.iter().map(|s| s.t).collect();
    let sources: Vec<SpectralField> = snaps.iter().map(|s| remainder_sources(s, cutoff)).collect();
    let fine = trapezoid(&sources, &times, 1, cutoff);
    if times.len() >= 3 {
        let coarse = trapezoid(&sources, &times, 2, cutoff);
        let mut size = 0.0f64;
        let mut change = 0.0f64;
        for (f, c) in fine.iter().zip(&coarse) {
            if let (Some(f), Some(c)) = (f, c) {
                size = size.max(f.l2_norm());
                change = change.max((f - c).l2_norm());
            }
        }
        if size > 0.0 && change > QUADRATURE_SELF_CHECK * size {
            return Err(Error::QuadratureUnderResolved {
                relative_change: 100.0 * change / size,
            });
        }
    }
    Ok(fine
        .iter()
        .zip(&snaps)
        .map(|(q, s)| (q.as_ref().expect("filled") - &s.remainder).l2_norm())
        .fold(0.0, f64::max))
}
