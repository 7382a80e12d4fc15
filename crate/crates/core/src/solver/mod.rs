//! Nonlinear evolution of periodic BBM.
//!
//! The state is advanced in the interaction picture: over one step of
//! length `h` starting from `u_n`, the variable `v(τ) = S(-τ)u(t_n + τ)`
//! obeys `v' = S(-τ) N(S(τ)v)` with `N(u) = P_N ½Λ(u²)`. The linear flow
//! is applied exactly by [`propagate`], and `v` is stepped with classical
//! fourth-order Runge–Kutta. With the nonlinearity switched off the scheme
//! reduces to `propagate` itself.

mod decompose;
mod galerkin;

pub use decompose::{
    decompose, remainder_integral, remainder_residual, remainder_sources, DecompositionSnapshot, NormPair,
    SnapshotNorms,
};
pub use galerkin::{galerkin_oracle, galerkin_oracle_from, galerkin_rhs, GALERKIN_MAX_MODES, GALERKIN_TOLERANCE};

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lab::{build_initial_data, ExperimentParams};
use crate::operators::{apply_lambda, propagate};
use crate::spectral::SpectralField;

/// Fraction of the top modes watched by the tail monitor.
pub const TAIL_FRACTION: f64 = 0.1;
/// Largest admissible share of `L²` energy in the watched tail.
pub const TAIL_THRESHOLD: f64 = 1e-10;
/// A single step may not grow the `L²` norm by more than this factor.
pub const MAX_STEP_GROWTH: f64 = 1e6;

/// Time-stamped states of one integration.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub params: ExperimentParams,
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
}

impl Trajectory {
    pub fn initial(&self) -> &SpectralField {
        &self.states[0]
    }

    pub fn last(&self) -> (f64, &SpectralField) {
        let i = self.times.len() - 1;
        (self.times[i], &self.states[i])
    }

    pub fn cutoff(&self) -> usize {
        self.states[0].cutoff()
    }

    /// `sup_t ‖self(t) - other(t)‖₀` over shared output times.
    pub fn sup_l2_distance(&self, other: &Trajectory) -> f64 {
        self.states
            .iter()
            .zip(&other.states)
            .map(|(a, b)| (a - b).l2_norm())
            .fold(0.0, f64::max)
    }
}

/// Whether the quadratic term participates in the evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Nonlinearity {
    #[default]
    On,
    Off,
}

/// `Λu + ½Λ(u²)`, with the square formed exactly (cutoff `2N`).
pub fn rhs_eval(u: &SpectralField) -> SpectralField {
    let quad = apply_lambda(&u.multiply(u)).scaled(0.5);
    &apply_lambda(u) + &quad
}

/// `P_N ½Λ(u²)`, the Galerkin-projected nonlinearity.
fn nonlinear_term(u: &SpectralField) -> SpectralField {
    apply_lambda(&u.multiply(u)).scaled(0.5).truncated(u.cutoff())
}

/// Uniform output grid of `points` samples on `[0, horizon]`.
pub fn output_times(horizon: f64, points: usize) -> Vec<f64> {
    match points {
        0 | 1 => vec![0.0],
        n => (0..n)
            .map(|i| if i == n - 1 { horizon } else { horizon * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

/// Integrates the two-mode data of `params`.
pub fn integrate(params: &ExperimentParams) -> Result<Trajectory> {
    let u0 = build_initial_data(params.k1, params.gamma).padded(params.cutoff());
    integrate_from(params, &u0, Nonlinearity::On)
}

/// Integrates arbitrary mean-zero data on the output grid of `params`,
/// using its cutoff, horizon and step.
pub fn integrate_from(params: &ExperimentParams, u0: &SpectralField, nonlinearity: Nonlinearity) -> Result<Trajectory> {
    let cutoff = params.cutoff();
    let needed = 2 * (2 * params.k1 + 2);
    if cutoff < needed {
        return Err(Error::InvalidParameter {
            key: "N",
            reason: format!("cutoff {cutoff} is below 2(2k1+2) = {needed}"),
        });
    }
    if u0.mean() != 0.0 {
        return Err(Error::InvalidParameter {
            key: "initial data",
            reason: format!("evolution states must have zero mean, got {}", u0.mean()),
        });
    }
    if u0.cutoff() > cutoff {
        return Err(Error::InvalidParameter {
            key: "initial data",
            reason: format!("initial cutoff {} exceeds N = {cutoff}", u0.cutoff()),
        });
    }
    let dt = params.dt();
    let times = output_times(params.horizon(), params.output_points);
    let mut states = Vec::with_capacity(times.len());
    let mut u = u0.padded(cutoff);
    check_tail(&u, 0.0)?;
    states.push(u.clone());
    for w in times.windows(2) {
        let span = w[1] - w[0];
        let steps = ((span / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        let h = span / steps as f64;
        for i in 0..steps {
            let next = match nonlinearity {
                Nonlinearity::On => rk4_step(&u, h),
                Nonlinearity::Off => propagate(&u, h),
            };
            let t = w[0] + (i + 1) as f64 * h;
            let before = u.l2_norm();
            let after = next.l2_norm();
            if !after.is_finite() || (before > 0.0 && after > MAX_STEP_GROWTH * before) {
                return Err(Error::StepUnstable {
                    t,
                    growth: after / before,
                });
            }
            u = next;
        }
        check_tail(&u, w[1])?;
        states.push(u.clone());
    }
    Ok(Trajectory {
        params: params.clone(),
        times,
        states,
    })
}

/// One integrating-factor RK4 step of length `h`.
fn rk4_step(u: &SpectralField, h: f64) -> SpectralField {
    let f = |tau: f64, v: &SpectralField| propagate(&nonlinear_term(&propagate(v, tau)), -tau);
    let k1 = f(0.0, u);
    let k2 = f(0.5 * h, &u.axpy(0.5 * h, &k1));
    let k3 = f(0.5 * h, &u.axpy(0.5 * h, &k2));
    let k4 = f(h, &u.axpy(h, &k3));
    let v = u
        .axpy(h / 6.0, &k1)
        .axpy(h / 3.0, &k2)
        .axpy(h / 3.0, &k3)
        .axpy(h / 6.0, &k4);
    propagate(&v, h)
}

/// Share of `L²` energy carried by the top [`TAIL_FRACTION`] of the modes.
pub fn tail_fraction(u: &SpectralField) -> f64 {
    let n = u.cutoff();
    let watched = ((n as f64 * TAIL_FRACTION).ceil() as usize).max(1);
    let total = u.l2_norm().powi(2);
    if total == 0.0 {
        return 0.0;
    }
    u.tail_energy(n.saturating_sub(watched)) / total
}

fn check_tail(u: &SpectralField, t: f64) -> Result<()> {
    let fraction = tail_fraction(u);
    if fraction >= TAIL_THRESHOLD {
        return Err(Error::TailOverflow {
            cutoff: u.cutoff(),
            required: 2 * u.cutoff(),
            t,
            fraction,
        });
    }
    Ok(())
}

/// Integrates with the default cutoff rule, doubling `N` while the tail
/// monitor objects. Gives up after `max_doublings`.
pub fn integrate_resolved(params: &ExperimentParams, max_doublings: usize) -> Result<Trajectory> {
    let mut p = params.clone();
    let mut attempts = 0;
    loop {
        match integrate(&p) {
            Err(Error::TailOverflow { required, .. }) if attempts < max_doublings => {
                p.cutoff = Some(required.max(2 * p.cutoff()));
                attempts += 1;
            }
            other => return other,
        }
    }
}

/// `(∫u dx, ∫(u² + u_x²) dx)` over one period.
///
/// In coefficient terms `mass = 2π·mean` and
/// `energy = 2π·mean² + π Σ (1+k²)(f_k² + g_k²)`.
pub fn conserved_quantities(u: &SpectralField) -> (f64, f64) {
    let mass = 2.0 * PI * u.mean();
    let modal: f64 = u
        .modes()
        .map(|(k, f, g)| (1.0 + (k * k) as f64) * (f * f + g * g))
        .sum();
    (mass, 2.0 * PI * u.mean() * u.mean() + PI * modal)
}

/// Largest drift of mass and energy along a trajectory, each relative to
/// `max(|initial value|, 1)` so that a zero mass is measured absolutely.
pub fn conserved_drift(traj: &Trajectory) -> (f64, f64) {
    let (m0, e0) = conserved_quantities(traj.initial());
    traj.states.iter().fold((0.0f64, 0.0f64), |(dm, de), u| {
        let (m, e) = conserved_quantities(u);
        (
            dm.max((m - m0).abs() / m0.abs().max(1.0)),
            de.max((e - e0).abs() / e0.abs().max(1.0)),
        )
    })
}
