//! Independent reference integrator.
//!
//! The truncated BBM system is assembled directly for the complex
//! coefficients `a_k` of `u = Σ_{0<|k|≤M} a_k e^{ikx}`:
//!
//! ```text
//! a_k' = -i k/(1+k²) · ( a_k + ½ Σ_{p+q=k, 0<|p|,|q|≤M} a_p a_q )
//! ```
//!
//! and integrated with an adaptive Dormand–Prince 5(4) pair. Nothing here
//! goes through `SpectralField::multiply`, `apply_lambda` or `propagate`.

use rustfft::num_complex::Complex;

use crate::error::{Error, Result};
use crate::lab::{build_initial_data, ExperimentParams};
use crate::spectral::SpectralField;

use super::{check_tail, output_times, Trajectory, MAX_STEP_GROWTH};

/// Desk-scale limit on the oracle's mode count.
pub const GALERKIN_MAX_MODES: usize = 64;
/// Local error tolerance (relative and absolute) of the adaptive stepper.
pub const GALERKIN_TOLERANCE: f64 = 1e-12;

const MAX_STEPS: usize = 5_000_000;

fn to_complex(u: &SpectralField, modes: usize) -> Vec<Complex<f64>> {
    (1..=modes)
        .map(|k| Complex::new(0.5 * u.cosine(k), -0.5 * u.sine(k)))
        .collect()
}

fn from_complex(a: &[Complex<f64>]) -> SpectralField {
    let mut u = SpectralField::zeros(a.len());
    for (i, z) in a.iter().enumerate() {
        u.set_mode(i + 1, -2.0 * z.im, 2.0 * z.re);
    }
    u
}

fn coefficient(a: &[Complex<f64>], p: isize) -> Complex<f64> {
    if p > 0 {
        a[p as usize - 1]
    } else {
        a[(-p) as usize - 1].conj()
    }
}

fn system_rhs(a: &[Complex<f64>], out: &mut [Complex<f64>]) {
    let m = a.len() as isize;
    for k in 1..=m {
        let mut conv = Complex::new(0.0, 0.0);
        for p in (k - m).max(-m)..=m {
            let q = k - p;
            if p == 0 || q == 0 || q.abs() > m {
                continue;
            }
            conv += coefficient(a, p) * coefficient(a, q);
        }
        let kf = k as f64;
        let symbol = Complex::new(0.0, -kf / (1.0 + kf * kf));
        out[k as usize - 1] = symbol * (a[k as usize - 1] + 0.5 * conv);
    }
}

/// Right-hand side of the truncated system, returned as a field with the
/// cutoff of `u`. The mean of `u` is ignored.
pub fn galerkin_rhs(u: &SpectralField) -> SpectralField {
    let a = to_complex(u, u.cutoff());
    let mut out = vec![Complex::new(0.0, 0.0); a.len()];
    system_rhs(&a, &mut out);
    from_complex(&out)
}

/// Oracle run for the two-mode data of `params` on `modes` Fourier modes.
pub fn galerkin_oracle(params: &ExperimentParams, modes: usize) -> Result<Trajectory> {
    let u0 = build_initial_data(params.k1, params.gamma);
    if u0.cutoff() > modes {
        return Err(Error::InvalidParameter {
            key: "modes",
            reason: format!("{modes} modes cannot hold wavenumber {}", u0.cutoff()),
        });
    }
    galerkin_oracle_from(params, &u0, modes)
}

/// Oracle run from arbitrary mean-zero data, on the output grid of `params`.
pub fn galerkin_oracle_from(params: &ExperimentParams, u0: &SpectralField, modes: usize) -> Result<Trajectory> {
    if modes == 0 || modes > GALERKIN_MAX_MODES {
        return Err(Error::InvalidParameter {
            key: "modes",
            reason: format!("oracle supports 1..={GALERKIN_MAX_MODES} modes, got {modes}"),
        });
    }
    let times = output_times(params.horizon(), params.output_points);
    let mut state = to_complex(u0, modes);
    let first = from_complex(&state);
    check_tail(&first, 0.0)?;
    let mut states = vec![first];
    let mut stepper = DormandPrince::new(modes);
    let mut h = params.dt().min(0.01);
    for w in times.windows(2) {
        h = stepper.advance(&mut state, w[0], w[1], h)?;
        let u = from_complex(&state);
        check_tail(&u, w[1])?;
        states.push(u);
    }
    let mut p = params.clone();
    p.cutoff = Some(modes);
    Ok(Trajectory {
        params: p,
        times,
        states,
    })
}

/// Dormand–Prince 5(4) with FSAL and standard step-size control. The
/// system is autonomous, so the stage nodes never enter.
struct DormandPrince {
    k: [Vec<Complex<f64>>; 7],
    stage: Vec<Complex<f64>>,
    next: Vec<Complex<f64>>,
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

impl DormandPrince {
    fn new(n: usize) -> Self {
        let z = vec![Complex::new(0.0, 0.0); n];
        DormandPrince {
            k: std::array::from_fn(|_| z.clone()),
            stage: z.clone(),
            next: z,
        }
    }

    /// Advances `y` from `t0` to exactly `t1`; returns the suggested next step.
    fn advance(&mut self, y: &mut Vec<Complex<f64>>, t0: f64, t1: f64, mut h: f64) -> Result<f64> {
        let mut t = t0;
        let mut steps = 0;
        system_rhs(y, &mut self.k[0]);
        while t < t1 {
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::StepUnstable { t, growth: f64::NAN });
            }
            let last = t + h >= t1;
            let step = if last { t1 - t } else { h };
            for s in 1..7 {
                for i in 0..y.len() {
                    let mut acc = y[i];
                    for j in 0..s {
                        acc += self.k[j][i] * (step * A[s][j]);
                    }
                    self.stage[i] = acc;
                }
                system_rhs(&self.stage, &mut self.k[s]);
            }
            // stage 7 was evaluated at the fifth-order solution
            self.next.copy_from_slice(&self.stage);
            let mut err_sq = 0.0;
            for i in 0..y.len() {
                let mut e = Complex::new(0.0, 0.0);
                for j in 0..7 {
                    e += self.k[j][i] * (step * E[j]);
                }
                let scale = GALERKIN_TOLERANCE
                    + GALERKIN_TOLERANCE * y[i].norm().max(self.next[i].norm());
                err_sq += (e.norm() / scale).powi(2);
            }
            let err = (err_sq / y.len().max(1) as f64).sqrt();
            if err <= 1.0 {
                let before: f64 = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let after: f64 = self.next.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if !after.is_finite() || (before > 0.0 && after > MAX_STEP_GROWTH * before) {
                    return Err(Error::StepUnstable {
                        t: t + step,
                        growth: after / before,
                    });
                }
                t = if last { t1 } else { t + step };
                std::mem::swap(y, &mut self.next);
                let (first, rest) = self.k.split_at_mut(1);
                std::mem::swap(&mut first[0], &mut rest[5]);
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if !last || err > 1.0 {
                h = step * factor;
            }
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_round_trip() {
        let mut u = SpectralField::zeros(3);
        u.set_mode(1, 0.3, -0.2);
        u.set_mode(3, 1.5, 0.25);
        assert!(from_complex(&to_complex(&u, 3)).max_abs_diff(&u) < 1e-16);
    }

    #[test]
    fn linear_mode_rotates_at_phase_speed() {
        // a single tiny mode evolves almost linearly: sin(x) -> sin(x - t/2)
        let p = ExperimentParams {
            k1: 1,
            gamma: 0.5,
            s: 1.0,
            mu: 1.8,
            horizon: Some(2.0),
            output_points: 2,
            ..ExperimentParams::default()
        };
        let eps = 1e-5;
        let u0 = SpectralField::sine_mode(1, eps).padded(4);
        let traj = galerkin_oracle_from(&p, &u0, 4).unwrap();
        let u = traj.last().1;
        assert!((u.sine(1) / eps - 1f64.cos()).abs() < 1e-6);
        assert!((u.cosine(1) / eps + 1f64.sin()).abs() < 1e-6);
    }

    #[test]
    fn rejects_too_many_modes() {
        let p = ExperimentParams::default();
        assert!(galerkin_oracle_from(&p, &SpectralField::zeros(4), 65).is_err());
    }
}
