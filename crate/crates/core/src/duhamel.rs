//! Closed form of the first Duhamel iterate
//!
//! ```text
//! u₁(t) = ∫₀ᵗ S(t-τ) ½Λ[(S(τ)u₀)²] dτ
//! ```
//!
//! for the two-mode data `u₀ = k₁^γ (sin k₁x + sin k₂x)`, `k₂ = k₁ + 1`.
//! Squaring `S(τ)u₀` and applying `½Λ` leaves four travelling sines at
//! wavenumbers `2k₁`, `2k₂`, `1` (the difference `k₂ - k₁`) and `k₁ + k₂`;
//! each one is integrated against the linear flow in closed form.

use crate::lab::ExperimentParams;
use crate::operators::kappa;
use crate::spectral::{SobolevIndex, SpectralField};

/// Below this gap `|κ_k - ω|` the resonant limit formula is used.
pub const RESONANCE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Sin,
    Cos,
}

/// `amplitude · sin(kx - ωτ)` (or `cos`), a source travelling at frequency `ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatoryMode {
    pub k: usize,
    pub omega: f64,
    pub phase: Phase,
    pub amplitude: f64,
}

impl OscillatoryMode {
    pub fn sin(k: usize, omega: f64, amplitude: f64) -> Self {
        assert!(k >= 1, "wavenumber must be positive");
        OscillatoryMode {
            k,
            omega,
            phase: Phase::Sin,
            amplitude,
        }
    }

    pub fn cos(k: usize, omega: f64, amplitude: f64) -> Self {
        assert!(k >= 1, "wavenumber must be positive");
        OscillatoryMode {
            k,
            omega,
            phase: Phase::Cos,
            amplitude,
        }
    }

    /// The integrand at time `τ` as a field.
    pub fn at(&self, tau: f64) -> SpectralField {
        let (s, c) = (self.omega * tau).sin_cos();
        let a = self.amplitude;
        let mut out = SpectralField::zeros(self.k);
        match self.phase {
            // sin(kx - φ) = sin kx cos φ - cos kx sin φ
            Phase::Sin => out.set_mode(self.k, a * c, -a * s),
            // cos(kx - φ) = cos kx cos φ + sin kx sin φ
            Phase::Cos => out.set_mode(self.k, a * s, a * c),
        }
        out
    }
}

/// `∫₀ᵗ S(t-τ) mode(τ) dτ`, a single-mode field on wavenumber `k`.
///
/// For the sine source this is `(κ_k - ω)^{-1}[cos(kx - κ_k t) - cos(kx - ωt)]`.
/// The differences of trigonometric functions are evaluated in product form
/// so the formula stays accurate as `ω → κ_k`; inside
/// [`RESONANCE_TOLERANCE`] the limit `t · sin(kx - κ_k t)` is used.
pub fn oscillatory_integral(mode: &OscillatoryMode, t: f64) -> SpectralField {
    debug_assert!(t >= 0.0, "integral runs forward in time");
    let kk = kappa(mode.k);
    let gap = kk - mode.omega;
    let half_sum = 0.5 * (kk + mode.omega) * t;
    // sin((κ-ω)t/2)/(κ-ω), equal to t/2 at resonance
    let weight = if gap.abs() <= RESONANCE_TOLERANCE {
        0.5 * t
    } else {
        (0.5 * gap * t).sin() / gap
    };
    let a = 2.0 * mode.amplitude * weight;
    let (s, c) = half_sum.sin_cos();
    let mut out = SpectralField::zeros(mode.k);
    match mode.phase {
        Phase::Sin => out.set_mode(mode.k, a * c, -a * s),
        Phase::Cos => out.set_mode(mode.k, a * s, a * c),
    }
    out
}

/// The four travelling sources of `½Λ[(S(τ)ū)²]`, unscaled by `k₁^{2γ}`,
/// in the order (`2k₁`, `2k₂`, difference mode `1`, `k₁+k₂`).
pub fn product_sources(k1: usize) -> [OscillatoryMode; 4] {
    let k2 = k1 + 1;
    let (c1, c2) = (kappa(k1), kappa(k2));
    [
        OscillatoryMode::sin(2 * k1, 2.0 * c1, -0.25 * kappa(2 * k1)),
        OscillatoryMode::sin(2 * k2, 2.0 * c2, -0.25 * kappa(2 * k2)),
        // cos((k₁-k₂)x - (κ₁-κ₂)τ) = cos(x - (κ₂-κ₁)τ); ½Λ gives ½κ(1) sin(...)
        OscillatoryMode::sin(1, c2 - c1, 0.5 * kappa(1)),
        OscillatoryMode::sin(k1 + k2, c1 + c2, -0.5 * kappa(k1 + k2)),
    ]
}

/// The four contributions to `u₁(t)`, each already scaled by `k₁^{2γ}`,
/// ordered as in [`product_sources`].
pub fn first_order_terms(params: &ExperimentParams, t: f64) -> [SpectralField; 4] {
    let scale = (params.k1 as f64).powf(2.0 * params.gamma);
    product_sources(params.k1).map(|m| oscillatory_integral(&m, t).scaled(scale))
}

/// `u₁(·, t)`, supported on `{1, 2k₁, 2k₁+1, 2k₁+2}` with cutoff `2k₁+2`.
pub fn first_order_term(params: &ExperimentParams, t: f64) -> SpectralField {
    let cutoff = 2 * params.k1 + 2;
    first_order_terms(params, t)
        .iter()
        .fold(SpectralField::zeros(cutoff), |acc, term| &acc + term)
}

/// `‖·‖_{-s}` of the difference-mode term alone, the predictor of the
/// `k₁^{2γ} t` growth of `u₁`.
pub fn leading_norm_prediction(params: &ExperimentParams, t: f64) -> f64 {
    let [_, _, leading, _] = first_order_terms(params, t);
    leading.sobolev_norm(SobolevIndex::negative(params.s))
}

/// `‖terms 1+2+4‖_{-s} / ‖term 3‖_{-s}`; tends to zero as `k₁` grows.
pub fn dominance_ratio(params: &ExperimentParams, t: f64) -> f64 {
    let [a, b, leading, d] = first_order_terms(params, t);
    let r = SobolevIndex::negative(params.s);
    let rest = &(&a + &b) + &d;
    rest.sobolev_norm(r) / leading.sobolev_norm(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{apply_lambda, propagate};

    fn params(k1: usize, gamma: f64) -> ExperimentParams {
        ExperimentParams {
            s: 1.0,
            gamma,
            mu: 1.8,
            k1,
            ..ExperimentParams::default()
        }
    }

    /// Adaptive Simpson on coefficient vectors.
    fn adaptive_simpson<F: Fn(f64) -> SpectralField + Copy>(f: F, a: f64, b: f64, tol: f64) -> SpectralField {
        fn rec<F: Fn(f64) -> SpectralField + Copy>(
            f: F,
            a: f64,
            b: f64,
            fa: &SpectralField,
            fm: &SpectralField,
            fb: &SpectralField,
            whole: &SpectralField,
            tol: f64,
            depth: u32,
        ) -> SpectralField {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let h = (b - a) / 12.0;
            let left = fa.axpy(4.0, &flm).axpy(1.0, fm).scaled(h);
            let right = fm.axpy(4.0, &frm).axpy(1.0, fb).scaled(h);
            let both = &left + &right;
            let err = both.max_abs_diff(whole);
            if depth == 0 || err <= 15.0 * tol {
                return both.axpy((1.0) / 15.0, &(&both - whole));
            }
            let l = rec(f, a, m, fa, &flm, fm, &left, 0.5 * tol, depth - 1);
            let r = rec(f, m, b, fm, &frm, fb, &right, 0.5 * tol, depth - 1);
            &l + &r
        }
        let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
        let whole = fa.axpy(4.0, &fm).axpy(1.0, &fb).scaled((b - a) / 6.0);
        rec(f, a, b, &fa, &fm, &fb, &whole, tol, 40)
    }

    #[test]
    fn non_resonant_sine_example() {
        let t = 0.7;
        let got = oscillatory_integral(&OscillatoryMode::sin(1, 0.0, 1.0), t);
        // 2[cos(x - t/2) - cos x]
        let mut expected = SpectralField::zeros(1);
        expected.set_mode(1, 2.0 * (0.5 * t).sin(), 2.0 * ((0.5 * t).cos() - 1.0));
        assert!(got.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn zero_time_gives_zero() {
        for mode in [OscillatoryMode::sin(3, 0.2, 1.5), OscillatoryMode::cos(5, -1.0, 2.0)] {
            assert_eq!(oscillatory_integral(&mode, 0.0).max_abs(), 0.0);
        }
        assert_eq!(first_order_term(&params(4, 0.5), 0.0).max_abs(), 0.0);
    }

    #[test]
    fn resonant_example_and_quadrature() {
        let mode = OscillatoryMode::sin(2, 0.4, 1.0);
        let got = oscillatory_integral(&mode, 0.3);
        let mut expected = SpectralField::zeros(2);
        expected.set_mode(2, 0.3 * 0.12f64.cos(), -0.3 * 0.12f64.sin());
        assert!(got.max_abs_diff(&expected) < 1e-15);
        let quad = adaptive_simpson(|tau| propagate(&mode.at(tau), 0.3 - tau), 0.0, 0.3, 1e-14);
        assert!(got.max_abs_diff(&quad) < 1e-10);
    }

    #[test]
    fn cosine_sources_match_quadrature() {
        for mode in [OscillatoryMode::cos(3, 0.05, 1.3), OscillatoryMode::cos(1, -0.7, -0.4)] {
            let t = 1.9;
            let quad = adaptive_simpson(|tau| propagate(&mode.at(tau), t - tau), 0.0, t, 1e-14);
            assert!(oscillatory_integral(&mode, t).max_abs_diff(&quad) < 1e-10);
        }
    }

    #[test]
    fn resonance_branch_is_continuous() {
        let t = 0.8;
        for phase in [Phase::Sin, Phase::Cos] {
            let k = 4;
            let resonant = oscillatory_integral(&OscillatoryMode { k, omega: kappa(k), phase, amplitude: 1.0 }, t);
            for delta in [1e-6, -1e-6] {
                let near = oscillatory_integral(
                    &OscillatoryMode { k, omega: kappa(k) + delta, phase, amplitude: 1.0 },
                    t,
                );
                assert!(near.max_abs_diff(&resonant) <= 1e-4);
            }
        }
    }

    #[test]
    fn time_derivative_reproduces_integrand() {
        // d/dt ∫₀ᵗ S(t-τ)m(τ)dτ = m(t) + Λ ∫₀ᵗ S(t-τ)m(τ)dτ
        let mode = OscillatoryMode::sin(3, 0.9, 1.2);
        let t = 1.1;
        let mut errs = Vec::new();
        for h in [1e-2, 5e-3] {
            let fwd = oscillatory_integral(&mode, t + h);
            let bwd = oscillatory_integral(&mode, t - h);
            let deriv = (&fwd - &bwd).scaled(0.5 / h);
            let rhs = &mode.at(t) + &apply_lambda(&oscillatory_integral(&mode, t));
            errs.push(deriv.max_abs_diff(&rhs));
        }
        let order = (errs[0] / errs[1]).log2();
        assert!((order - 2.0).abs() < 0.1, "order {order}");
    }

    #[test]
    fn support_of_first_order_term() {
        let u1 = first_order_term(&params(4, 0.5), 0.05);
        assert_eq!(u1.support(), vec![1, 8, 9, 10]);
        assert_eq!(u1.mean(), 0.0);
    }

    #[test]
    fn first_order_term_matches_duhamel_quadrature() {
        let p = params(4, 0.5);
        let t = 0.05;
        let u0 = crate::lab::build_initial_data(4, 0.5);
        let integrand = |tau: f64| {
            let v = propagate(&u0, tau);
            propagate(&apply_lambda(&v.multiply(&v)).scaled(0.5), t - tau)
        };
        let quad = adaptive_simpson(integrand, 0.0, t, 1e-14);
        assert!(first_order_term(&p, t).max_abs_diff(&quad) < 1e-10);
    }

    #[test]
    fn prediction_vanishes_at_zero() {
        assert_eq!(leading_norm_prediction(&params(16, 0.5), 0.0), 0.0);
    }

    #[test]
    fn prediction_scales_like_k1_to_two_gamma() {
        let gamma = 0.8;
        let t = 1e-3;
        let ks = [64.0f64, 128.0, 256.0];
        let ys: Vec<f64> = ks.iter().map(|&k| leading_norm_prediction(&params(k as usize, gamma), t)).collect();
        let slope = crate::stats::fit_log_log(&ks, &ys).slope;
        assert!((slope - 2.0 * gamma).abs() <= 0.05 * 2.0 * gamma, "slope {slope}");
    }

    #[test]
    fn prediction_dominates_full_norm() {
        let p = params(128, 0.8);
        let t0 = p.t0();
        let full = first_order_term(&p, t0).sobolev_norm(SobolevIndex::negative(1.0));
        let ratio = leading_norm_prediction(&p, t0) / full;
        assert!((0.8..=1.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn dominance_ratio_decreases() {
        let ratios: Vec<f64> = [32, 64, 128, 256]
            .iter()
            .map(|&k| {
                let p = params(k, 0.8);
                dominance_ratio(&p, p.t0())
            })
            .collect();
        assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
    }
}
