//! Independent reference computations shared by the integration tests.
//!
//! Nothing here goes through the library's products, operators or closed
//! forms: fields are plain `(sine, cosine)` coefficient vectors, squares are
//! taken pointwise on a grid and transformed back by direct summation.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Coefficients `(f_k, g_k)` for `k = 1..=len`, mean omitted.
pub type Coeffs = Vec<(f64, f64)>;

pub fn dispersion(k: usize) -> f64 {
    let k = k as f64;
    k / (1.0 + k * k)
}

/// `S(t)` on raw coefficients: mode `k` moves by `κ_k t`.
pub fn rotate(c: &Coeffs, t: f64) -> Coeffs {
    c.iter()
        .enumerate()
        .map(|(i, &(f, g))| {
            let th = dispersion(i + 1) * t;
            let (s, co) = th.sin_cos();
            (f * co + g * s, g * co - f * s)
        })
        .collect()
}

pub fn eval(c: &Coeffs, x: f64) -> f64 {
    c.iter()
        .enumerate()
        .map(|(i, &(f, g))| {
            let kx = (i + 1) as f64 * x;
            f * kx.sin() + g * kx.cos()
        })
        .sum()
}

/// `½Λ(w²)` up to mode `kmax`, `w²` sampled on `m` points and transformed
/// by direct sums. Exact when `m > 2·kmax` and `w` has modes `≤ kmax/2`.
pub fn half_lambda_square(w: &Coeffs, kmax: usize, m: usize) -> Coeffs {
    let sq: Vec<f64> = (0..m)
        .map(|j| {
            let v = eval(w, 2.0 * PI * j as f64 / m as f64);
            v * v
        })
        .collect();
    (1..=kmax)
        .map(|k| {
            let (mut f, mut g) = (0.0, 0.0);
            for (j, v) in sq.iter().enumerate() {
                let kx = 2.0 * PI * (k * j) as f64 / m as f64;
                f += v * kx.sin();
                g += v * kx.cos();
            }
            let (f, g) = (2.0 * f / m as f64, 2.0 * g / m as f64);
            let kap = dispersion(k);
            (0.5 * kap * g, -0.5 * kap * f)
        })
        .collect()
}

fn flatten(c: &Coeffs) -> Vec<f64> {
    c.iter().flat_map(|&(f, g)| [f, g]).collect()
}

fn simpson_step(a: f64, fa: &[f64], b: f64, fb: &[f64], fm: &[f64]) -> Vec<f64> {
    let h = (b - a) / 6.0;
    fa.iter().zip(fm).zip(fb).map(|((x, m), y)| h * (x + 4.0 * m + y)).collect()
}

/// Adaptive Simpson quadrature of a vector-valued integrand; the error
/// test uses the max-norm of the componentwise Richardson estimate.
pub fn adaptive_simpson<F: Fn(f64) -> Vec<f64>>(f: &F, a: f64, b: f64, tol: f64) -> Vec<f64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson_step(a, &fa, b, &fb, &fm);
    recurse(f, a, &fa, b, &fb, m, &fm, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> Vec<f64>>(
    f: &F,
    a: f64,
    fa: &[f64],
    b: f64,
    fb: &[f64],
    m: f64,
    fm: &[f64],
    whole: Vec<f64>,
    tol: f64,
    depth: usize,
) -> Vec<f64> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_step(a, fa, m, fm, &flm);
    let right = simpson_step(m, fm, b, fb, &frm);
    let err = left
        .iter()
        .zip(&right)
        .zip(&whole)
        .map(|((l, r), w)| (l + r - w).abs())
        .fold(0.0, f64::max);
    if depth == 0 || err <= 15.0 * tol {
        return left
            .iter()
            .zip(&right)
            .zip(&whole)
            .map(|((l, r), w)| l + r + (l + r - w) / 15.0)
            .collect();
    }
    let mut out = recurse(f, a, fa, m, fm, lm, &flm, left, 0.5 * tol, depth - 1);
    let rhs = recurse(f, m, fm, b, fb, rm, &frm, right, 0.5 * tol, depth - 1);
    for (o, r) in out.iter_mut().zip(rhs) {
        *o += r;
    }
    out
}

/// `k₁^γ (sin k₁x + sin (k₁+1)x)` as raw coefficients up to `k₁ + 1`.
pub fn two_mode_data(k1: usize, gamma: f64) -> Coeffs {
    let amp = (k1 as f64).powf(gamma);
    let mut c = vec![(0.0, 0.0); k1 + 1];
    c[k1 - 1].0 = amp;
    c[k1].0 = amp;
    c
}

/// `∫₀ᵗ S(t-τ) ½Λ[(S(τ)u₀)²] dτ` by adaptive quadrature, coefficients
/// `1..=2(k₁+1)`.
pub fn first_iterate_by_quadrature(k1: usize, gamma: f64, t: f64, tol: f64) -> Coeffs {
    let u0 = two_mode_data(k1, gamma);
    let kmax = 2 * (k1 + 1);
    let m = 2 * kmax + 4;
    let integrand = |tau: f64| {
        let w = rotate(&u0, tau);
        flatten(&rotate(&half_lambda_square(&w, kmax, m), t - tau))
    };
    let flat = adaptive_simpson(&integrand, 0.0, t, tol);
    flat.chunks(2).map(|p| (p[0], p[1])).collect()
}

/// `Σ k^{2r}(f_k² + g_k²)` square-rooted.
pub fn sobolev(c: &Coeffs, r: f64) -> f64 {
    c.iter()
        .enumerate()
        .map(|(i, &(f, g))| ((i + 1) as f64).powf(2.0 * r) * (f * f + g * g))
        .sum::<f64>()
        .sqrt()
}

/// `∫(u² + u_x²) dx` of a mean-zero field.
pub fn energy(c: &Coeffs) -> f64 {
    PI * c
        .iter()
        .enumerate()
        .map(|(i, &(f, g))| (1.0 + ((i + 1) * (i + 1)) as f64) * (f * f + g * g))
        .sum::<f64>()
}

/// Ordinary least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
