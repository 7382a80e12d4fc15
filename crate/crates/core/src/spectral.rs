//! Real trigonometric polynomials on the period domain `[0, 2π]`.
//!
//! A field is stored as
//!
//! ```text
//! f(x) = mean + Σ_{k=1}^{N} (f_k sin kx + g_k cos kx)
//! ```
//!
//! and the homogeneous Sobolev norm of index `r` is
//! `‖f‖_r = ( Σ_k k^{2r} (f_k² + g_k²) )^{1/2}`. The mean never contributes.
//! The integral `L²` norm over one period differs from `‖f‖_0` by `√π`; that
//! factor only shows up in [`crate::solver::conserved_quantities`].

use std::cell::RefCell;
use std::ops::{Add, Mul, Neg, Sub};

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Above this cutoff products go through an oversampled FFT grid instead of
/// the direct product-to-sum convolution.
pub const EXACT_PRODUCT_MAX_CUTOFF: usize = 512;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Index `r` of the homogeneous Sobolev norm. Any finite real is allowed.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SobolevIndex(f64);

impl SobolevIndex {
    pub const L2: SobolevIndex = SobolevIndex(0.0);

    /// Panics on a non-finite index.
    pub fn new(r: f64) -> Self {
        assert!(r.is_finite(), "Sobolev index must be finite, got {r}");
        SobolevIndex(r)
    }

    /// The index `-s`.
    pub fn negative(s: f64) -> Self {
        Self::new(-s)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A 2π-periodic real trigonometric polynomial with cutoff `N`.
#[derive(Debug, Clone)]
pub struct SpectralField {
    mean: f64,
    sines: Vec<f64>,
    cosines: Vec<f64>,
}

impl SpectralField {
    pub fn zeros(cutoff: usize) -> Self {
        SpectralField {
            mean: 0.0,
            sines: vec![0.0; cutoff],
            cosines: vec![0.0; cutoff],
        }
    }

    /// Builds a field from its coefficient arrays; `sines[k-1]` is `f_k`.
    pub fn from_parts(mean: f64, sines: Vec<f64>, cosines: Vec<f64>) -> Result<Self> {
        if sines.len() != cosines.len() {
            return Err(Error::InvalidParameter {
                key: "coefficients",
                reason: format!(
                    "sine and cosine arrays differ in length ({} vs {})",
                    sines.len(),
                    cosines.len()
                ),
            });
        }
        if !mean.is_finite() || sines.iter().chain(&cosines).any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter {
                key: "coefficients",
                reason: "all coefficients must be finite".into(),
            });
        }
        Ok(SpectralField { mean, sines, cosines })
    }

    pub fn constant(value: f64) -> Self {
        SpectralField {
            mean: value,
            sines: Vec::new(),
            cosines: Vec::new(),
        }
    }

    /// `amplitude · sin(kx)` with cutoff `k`.
    pub fn sine_mode(k: usize, amplitude: f64) -> Self {
        assert!(k >= 1, "wavenumber must be positive");
        let mut f = Self::zeros(k);
        f.sines[k - 1] = amplitude;
        f
    }

    /// `amplitude · cos(kx)` with cutoff `k`.
    pub fn cosine_mode(k: usize, amplitude: f64) -> Self {
        assert!(k >= 1, "wavenumber must be positive");
        let mut f = Self::zeros(k);
        f.cosines[k - 1] = amplitude;
        f
    }

    pub fn cutoff(&self) -> usize {
        self.sines.len()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn set_mean(&mut self, mean: f64) {
        self.mean = mean;
    }

    /// `f_k`, zero beyond the cutoff.
    pub fn sine(&self, k: usize) -> f64 {
        assert!(k >= 1, "wavenumber must be positive");
        self.sines.get(k - 1).copied().unwrap_or(0.0)
    }

    /// `g_k`, zero beyond the cutoff.
    pub fn cosine(&self, k: usize) -> f64 {
        assert!(k >= 1, "wavenumber must be positive");
        self.cosines.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn sines(&self) -> &[f64] {
        &self.sines
    }

    pub fn cosines(&self) -> &[f64] {
        &self.cosines
    }

    /// Sets the pair `(f_k, g_k)`, growing the cutoff if needed.
    pub fn set_mode(&mut self, k: usize, sine: f64, cosine: f64) {
        assert!(k >= 1, "wavenumber must be positive");
        if k > self.cutoff() {
            self.sines.resize(k, 0.0);
            self.cosines.resize(k, 0.0);
        }
        self.sines[k - 1] = sine;
        self.cosines[k - 1] = cosine;
    }

    /// Iterator over `(k, f_k, g_k)`.
    pub fn modes(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.sines
            .iter()
            .zip(&self.cosines)
            .enumerate()
            .map(|(i, (&f, &g))| (i + 1, f, g))
    }

    pub(crate) fn modes_mut(&mut self) -> impl Iterator<Item = (usize, &mut f64, &mut f64)> {
        self.sines
            .iter_mut()
            .zip(self.cosines.iter_mut())
            .enumerate()
            .map(|(i, (f, g))| (i + 1, f, g))
    }

    /// Zero-pads (never truncates) to at least `cutoff` modes.
    pub fn padded(&self, cutoff: usize) -> Self {
        let mut out = self.clone();
        if cutoff > out.cutoff() {
            out.sines.resize(cutoff, 0.0);
            out.cosines.resize(cutoff, 0.0);
        }
        out
    }

    /// Galerkin projection onto modes `k ≤ cutoff` (zero-pads if shorter).
    pub fn truncated(&self, cutoff: usize) -> Self {
        let mut out = self.padded(cutoff);
        out.sines.truncate(cutoff);
        out.cosines.truncate(cutoff);
        out
    }

    /// Same field with the mean removed.
    pub fn without_mean(&self) -> Self {
        let mut out = self.clone();
        out.mean = 0.0;
        out
    }

    /// Indices of modes with a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.modes()
            .filter(|&(_, f, g)| f != 0.0 || g != 0.0)
            .map(|(k, _, _)| k)
            .collect()
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        SpectralField {
            mean: alpha * self.mean,
            sines: self.sines.iter().map(|c| alpha * c).collect(),
            cosines: self.cosines.iter().map(|c| alpha * c).collect(),
        }
    }

    /// `self + alpha · other`, result cutoff is the larger of the two.
    pub fn axpy(&self, alpha: f64, other: &SpectralField) -> Self {
        let mut out = self.padded(other.cutoff());
        out.mean += alpha * other.mean;
        for (i, (f, g)) in other.sines.iter().zip(&other.cosines).enumerate() {
            out.sines[i] += alpha * f;
            out.cosines[i] += alpha * g;
        }
        out
    }

    /// Largest absolute coefficient difference after zero-padding.
    pub fn max_abs_diff(&self, other: &SpectralField) -> f64 {
        let n = self.cutoff().max(other.cutoff());
        let mut worst = (self.mean - other.mean).abs();
        for k in 1..=n {
            worst = worst
                .max((self.sine(k) - other.sine(k)).abs())
                .max((self.cosine(k) - other.cosine(k)).abs());
        }
        worst
    }

    /// Largest absolute coefficient, mean included.
    pub fn max_abs(&self) -> f64 {
        self.sines
            .iter()
            .chain(&self.cosines)
            .fold(self.mean.abs(), |m, c| m.max(c.abs()))
    }

    pub fn sobolev_norm(&self, r: SobolevIndex) -> f64 {
        let r = r.value();
        self.modes()
            .map(|(k, f, g)| (k as f64).powf(2.0 * r) * (f * f + g * g))
            .sum::<f64>()
            .sqrt()
    }

    /// `‖·‖_0`, the coefficient norm of the mean-free part.
    pub fn l2_norm(&self) -> f64 {
        self.modes().map(|(_, f, g)| f * f + g * g).sum::<f64>().sqrt()
    }

    /// Sum of `f_k² + g_k²` over `k > from`.
    pub fn tail_energy(&self, from: usize) -> f64 {
        self.modes()
            .skip(from)
            .map(|(_, f, g)| f * f + g * g)
            .sum()
    }

    /// Product of two fields. Dispatches to the exact convolution for small
    /// cutoffs and to the oversampled grid otherwise; result cutoff is
    /// `N_a + N_b`.
    pub fn multiply(&self, other: &SpectralField) -> SpectralField {
        if self.cutoff().max(other.cutoff()) < EXACT_PRODUCT_MAX_CUTOFF {
            self.multiply_exact(other)
        } else {
            self.multiply_grid(other)
        }
    }

    /// Product via the product-to-sum identities, `O(N_a N_b)`.
    pub fn multiply_exact(&self, other: &SpectralField) -> SpectralField {
        let n = self.cutoff() + other.cutoff();
        let mut acc = Accumulator::new(n);
        acc.mean += self.mean * other.mean;
        for (k, f, g) in other.modes() {
            acc.add_sin(k as isize, self.mean * f);
            acc.add_cos(k as isize, self.mean * g);
        }
        for (k, f, g) in self.modes() {
            acc.add_sin(k as isize, other.mean * f);
            acc.add_cos(k as isize, other.mean * g);
        }
        for (j, fa, ga) in self.modes() {
            if fa == 0.0 && ga == 0.0 {
                continue;
            }
            for (k, fb, gb) in other.modes() {
                let (j, k) = (j as isize, k as isize);
                // sin a sin b = ½[cos(a-b) - cos(a+b)]
                // cos a cos b = ½[cos(a-b) + cos(a+b)]
                // sin a cos b = ½[sin(a+b) + sin(a-b)]
                let ss = 0.5 * fa * fb;
                let cc = 0.5 * ga * gb;
                let sc = 0.5 * fa * gb;
                let cs = 0.5 * ga * fb;
                acc.add_cos(j - k, ss + cc);
                acc.add_cos(j + k, cc - ss);
                acc.add_sin(j + k, sc + cs);
                acc.add_sin(j - k, sc - cs);
            }
        }
        acc.finish()
    }

    /// Product via pointwise multiplication on a grid of at least
    /// `2(N_a + N_b) + 1` points, so the result is alias-free.
    pub fn multiply_grid(&self, other: &SpectralField) -> SpectralField {
        let n = self.cutoff() + other.cutoff();
        let m = (2 * n + 1).next_power_of_two();
        let mut a = self.grid_values_complex(m);
        let b = other.grid_values_complex(m);
        for (x, y) in a.iter_mut().zip(&b) {
            *x = Complex::new(x.re * y.re, 0.0);
        }
        from_grid_spectrum(a, n)
    }

    /// Values at `x_j = 2πj/n`, `j = 0..n`. Modes above `n/2` alias.
    pub fn sample(&self, n: usize) -> Vec<f64> {
        assert!(n >= 1, "need at least one sample point");
        self.grid_values_complex(n).into_iter().map(|z| z.re).collect()
    }

    /// Inverse of [`SpectralField::sample`]: recovers a field of the given
    /// cutoff from `n ≥ 2·cutoff + 1` equispaced samples.
    pub fn analyze(samples: &[f64], cutoff: usize) -> Result<SpectralField> {
        if samples.len() < 2 * cutoff + 1 {
            return Err(Error::InvalidParameter {
                key: "samples",
                reason: format!(
                    "{} samples cannot resolve cutoff {cutoff} (need {})",
                    samples.len(),
                    2 * cutoff + 1
                ),
            });
        }
        let buf = samples.iter().map(|&v| Complex::new(v, 0.0)).collect();
        Ok(from_grid_spectrum(buf, cutoff))
    }

    /// Complex spectrum folded onto `n` bins followed by an inverse DFT.
    fn grid_values_complex(&self, n: usize) -> Vec<Complex<f64>> {
        let mut buf = vec![Complex::new(0.0, 0.0); n];
        buf[0].re += self.mean;
        for (k, f, g) in self.modes() {
            // f sin kx + g cos kx = c e^{ikx} + c̄ e^{-ikx},  c = (g - i f)/2
            let c = Complex::new(0.5 * g, -0.5 * f);
            buf[k % n] += c;
            buf[(n - k % n) % n] += c.conj();
        }
        PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n).process(&mut buf));
        buf
    }
}

/// Forward DFT of grid values and read-off of modes `0..=cutoff`.
fn from_grid_spectrum(mut buf: Vec<Complex<f64>>, cutoff: usize) -> SpectralField {
    let m = buf.len();
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(m).process(&mut buf));
    let scale = 1.0 / m as f64;
    let mut out = SpectralField::zeros(cutoff);
    out.mean = buf[0].re * scale;
    for k in 1..=cutoff {
        let c = buf[k] * scale;
        out.sines[k - 1] = -2.0 * c.im;
        out.cosines[k - 1] = 2.0 * c.re;
    }
    out
}

/// Collects signed-wavenumber contributions, folding negative ones onto
/// positive modes with `sin(-kx) = -sin kx`, `cos(-kx) = cos kx`.
struct Accumulator {
    mean: f64,
    field: SpectralField,
}

impl Accumulator {
    fn new(cutoff: usize) -> Self {
        Accumulator {
            mean: 0.0,
            field: SpectralField::zeros(cutoff),
        }
    }

    fn add_sin(&mut self, k: isize, c: f64) {
        match k {
            0 => {}
            k if k > 0 => self.field.sines[k as usize - 1] += c,
            k => self.field.sines[(-k) as usize - 1] -= c,
        }
    }

    fn add_cos(&mut self, k: isize, c: f64) {
        if k == 0 {
            self.mean += c;
        } else {
            self.field.cosines[k.unsigned_abs() - 1] += c;
        }
    }

    fn finish(mut self) -> SpectralField {
        self.field.mean = self.mean;
        self.field
    }
}

/// Exact equality after zero-padding to the larger cutoff.
impl PartialEq for SpectralField {
    fn eq(&self, other: &Self) -> bool {
        let n = self.cutoff().max(other.cutoff());
        self.mean == other.mean
            && (1..=n).all(|k| self.sine(k) == other.sine(k) && self.cosine(k) == other.cosine(k))
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(-1.0, rhs)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scaled(-1.0)
    }
}

impl Mul<&SpectralField> for f64 {
    type Output = SpectralField;
    fn mul(self, rhs: &SpectralField) -> SpectralField {
        rhs.scaled(self)
    }
}
