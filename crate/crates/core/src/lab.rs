//! The norm-inflation experiment.
//!
//! Data `u₀ = k₁^γ (sin k₁x + sin k₂x)` with `k₂ = k₁ + 1` is small in
//! `Ḣ^{-s}` (size `~k₁^{γ-s}`) when `0 < γ < s`. After the time
//! `T₀ = k₁^{-μγ}`, `μ > 3/2`, the first Duhamel iterate has grown to size
//! `~k₁^{2γ}T₀ = k₁^{γ(2-μ)}` while the remainder stays below `4A`, with
//!
//! ```text
//! A = C(T³k₁^{4γ} + T²k₁^{3γ}),   B = C(k₁^{2γ}T² + k₁^γ T).
//! ```
//!
//! [`run_experiment`] measures all of this on one `k₁`; [`run_sweep`] fits the
//! scaling laws across several; [`inflation_sequence`] searches for a
//! sequence of `k₁` whose solutions reach prescribed `Ḣ^{-s}` sizes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimates::{bootstrap_report, default_bilinear_constant, BootstrapReport};
use crate::export::{sig17, TableRow};
use crate::solver::{decompose, integrate_resolved, DecompositionSnapshot, Trajectory};
use crate::spectral::{SobolevIndex, SpectralField};
use crate::stats::{fit_log_log, SlopeFit};

/// Default doubling cap of the sequence search.
pub const DEFAULT_K1_CAP: usize = 4096;
/// Floor of the default cutoff rule `N = max(4(2k₁+2), 256)`.
pub const MIN_DEFAULT_CUTOFF: usize = 256;
/// How many times a run may double its cutoff on tail overflow.
pub const MAX_CUTOFF_DOUBLINGS: usize = 4;

/// Knobs of one experiment. `N`, `dt` and `T` fall back to the default
/// rules when absent; JSON keys match the field names (`N`, `T` upper case).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentParams {
    #[serde(serialize_with = "sig17")]
    pub s: f64,
    #[serde(serialize_with = "sig17")]
    pub gamma: f64,
    #[serde(serialize_with = "sig17")]
    pub mu: f64,
    pub k1: usize,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none", serialize_with = "crate::export::sig17_opt")]
    pub dt: Option<f64>,
    #[serde(
        rename = "T",
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::export::sig17_opt"
    )]
    pub horizon: Option<f64>,
    #[serde(default = "default_output_points")]
    pub output_points: usize,
}

fn default_output_points() -> usize {
    200
}

impl Default for ExperimentParams {
    /// `s = 1, γ = 0.8, μ = 1.8, k₁ = 64`, 200 output points.
    fn default() -> Self {
        ExperimentParams {
            s: 1.0,
            gamma: 0.8,
            mu: 1.8,
            k1: 64,
            cutoff: None,
            dt: None,
            horizon: None,
            output_points: default_output_points(),
        }
    }
}

impl ExperimentParams {
    pub fn with_k1(&self, k1: usize) -> Self {
        ExperimentParams {
            k1,
            cutoff: None,
            dt: None,
            horizon: None,
            ..self.clone()
        }
    }

    pub fn k2(&self) -> usize {
        self.k1 + 1
    }

    /// `T₀ = k₁^{-μγ}`.
    pub fn t0(&self) -> f64 {
        (self.k1 as f64).powf(-self.mu * self.gamma)
    }

    pub fn horizon(&self) -> f64 {
        self.horizon.unwrap_or_else(|| self.t0())
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
            .unwrap_or_else(|| (4 * (2 * self.k1 + 2)).max(MIN_DEFAULT_CUTOFF))
    }

    /// `min(T₀/200, 0.01/(1 + k₁^γ))` unless overridden.
    pub fn dt(&self) -> f64 {
        self.dt.unwrap_or_else(|| {
            (self.t0() / 200.0).min(0.01 / (1.0 + (self.k1 as f64).powf(self.gamma)))
        })
    }

    /// Copy with every default made explicit.
    pub fn resolved(&self) -> Self {
        ExperimentParams {
            cutoff: Some(self.cutoff()),
            dt: Some(self.dt()),
            horizon: Some(self.horizon()),
            ..self.clone()
        }
    }
}

/// Exponents of `k₁` whose signs the argument relies on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingExponents {
    /// `γ(4-3μ)`, first part of `A` at `T₀`
    #[serde(serialize_with = "sig17")]
    pub a_cubic: f64,
    /// `γ(3-2μ)`, second part of `A`
    #[serde(serialize_with = "sig17")]
    pub a_quadratic: f64,
    /// `2γ(1-μ)`, first part of `B`
    #[serde(serialize_with = "sig17")]
    pub b_quadratic: f64,
    /// `γ(1-μ)`, second part of `B`
    #[serde(serialize_with = "sig17")]
    pub b_linear: f64,
    /// `γ(2-μ)`, growth of `‖u₁(T₀)‖`
    #[serde(serialize_with = "sig17")]
    pub growth: f64,
    /// `γ-s`, decay of `‖u₀‖_{-s}`
    #[serde(serialize_with = "sig17")]
    pub initial: f64,
}

impl ScalingExponents {
    pub fn new(p: &ExperimentParams) -> Self {
        let (g, m) = (p.gamma, p.mu);
        ScalingExponents {
            a_cubic: g * (4.0 - 3.0 * m),
            a_quadratic: g * (3.0 - 2.0 * m),
            b_quadratic: 2.0 * g * (1.0 - m),
            b_linear: g * (1.0 - m),
            growth: g * (2.0 - m),
            initial: g - p.s,
        }
    }

    pub fn as_array(&self) -> [(&'static str, f64); 6] {
        [
            ("gamma(4-3mu)", self.a_cubic),
            ("gamma(3-2mu)", self.a_quadratic),
            ("2gamma(1-mu)", self.b_quadratic),
            ("gamma(1-mu)", self.b_linear),
            ("gamma(2-mu)", self.growth),
            ("gamma-s", self.initial),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedParams {
    pub params: ExperimentParams,
    pub exponents: ScalingExponents,
    pub warnings: Vec<String>,
}

fn invalid(key: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        key,
        reason: reason.into(),
    }
}

/// Checks the parameter invariants and fills in the defaults.
///
/// `μ ≥ 2` is accepted with a warning: `‖u₁(T₀)‖ ~ k₁^{γ(2-μ)}` no longer grows.
pub fn validate_params(p: &ExperimentParams) -> Result<ValidatedParams> {
    if !(p.s > 0.0 && p.s.is_finite()) {
        return Err(invalid("s", format!("must be positive and finite, got {}", p.s)));
    }
    if !(p.gamma > 0.0 && p.gamma < p.s) {
        return Err(Error::GammaOutOfRange { gamma: p.gamma, s: p.s });
    }
    if !(p.mu > 1.5 && p.mu.is_finite()) {
        return Err(Error::MuTooSmall { mu: p.mu });
    }
    if p.k1 == 0 {
        return Err(invalid("k1", "must be at least 1"));
    }
    if let Some(n) = p.cutoff {
        let needed = 2 * (2 * p.k1 + 2);
        if n < needed {
            return Err(invalid("N", format!("cutoff {n} is below 2(2k1+2) = {needed}")));
        }
    }
    if let Some(dt) = p.dt {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(invalid("dt", format!("must be positive, got {dt}")));
        }
    }
    if let Some(t) = p.horizon {
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid("T", format!("must be positive, got {t}")));
        }
    }
    if p.output_points == 0 {
        return Err(invalid("output_points", "must be at least 1"));
    }
    let mut warnings = Vec::new();
    if p.mu >= 2.0 {
        warnings.push(format!(
            "mu = {} >= 2: the first-order term no longer grows at T0 (exponent gamma(2-mu) = {})",
            p.mu,
            p.gamma * (2.0 - p.mu)
        ));
    }
    if p.horizon() > 1.0 {
        warnings.push(format!("horizon T = {} exceeds 1", p.horizon()));
    }
    Ok(ValidatedParams {
        params: p.resolved(),
        exponents: ScalingExponents::new(p),
        warnings,
    })
}

/// `k₁^γ (sin k₁x + sin (k₁+1)x)`, cutoff `k₁ + 1`.
pub fn build_initial_data(k1: usize, gamma: f64) -> SpectralField {
    assert!(k1 >= 1, "k1 must be positive");
    let amp = (k1 as f64).powf(gamma);
    let mut u0 = SpectralField::zeros(k1 + 1);
    u0.set_mode(k1, amp, 0.0);
    u0.set_mode(k1 + 1, amp, 0.0);
    u0
}

/// `(A, B)` at `T = p.horizon()`, each multiplied by `c_bil`.
pub fn bootstrap_constants(p: &ExperimentParams, c_bil: f64) -> (f64, f64) {
    let t = p.horizon();
    let k = p.k1 as f64;
    let g = p.gamma;
    let a = t.powi(3) * k.powf(4.0 * g) + t.powi(2) * k.powf(3.0 * g);
    let b = k.powf(2.0 * g) * t.powi(2) + k.powf(g) * t;
    (c_bil * a, c_bil * b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InitialNorms {
    #[serde(serialize_with = "sig17")]
    pub hms: f64,
    #[serde(rename = "L2", serialize_with = "sig17")]
    pub l2: f64,
}

/// Log-log slopes. In a single run they are taken against `t` over the
/// output grid; in a sweep against `k₁` at `t = T₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Slopes {
    /// `‖u₁‖_{-s}` (expected `1` against `t`, `γ(2-μ)` against `k₁`)
    pub u1_slope: SlopeFit,
    /// `‖u₀‖_{-s}` (expected `0` against `t`, `γ-s` against `k₁`)
    pub u0_slope: SlopeFit,
    /// `‖u‖_{-s}/‖u₀‖_{-s}`
    pub inflation_slope: SlopeFit,
}

#[derive(Debug, Clone, Serialize)]
pub struct InflationReport {
    pub params: ExperimentParams,
    pub initial_norms: InitialNorms,
    pub bootstrap: BootstrapReport,
    #[serde(serialize_with = "sig17")]
    pub inflation_ratio: f64,
    #[serde(serialize_with = "sig17")]
    pub c_bil: f64,
    pub exponents: ScalingExponents,
    pub warnings: Vec<String>,
    pub table: Vec<TableRow>,
    pub slopes: Slopes,
    #[serde(skip)]
    pub trajectory: Trajectory,
    #[serde(skip)]
    pub snapshots: Vec<DecompositionSnapshot>,
}

impl InflationReport {
    /// `‖u(T)‖_{-s}` at the last output time.
    pub fn final_norm(&self) -> f64 {
        self.table.last().map(|r| r.norm_hms).unwrap_or(0.0)
    }

    /// `‖u₁(T)‖_{-s}` at the last output time.
    pub fn final_u1_norm(&self) -> f64 {
        self.table.last().map(|r| r.norm_u1).unwrap_or(0.0)
    }

    /// `sup_t ‖y‖₀ / sup_t ‖u₁‖₀` over the output grid.
    pub fn remainder_to_u1_ratio(&self) -> f64 {
        let y = self.snapshots.iter().map(|s| s.norms.y.l2).fold(0.0, f64::max);
        let u1 = self.snapshots.iter().map(|s| s.norms.u1.l2).fold(0.0, f64::max);
        y / u1
    }
}

pub fn table_rows(snaps: &[DecompositionSnapshot]) -> Vec<TableRow> {
    snaps
        .iter()
        .map(|s| TableRow {
            t: s.t,
            norm_l2: s.norms.u.l2,
            norm_hms: s.norms.u.hms,
            norm_su0: s.norms.su0.hms,
            norm_u1: s.norms.u1.hms,
            norm_y: s.norms.y.hms,
            ratio_y_u1: if s.norms.u1.l2 > 0.0 {
                s.norms.y.l2 / s.norms.u1.l2
            } else {
                0.0
            },
        })
        .collect()
}

fn time_slopes(rows: &[TableRow], u0_norm: f64) -> Slopes {
    let pts: Vec<&TableRow> = rows.iter().filter(|r| r.t > 0.0 && r.norm_u1 > 0.0).collect();
    if pts.len() < 2 {
        let nan = SlopeFit {
            slope: f64::NAN,
            intercept: f64::NAN,
            half_width: None,
        };
        return Slopes {
            u1_slope: nan,
            u0_slope: nan,
            inflation_slope: nan,
        };
    }
    let t: Vec<f64> = pts.iter().map(|r| r.t).collect();
    let col = |f: fn(&TableRow) -> f64| pts.iter().map(|r| f(r)).collect::<Vec<_>>();
    Slopes {
        u1_slope: fit_log_log(&t, &col(|r| r.norm_u1)),
        u0_slope: fit_log_log(&t, &col(|r| r.norm_su0)),
        inflation_slope: fit_log_log(&t, &pts.iter().map(|r| r.norm_hms / u0_norm).collect::<Vec<_>>()),
    }
}

/// Full pipeline on one parameter set with the default `C_bil`.
pub fn run_experiment(p: &ExperimentParams) -> Result<InflationReport> {
    run_experiment_with(p, default_bilinear_constant())
}

/// Full pipeline with an explicit bilinear constant.
pub fn run_experiment_with(p: &ExperimentParams, c_bil: f64) -> Result<InflationReport> {
    let validated = validate_params(p)?;
    let trajectory = integrate_resolved(p, MAX_CUTOFF_DOUBLINGS)?;
    let params = trajectory.params.resolved();
    let snapshots = decompose(&trajectory);
    let table = table_rows(&snapshots);
    let u0 = trajectory.initial();
    let initial_norms = InitialNorms {
        hms: u0.sobolev_norm(SobolevIndex::negative(params.s)),
        l2: u0.l2_norm(),
    };
    let (a, b) = bootstrap_constants(&params, c_bil);
    let y_measured = snapshots.iter().map(|s| s.norms.y.l2).fold(0.0, f64::max);
    let bootstrap = bootstrap_report(a, b, params.horizon(), y_measured);
    let inflation_ratio = table.last().expect("nonempty grid").norm_hms / initial_norms.hms;
    let slopes = time_slopes(&table, initial_norms.hms);
    Ok(InflationReport {
        params,
        initial_norms,
        bootstrap,
        inflation_ratio,
        c_bil,
        exponents: validated.exponents,
        warnings: validated.warnings,
        table,
        slopes,
        trajectory,
        snapshots,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub k1: Vec<usize>,
    #[serde(serialize_with = "crate::export::sig17_vec")]
    pub u_final: Vec<f64>,
    #[serde(serialize_with = "crate::export::sig17_vec")]
    pub u1_final: Vec<f64>,
    #[serde(serialize_with = "crate::export::sig17_vec")]
    pub u0_norm: Vec<f64>,
    #[serde(serialize_with = "crate::export::sig17_vec")]
    pub inflation_ratio: Vec<f64>,
    pub slopes: Slopes,
    #[serde(skip)]
    pub reports: Vec<InflationReport>,
}

/// Runs `base` at each `k₁` (defaults for `N`, `dt`, `T` re-derived per
/// point) on up to `jobs` threads, then fits the `k₁` scaling slopes.
pub fn run_sweep(base: &ExperimentParams, k1_list: &[usize], jobs: usize) -> Result<SweepReport> {
    if k1_list.len() < 2 {
        return Err(invalid("k1-list", "a sweep needs at least two k1 values"));
    }
    let c_bil = default_bilinear_constant();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| invalid("jobs", e.to_string()))?;
    let reports: Vec<InflationReport> = pool.install(|| {
        k1_list
            .par_iter()
            .map(|&k1| run_experiment_with(&base.with_k1(k1), c_bil))
            .collect::<Result<Vec<_>>>()
    })?;
    let k: Vec<f64> = k1_list.iter().map(|&k| k as f64).collect();
    let u_final: Vec<f64> = reports.iter().map(|r| r.final_norm()).collect();
    let u1_final: Vec<f64> = reports.iter().map(|r| r.final_u1_norm()).collect();
    let u0_norm: Vec<f64> = reports.iter().map(|r| r.initial_norms.hms).collect();
    let inflation_ratio: Vec<f64> = reports.iter().map(|r| r.inflation_ratio).collect();
    let slopes = Slopes {
        u1_slope: fit_log_log(&k, &u1_final),
        u0_slope: fit_log_log(&k, &u0_norm),
        inflation_slope: fit_log_log(&k, &inflation_ratio),
    };
    Ok(SweepReport {
        k1: k1_list.to_vec(),
        u_final,
        u1_final,
        u0_norm,
        inflation_ratio,
        slopes,
        reports,
    })
}

/// Settings of the sequence search.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceSearch {
    pub base: ExperimentParams,
    /// First `k₁` tried.
    pub start_k1: usize,
    /// Largest admissible `k₁`.
    pub cap: usize,
}

impl Default for SequenceSearch {
    fn default() -> Self {
        SequenceSearch {
            base: ExperimentParams::default(),
            start_k1: 64,
            cap: DEFAULT_K1_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SequenceEntry {
    pub k1: usize,
    #[serde(rename = "T", serialize_with = "sig17")]
    pub t: f64,
    #[serde(serialize_with = "sig17")]
    pub target: f64,
    #[serde(serialize_with = "sig17")]
    pub achieved_norm: f64,
    #[serde(serialize_with = "sig17")]
    pub initial_norm: f64,
}

/// `‖u(·, T₀)‖_{-s}` for the data of `p`.
pub fn final_norm(p: &ExperimentParams) -> Result<(f64, f64)> {
    validate_params(p)?;
    let traj = integrate_resolved(p, MAX_CUTOFF_DOUBLINGS)?;
    let r = SobolevIndex::negative(p.s);
    Ok((traj.last().1.sobolev_norm(r), traj.initial().sobolev_norm(r)))
}

/// Doubling search: for each target in turn, `k₁` doubles (starting from
/// `start_k1`, then from twice the previous hit) until `‖u(·,T₀)‖_{-s}`
/// reaches the target. Every entry therefore has a strictly larger `k₁` and
/// strictly smaller `T₀` than the one before.
pub fn inflation_sequence(s: f64, targets: &[f64], search: &SequenceSearch) -> Result<Vec<SequenceEntry>> {
    if targets.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(invalid("targets", "targets must be positive"));
    }
    if targets.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("targets", "targets must be increasing"));
    }
    if search.start_k1 == 0 {
        return Err(invalid("k1", "start value must be at least 1"));
    }
    let mut base = search.base.clone();
    base.s = s;
    base.output_points = 2;
    let mut out = Vec::with_capacity(targets.len());
    let mut k1 = search.start_k1;
    for &target in targets {
        loop {
            if k1 > search.cap {
                return Err(Error::TargetUnreachable { target, cap: search.cap });
            }
            let p = base.with_k1(k1);
            let (achieved, initial) = final_norm(&p)?;
            if achieved >= target {
                out.push(SequenceEntry {
                    k1,
                    t: p.t0(),
                    target,
                    achieved_norm: achieved,
                    initial_norm: initial,
                });
                k1 *= 2;
                break;
            }
            k1 *= 2;
        }
    }
    Ok(out)
}
