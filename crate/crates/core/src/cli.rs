//! Command-line front end of `bbm-inflate`.
//!
//! Precedence is flags over config file over defaults. The config file is
//! JSON whose keys are exactly the [`ExperimentParams`] field names
//! (`s`, `gamma`, `mu`, `k1`, `N`, `dt`, `T`, `output_points`); flags use the
//! same names in kebab case (`--output-points`, `--N`, `--T`).
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 runtime failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::error::Error;
use crate::estimates::{bilinear_probe, DEFAULT_PROBE_CUTOFF, DEFAULT_PROBE_TRIALS};
use crate::export::{save_dat, save_json, save_table_csv, write_coefficients, write_probe_csv};
use crate::lab::{
    inflation_sequence, run_experiment, run_sweep, validate_params, ExperimentParams, InflationReport, SequenceSearch,
    DEFAULT_K1_CAP,
};
use crate::solver::{conserved_drift, decompose, galerkin_oracle, integrate_resolved};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// Sup-distance the `oracle-check` command must stay under.
pub const ORACLE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "bbm-inflate", version, about = "Norm-inflation experiments for the periodic BBM equation")]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Debug, Clone, Args)]
struct CommonArgs {
    /// JSON file with experiment parameters
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    k1: Option<usize>,
    /// Spectral cutoff (number of Fourier modes)
    #[arg(long = "N", alias = "n")]
    cutoff: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    /// Time horizon (defaults to T0 = k1^(-mu*gamma))
    #[arg(long = "T", alias = "t")]
    horizon: Option<f64>,
    #[arg(long)]
    output_points: Option<usize>,
    #[arg(long, default_value = "bbm-out")]
    output_dir: PathBuf,
    /// Write gnuplot-ready .dat series
    #[arg(long)]
    emit_plots: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Concurrent runs for `sweep`
    #[arg(long, env = "BBM_INFLATE_JOBS")]
    jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum CommandArgs {
    /// Integrate one parameter set and dump the trajectory
    Simulate(CommonArgs),
    /// Run the full inflation experiment for one k1
    Inflate(CommonArgs),
    /// Run the experiment across several k1 and fit scaling slopes
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_delimiter = ',', default_values_t = vec![64usize, 128, 256])]
        k1_list: Vec<usize>,
    },
    /// Search doubling k1 values reaching increasing H^-s targets
    Sequence {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5f64, 1.0])]
        targets: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_K1_CAP)]
        cap: usize,
        #[arg(long, default_value_t = 64)]
        start_k1: usize,
    },
    /// Estimate the bilinear constant from random polynomials
    VerifyBilinear {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 0.0)]
        q: f64,
        #[arg(long, default_value_t = DEFAULT_PROBE_TRIALS)]
        trials: usize,
        /// Cutoff of the random polynomials
        #[arg(long, default_value_t = DEFAULT_PROBE_CUTOFF)]
        probe_n: usize,
    },
    /// Cross-check the solver against the Galerkin oracle on a small case
    OracleCheck(CommonArgs),
}

/// Parameter overrides read from a config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamOverrides {
    s: Option<f64>,
    gamma: Option<f64>,
    mu: Option<f64>,
    k1: Option<usize>,
    #[serde(rename = "N")]
    cutoff: Option<usize>,
    dt: Option<f64>,
    #[serde(rename = "T")]
    horizon: Option<f64>,
    output_points: Option<usize>,
}

impl ParamOverrides {
    fn apply(self, p: &mut ExperimentParams) {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { p.$f = v; } )* };
        }
        take!(s, gamma, mu, k1, output_points);
        if self.cutoff.is_some() {
            p.cutoff = self.cutoff;
        }
        if self.dt.is_some() {
            p.dt = self.dt;
        }
        if self.horizon.is_some() {
            p.horizon = self.horizon;
        }
    }
}

impl From<&CommonArgs> for ParamOverrides {
    fn from(a: &CommonArgs) -> Self {
        ParamOverrides {
            s: a.s,
            gamma: a.gamma,
            mu: a.mu,
            k1: a.k1,
            cutoff: a.cutoff,
            dt: a.dt,
            horizon: a.horizon,
            output_points: a.output_points,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Simulate,
    Inflate,
    Sweep { k1_list: Vec<usize> },
    Sequence { targets: Vec<f64>, cap: usize, start_k1: usize },
    VerifyBilinear { q: f64, trials: usize, cutoff: usize },
    OracleCheck,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Inflate => "inflate",
            Command::Sweep { .. } => "sweep",
            Command::Sequence { .. } => "sequence",
            Command::VerifyBilinear { .. } => "verify-bilinear",
            Command::OracleCheck => "oracle-check",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Validated, with defaults made explicit.
    pub params: ExperimentParams,
    pub output_dir: PathBuf,
    pub emit_plots: bool,
    pub seed: u64,
    pub jobs: usize,
}

#[derive(Debug)]
pub enum ConfigError {
    /// Usage error or help/version request from the argument parser.
    Usage(clap::Error),
    /// A parameter broke an invariant.
    Invalid(Error),
    /// Unreadable or malformed config file.
    File { path: PathBuf, reason: String },
}

impl ConfigError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ConfigError::Usage(e) if !e.use_stderr() => EXIT_OK,
            _ => EXIT_CONFIG,
        }
    }
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Usage(e) => write!(f, "{e}"),
            ConfigError::Invalid(e) => write!(f, "invalid configuration ({}): {e}", e.name()),
            ConfigError::File { path, reason } => write!(f, "config file {}: {reason}", path.display()),
        }
    }
}

fn read_overrides(path: &Path) -> Result<ParamOverrides, ConfigError> {
    let text = fs::read_to_string(path).map_err(|e| ConfigError::File {
        path: path.to_owned(),
        reason: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| ConfigError::File {
        path: path.to_owned(),
        reason: e.to_string(),
    })
}

/// Parses `args` (program name first) with an optional config file. A
/// `--config` flag takes precedence over `file`.
pub fn parse_config<I, T>(args: I, file: Option<&Path>) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(ConfigError::Usage)?;
    let (common, command) = match cli.command {
        CommandArgs::Simulate(c) => (c, Command::Simulate),
        CommandArgs::Inflate(c) => (c, Command::Inflate),
        CommandArgs::Sweep { common, k1_list } => (common, Command::Sweep { k1_list }),
        CommandArgs::Sequence {
            common,
            targets,
            cap,
            start_k1,
        } => (common, Command::Sequence { targets, cap, start_k1 }),
        CommandArgs::VerifyBilinear { common, q, trials, probe_n } => (
            common,
            Command::VerifyBilinear {
                q,
                trials,
                cutoff: probe_n,
            },
        ),
        CommandArgs::OracleCheck(c) => (c, Command::OracleCheck),
    };
    let mut params = ExperimentParams::default();
    if let Some(path) = common.config.as_deref().or(file) {
        read_overrides(path)?.apply(&mut params);
    }
    ParamOverrides::from(&common).apply(&mut params);
    let validated = validate_params(&params).map_err(ConfigError::Invalid)?;
    let jobs = common
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(ConfigError::Invalid(Error::InvalidParameter {
            key: "jobs",
            reason: "must be at least 1".into(),
        }));
    }
    Ok(RunConfig {
        command,
        params: validated.params,
        output_dir: common.output_dir,
        emit_plots: common.emit_plots,
        seed: common.seed,
        jobs,
    })
}

fn write_report_files(dir: &Path, report: &InflationReport, plots: bool) -> crate::Result<()> {
    fs::create_dir_all(dir)?;
    save_json(&dir.join("report.json"), report)?;
    save_table_csv(&dir.join("trajectory.csv"), &report.table)?;
    if plots {
        let t: Vec<f64> = report.table.iter().map(|r| r.t).collect();
        let series: [(&str, fn(&crate::export::TableRow) -> f64); 4] = [
            ("u", |r| r.norm_hms),
            ("Su0", |r| r.norm_su0),
            ("u1", |r| r.norm_u1),
            ("y", |r| r.norm_y),
        ];
        for (name, get) in series {
            let ys: Vec<f64> = report.table.iter().map(get).collect();
            save_dat(
                &dir.join(format!("norm_vs_t_{name}.dat")),
                &format!("t  ||{name}||_(-s)"),
                &t,
                &ys,
            )?;
        }
    }
    Ok(())
}

fn print_headline(report: &InflationReport) {
    let b = &report.bootstrap;
    println!(
        "k1 = {}  T = {:.6e}  ||u0||_-s = {:.6e}  ||u(T)||_-s = {:.6e}  inflation ratio = {:.6}",
        report.params.k1,
        report.params.horizon(),
        report.initial_norms.hms,
        report.final_norm(),
        report.inflation_ratio
    );
    println!(
        "bootstrap: A = {:.3e}  B = {:.3e}  z_low = {}  Y(T) = {:.3e}  verdict = {}",
        b.a,
        b.b,
        b.z_low.map_or("none".to_string(), |z| format!("{z:.3e}")),
        b.y_measured,
        if b.ok { "ok" } else { "BootstrapViolated" }
    );
    for w in &report.warnings {
        println!("warning: {w}");
    }
}

/// Runs the configured pipeline, writing every file under `output_dir`.
pub fn execute(config: &RunConfig) -> crate::Result<()> {
    let out = &config.output_dir;
    fs::create_dir_all(out)?;
    match &config.command {
        Command::Simulate => {
            let traj = integrate_resolved(&config.params, crate::lab::MAX_CUTOFF_DOUBLINGS)?;
            let report_rows = {
                let snaps = decompose(&traj);
                crate::lab::table_rows(&snaps)
            };
            save_table_csv(&out.join("trajectory.csv"), &report_rows)?;
            let mut w = std::io::BufWriter::new(fs::File::create(out.join("coefficients.jsonl"))?);
            write_coefficients(&mut w, &traj)?;
            let (t, u) = traj.last();
            println!(
                "t = {t:.6e}  N = {}  ||u||_-s = {:.6e}  ||u||_0 = {:.6e}",
                traj.cutoff(),
                u.sobolev_norm(crate::SobolevIndex::negative(config.params.s)),
                u.l2_norm()
            );
        }
        Command::Inflate => {
            let report = run_experiment(&config.params)?;
            write_report_files(out, &report, config.emit_plots)?;
            print_headline(&report);
        }
        Command::Sweep { k1_list } => {
            let sweep = run_sweep(&config.params, k1_list, config.jobs)?;
            for report in &sweep.reports {
                write_report_files(&out.join(format!("k1_{}", report.params.k1)), report, config.emit_plots)?;
                print_headline(report);
            }
            save_json(&out.join("slopes.json"), &sweep)?;
            if config.emit_plots {
                let k: Vec<f64> = sweep.k1.iter().map(|&k| k as f64).collect();
                save_dat(&out.join("norm_vs_k1_u.dat"), "k1  ||u(T0)||_(-s)", &k, &sweep.u_final)?;
                save_dat(&out.join("norm_vs_k1_u1.dat"), "k1  ||u1(T0)||_(-s)", &k, &sweep.u1_final)?;
                save_dat(&out.join("norm_vs_k1_u0.dat"), "k1  ||u0||_(-s)", &k, &sweep.u0_norm)?;
                save_dat(
                    &out.join("ratio_vs_k1.dat"),
                    "k1  ||u(T0)||_(-s)/||u0||_(-s)",
                    &k,
                    &sweep.inflation_ratio,
                )?;
            }
            let s = &sweep.slopes;
            println!(
                "slopes vs k1: u1 = {:.4}  u0 = {:.4}  inflation = {:.4}",
                s.u1_slope.slope, s.u0_slope.slope, s.inflation_slope.slope
            );
        }
        Command::Sequence { targets, cap, start_k1 } => {
            let search = SequenceSearch {
                base: config.params.clone(),
                start_k1: *start_k1,
                cap: *cap,
            };
            let seq = inflation_sequence(config.params.s, targets, &search)?;
            save_json(&out.join("sequence.json"), &seq)?;
            for (j, e) in seq.iter().enumerate() {
                println!(
                    "j = {}  k1 = {}  T = {:.6e}  ||u(T)||_-s = {:.6e} >= {}  (||u0||_-s = {:.6e})",
                    j + 1,
                    e.k1,
                    e.t,
                    e.achieved_norm,
                    e.target,
                    e.initial_norm
                );
            }
        }
        Command::VerifyBilinear { q, trials, cutoff } => {
            let probe = bilinear_probe(*q, *trials, config.seed, *cutoff)?;
            let mut w = std::io::BufWriter::new(fs::File::create(out.join("bilinear.csv"))?);
            write_probe_csv(&mut w, &probe.samples)?;
            println!("max_ratio = {:.17e}", probe.max_ratio);
        }
        Command::OracleCheck => {
            let p = oracle_check_params();
            let a = crate::solver::integrate(&p)?;
            let b = galerkin_oracle(&p, p.cutoff())?;
            let distance = a.sup_l2_distance(&b);
            let (mass, energy) = conserved_drift(&a);
            save_json(
                &out.join("oracle.json"),
                &serde_json::json!({
                    "sup_l2_distance": distance,
                    "mass_drift": mass,
                    "energy_drift": energy,
                    "tolerance": ORACLE_TOLERANCE,
                }),
            )?;
            println!("sup L2 distance = {distance:.3e}  mass drift = {mass:.3e}  energy drift = {energy:.3e}");
            if distance > ORACLE_TOLERANCE {
                return Err(Error::OracleMismatch {
                    distance,
                    tolerance: ORACLE_TOLERANCE,
                });
            }
        }
    }
    Ok(())
}

/// The fixed small case of `oracle-check`: `k₁ = 2`, `N = 32`, `T = 1`.
pub fn oracle_check_params() -> ExperimentParams {
    ExperimentParams {
        s: 1.0,
        gamma: 0.5,
        mu: 1.8,
        k1: 2,
        cutoff: Some(32),
        dt: None,
        horizon: Some(1.0),
        output_points: 21,
    }
}

/// Runs a parsed config and maps failures to exit code 3.
pub fn dispatch(config: &RunConfig) -> i32 {
    match execute(config) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{} failed ({}): {e}", config.command.name(), e.name());
            EXIT_RUNTIME
        }
    }
}

/// Entry point of the binary.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_config(args, None) {
        Ok(config) => dispatch(&config),
        Err(ConfigError::Usage(e)) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            code
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
