//! Norm inflation for the periodic BBM equation `u_t + u_x + u u_x - u_xxt = 0`.
//!
//! The crate evolves two-mode data `k₁^γ (sin k₁x + sin (k₁+1)x)` with a
//! pseudospectral integrator, splits the solution into its linear part, the
//! closed-form first Duhamel iterate and a remainder, and measures how the
//! `Ḣ^{-s}` norm grows by the time `T₀ = k₁^{-μγ}` as `k₁` increases.
//!
//! Modules, bottom up:
//!
//! - [`spectral`]: trigonometric polynomials, products, Sobolev norms
//! - [`operators`]: the smoothing multiplier `Λ` and the linear flow `S(t)`
//! - [`duhamel`]: closed form of the first Duhamel iterate `u₁`
//! - [`solver`]: nonlinear integration, decomposition, reference oracle
//! - [`estimates`]: empirical bilinear constant, bootstrap quadratic
//! - [`lab`]: experiment parameters, runs, sweeps, inflating sequences
//! - [`cli`]: configuration parsing and dispatch for the `bbm-inflate` binary

pub mod cli;
pub mod duhamel;
pub mod error;
pub mod estimates;
pub mod export;
pub mod lab;
pub mod operators;
pub mod solver;
pub mod spectral;
pub mod stats;

pub use error::{Error, Result};
pub use lab::ExperimentParams;
pub use spectral::{SobolevIndex, SpectralField};
