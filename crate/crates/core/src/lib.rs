//! Numerical toolkit for Zagier L-series, theta-multiplier exponential sums,
//! half-integral-weight Voronoi summation, and stationary-phase asymptotics.
//!
//! The crate is organized bottom-up:
//! - [`arith`]: exact integer/modular arithmetic (quadratic symbols, solution
//!   counts, discriminant decompositions),
//! - [`special`]: special functions (log-Gamma, Hurwitz zeta, Bessel,
//!   incomplete gamma, Gauss hypergeometric),
//! - [`quad`]: adaptive Gauss-Kronrod quadrature,
//! - [`lseries`]: quadratic Dirichlet L-functions and the Zagier L-series
//!   apparatus, including the two theta-sum generating Dirichlet series
//!   identities,
//! - [`theta`]: the four theta-multiplier exponential sums,
//! - [`voronoi`]: the three half-integral-weight Voronoi summation formulas,
//! - [`asymptotics`]: Stirling ratios, the approximate-functional-equation
//!   weight, stationary-phase main terms and the saddle-point transform
//!   asymptotics,
//! - [`moment`]: desk-scale second-moment explorer for symmetric-square
//!   central values.

pub mod arith;
pub mod asymptotics;
pub mod lseries;
pub mod moment;
pub mod quad;
pub mod special;
pub mod theta;
pub mod voronoi;

pub use num_complex::Complex64;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("convergence failure: {0}")]
    Convergence(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
