//! # funcineq
//!
//! Exact verification of concentration, transport-entropy and reverse
//! Hölder inequalities on finite metric-measure spaces.
//!
//! Everything is computed on finite spaces (point sets with a distance
//! matrix and a probability vector) or fine 1-D discretizations, where all
//! of the quantities involved — optimal transport cost, relative entropy,
//! infimum convolutions, moments of every real order — are exactly
//! computable. Each inequality check produces a verdict record with both
//! sides, the margin and a witness, never a bare boolean.
//!
//! ## Layout
//!
//! | Module | Provides |
//! |--------|----------|
//! | [`space`] | spaces (Ω, d, μ), fields, line/product/random generators |
//! | [`convex`] | growth profiles φ, Φ, Legendre–Fenchel conjugates, composition |
//! | [`functionals`] | L^p norms for all real p (including p = 0), entropy, variance |
//! | [`transport`] | exact optimal transport (simplex), KL divergence, transport-entropy checks |
//! | [`infconv`] | infimum convolution Q_c, inf-convolution inequality checks, tail bounds |
//! | [`reverse_holder`] | the moment-comparison constants and their verification |
//! | [`families`] | seeded measure/field families used by the batteries |
//! | [`suite`] | the named verification batteries behind `funcineq suite` |
//! | [`cli`] | the `funcineq` command-line entry point |
//!
//! ## Quick start
//!
//! ```rust
//! use funcineq::convex::ConvexProfile;
//! use funcineq::functionals::lp_norm;
//! use funcineq::reverse_holder::thm_main_constant;
//! use funcineq::space::{discretize_line, LineDensity, ScalarField};
//!
//! // A discretized standard Gaussian line and the tilt f = e^x.
//! let (space, xs) = discretize_line(LineDensity::Gaussian, 6.0, 0.01).unwrap();
//! let f = ScalarField::positive(xs.iter().map(|x| x.exp()).collect()).unwrap();
//!
//! // ‖f‖₁/‖f‖₀ is e^{1/2} for the Gaussian, and the sub-Gaussian
//! // moment-comparison constant exp(Ψ*(pL)/p) matches it exactly.
//! let ratio = lp_norm(&space, &f, 1.0).unwrap() / lp_norm(&space, &f, 0.0).unwrap();
//! let constant = thm_main_constant(&ConvexProfile::quadratic(1.0), 1.0, 1.0).unwrap();
//! assert!((ratio - constant.value).abs() < 1e-3);
//! assert!((constant.value - (0.5f64).exp()).abs() < 1e-12);
//! ```
//!
//! Runnable walkthroughs for each capability live in `examples/`; the
//! `funcineq` binary exposes the same operations as subcommands.

use thiserror::Error;

pub mod cli;
pub mod convex;
pub mod families;
pub mod functionals;
pub mod infconv;
pub mod numeric;
pub mod report;
pub mod reverse_holder;
pub mod space;
pub mod suite;
pub mod transport;

/// Error variants shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("distance matrix asymmetric at ({i}, {j}): {forward} vs {backward}")]
    AsymmetricDistance {
        i: usize,
        j: usize,
        forward: f64,
        backward: f64,
    },

    #[error(
        "triangle inequality violated on points ({i}, {j}, {k}): d({i},{k}) = {direct} > d({i},{j}) + d({j},{k}) = {via}"
    )]
    TriangleViolation {
        i: usize,
        j: usize,
        k: usize,
        direct: f64,
        via: f64,
    },

    #[error("weights sum to {sum}, expected 1 within 1e-12")]
    WeightsNotNormalized { sum: f64 },

    #[error("weight at index {index} must be positive, got {value}")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("field value at index {index} invalid for its positivity flag: {value}")]
    NonPositiveField { index: usize, value: f64 },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("grid of {points} points exceeds the limit of {limit}")]
    GridOverflow { points: usize, limit: usize },

    #[error("degenerate grid: step {step} leaves no interior points in [-{half_width}, {half_width}]")]
    DegenerateGrid { half_width: f64, step: f64 },

    #[error("profile is not convex non-decreasing: {0}")]
    NotConvex(String),

    #[error("profile cannot act as a cost profile (must be non-negative with value 0 at 0): {0}")]
    NotCostProfile(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("space has no edge list; discrete-gradient estimation needs one")]
    MissingEdges,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
