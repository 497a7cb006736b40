//! Exact multivariate polynomial arithmetic over the Gaussian rationals.
//!
//! [`MultiPoly`] is the carrier for every Hermite family in the crate. Terms are
//! keyed by dense exponent vectors against a per-polynomial variable registry;
//! binary operations take the name-based union of the two registries.

mod poly;
mod rational;
mod serial;

pub use poly::{CompiledPoly, Evaluator, MultiPoly};
pub use rational::GaussianRational;
pub use serial::{PolyRecord, TermRecord};

use thiserror::Error;

/// Double-precision complex value used as the numeric evaluation target.
pub type ComplexFloat = num_complex::Complex64;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("no value assigned to variable `{0}`")]
    MissingVariable(String),
    #[error("cannot parse rational `{0}`")]
    BadRational(String),
    #[error("malformed polynomial record: {0}")]
    BadRecord(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
