//! Catalog of closed-form Gaussian integrals over Hermite families, each paired
//! with an independent tensor-grid quadrature of its integrand.

mod closed;
mod oracle;
mod params;
mod quadrature;

pub use closed::{closed_form, closed_form_parts, ClosedForm};
pub use oracle::{
    integrand, orthogonality_readings, quadrature, random_params, sweep, verify, IntegralResult,
    OrthogonalityReading, OrthogonalityReport, ROUNDING_FLOOR,
};
pub use params::{parse_complex, IntegralId, ParamKind, ParamSet};
pub use quadrature::{tensor_quadrature, Integrand, PointFn, QuadratureConfig, QuadratureError, QuadratureOutcome};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IntegralError {
    #[error("unknown integral id `{0}`")]
    UnknownId(String),
    #[error("parameter schema mismatch for {id}: {detail}")]
    Schema { id: IntegralId, detail: String },
    #[error("weight `{key}` must have positive real part, got {value}")]
    NonPositiveWeight { key: String, value: String },
    #[error("quadrature needs real positive weights, `{key}` = {value}")]
    ComplexWeight { key: String, value: String },
    #[error("bad parameter value `{0}`")]
    BadValue(String),
    #[error(transparent)]
    Quadrature(#[from] quadrature::QuadratureError),
}
