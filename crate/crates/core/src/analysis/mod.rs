//! π, γ, λ_k, weight functions, and checks of algorithm bin counts against
//! the known ratio bounds.

mod bounds;
mod report;
mod sequences;
mod weights;

pub use bounds::{BoundContext, BoundId, BoundOutcome, Relation, GAMMA_TERMS};
pub use report::{
    ratio_report, rows_from_csv, rows_from_json, rows_to_csv, rows_to_json, RatioReport,
    ReportRow,
};
pub use sequences::{gamma, gamma_partial, gamma_tail_bound, lambda, pi, GammaInterval};
pub use weights::{harmonic_class, weight, weight_sum, WeightFunctionId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("unknown bound {0:?}")]
    UnknownBound(String),
    #[error("bound {bound} needs parameter {field}")]
    MissingContext { bound: BoundId, field: &'static str },
    #[error("bound {bound}: {message}")]
    Context { bound: BoundId, message: String },
    #[error("bound {0} is a lower bound and has no single subject algorithm")]
    NotAnUpperBound(BoundId),
    #[error("invalid weight function {0}")]
    InvalidWeight(String),
    #[error("weight function {0} is not piecewise constant")]
    NotPiecewiseConstant(String),
    #[error("optimum must be positive")]
    ZeroOptimum,
    #[error("report format: {0}")]
    Format(String),
}
