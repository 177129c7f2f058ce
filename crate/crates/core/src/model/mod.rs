//! Exact item, instance, and packing model.

mod instance;
mod packing;
mod size;

pub use instance::{sort_nonincreasing, total_size, GeneratorMeta, Instance, ParamValue, Params};
pub use packing::{num_bins, validate_packing, BinState, Packing, ValidationReport, Violation};
pub use size::{ceil_nonneg, format_rational, parse_rational, Size};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("size {0} is outside (0, 1]")]
    SizeOutOfRange(String),
    #[error("malformed number {0:?}")]
    BadNumber(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("packing assigns {got} items but the instance has {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid packing json: {0}")]
    Json(String),
}
