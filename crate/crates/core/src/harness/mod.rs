//! Random instances, verification and sweep runners, and the command line.

pub mod cli;
mod experiments;
mod random;

pub use experiments::{
    generate_family, oracle_limit, sweep, verify_random, FamilyParams, Skipped, SweepConfig,
    VerifyConfig, VerifySummary, ORACLE_LIMIT_ENV,
};
pub use random::{
    random_instance, random_instances, trial_rng, RandomInstanceSpec, SizeModel,
    DEFAULT_DENOMINATOR,
};

use crate::adversary::AdversaryError;
use crate::algorithms::AlgorithmError;
use crate::analysis::AnalysisError;
use crate::model::ModelError;
use crate::oracle::OracleError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VIOLATION: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const CONSTRUCTION: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Input(#[from] ModelError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Algorithm(#[from] AlgorithmError),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_)
            | HarnessError::Io { .. }
            | HarnessError::Input(_)
            | HarnessError::Analysis(_) => exit::USAGE,
            HarnessError::Algorithm(AlgorithmError::UnknownAlgorithm(_))
            | HarnessError::Algorithm(AlgorithmError::CapTooSmall(_))
            | HarnessError::Algorithm(AlgorithmError::ZeroSpace) => exit::USAGE,
            HarnessError::Adversary(_) | HarnessError::Oracle(_) | HarnessError::Algorithm(_) => {
                exit::CONSTRUCTION
            }
        }
    }
}
