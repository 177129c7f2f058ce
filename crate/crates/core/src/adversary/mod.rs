//! Lower-bound instance families with certificate packings, and the
//! adaptive adversary against max-min procedures.

mod adaptive;
mod certified;
mod generators;

pub use adaptive::{adversary_unbounded, AdversaryOptions, AdversaryOutcome, Chosen};
pub use certified::{large_item_lower_bound, CertifiedInstance, OptBasis};
pub use generators::{
    gen_kcard_bounded_lb, gen_kcard_bounded_lb_with_eps, gen_maxmin_bounded_lb,
    gen_maxmin_bounded_lb_with_eps, gen_maxmin_unit_lb, gen_maxmin_unit_lb_with,
    gen_online_unit_lb, gen_online_unit_lb_with, gen_presorted_bounded_lb,
    gen_presorted_bounded_lb_with_eps, Family, UnitParams,
};

use crate::algorithms::AlgorithmError;
use crate::oracle::OracleError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AdversaryError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Algorithm(#[from] AlgorithmError),
    #[error("procedure diverged on identical observations at packing event {event}; it is not a max-min procedure")]
    NotMaxMin { event: usize },
    #[error("optimum mismatch on {instance}: closed form {closed_form}, oracle {oracle}")]
    OptMismatch {
        instance: &'static str,
        closed_form: usize,
        oracle: usize,
    },
    #[error("no instance satisfies ALG > 16/15 (OPT - 1): I- gives {minus_alg}/{minus_opt}, I+ gives {plus_alg}/{plus_opt}")]
    InequalityViolation {
        minus_alg: usize,
        minus_opt: usize,
        plus_alg: usize,
        plus_opt: usize,
    },
}
