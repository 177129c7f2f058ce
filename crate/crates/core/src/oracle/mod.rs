//! Exact optima and exhaustive enumeration for small instances.

mod branch_bound;
mod enumerate;
mod weight_config;

use crate::model::Packing;

pub use branch_bound::{opt_exact, opt_exact_with_limit};
pub use enumerate::{enumerate_packings, for_each_packing, ENUMERATION_LIMIT};
pub use weight_config::{max_weight_config, MAX_CONFIG_ITEMS};

/// Default item limit for [`opt_exact`].
pub const DEFAULT_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("instance has {n} items, above the oracle limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("item count {0} outside 1..=12")]
    ConfigItems(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptResult {
    pub opt: usize,
    /// A valid packing using exactly `opt` bins.
    pub witness: Packing,
    pub nodes_explored: u64,
}
