//! Exact-arithmetic bin packing: algorithms, optimum oracle, bound analysis,
//! lower-bound instance generators, and an experiment harness.

pub mod adversary;
pub mod algorithms;
pub mod analysis;
pub mod harness;
pub mod model;
pub mod oracle;
