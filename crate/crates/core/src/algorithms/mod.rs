//! Packing algorithms and the max-min executor.

mod executor;
mod first_fit;
mod max_min;
mod next_fit;
mod policies;
mod structure;

use std::fmt;

use crate::model::Packing;

pub use executor::{
    run_maxmin, Action, DecisionProcedure, Observation, ProtocolViolation, Session, StepOutcome,
};
pub use first_fit::{run_ff, run_ffd};
pub use max_min::run_mm;
pub use next_fit::{run_nf, run_nfd};
pub use policies::{HeadPolicy, MmPolicy, RandomPolicy, TailPolicy};
pub use structure::{partners_of_prefix, sole_class1_prefix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgorithmError {
    #[error("cardinality cap must be at least 2, got {0}")]
    CapTooSmall(usize),
    #[error("space bound must be at least 1")]
    ZeroSpace,
    #[error("step {step}: {violation}")]
    Protocol {
        step: usize,
        violation: ProtocolViolation,
    },
    #[error("procedure exceeded the step budget of {0} actions")]
    BudgetExceeded(usize),
    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),
}

/// Maximum number of items per bin, or none.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct CardinalityCap(Option<usize>);

impl CardinalityCap {
    pub const UNBOUNDED: CardinalityCap = CardinalityCap(None);

    pub fn at_most(k: usize) -> Result<Self, AlgorithmError> {
        if k < 2 {
            return Err(AlgorithmError::CapTooSmall(k));
        }
        Ok(CardinalityCap(Some(k)))
    }

    /// `None` maps to unbounded.
    pub fn from_option(k: Option<usize>) -> Result<Self, AlgorithmError> {
        match k {
            Some(k) => CardinalityCap::at_most(k),
            None => Ok(CardinalityCap::UNBOUNDED),
        }
    }

    pub fn limit(self) -> Option<usize> {
        self.0
    }

    pub fn is_unbounded(self) -> bool {
        self.0.is_none()
    }
}

impl fmt::Display for CardinalityCap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(k) => write!(f, "k={k}"),
            None => f.write_str("unbounded"),
        }
    }
}

/// Maximum number of simultaneously open bins.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct SpaceBound(Option<usize>);

impl SpaceBound {
    pub const UNBOUNDED: SpaceBound = SpaceBound(None);
    pub const ONE: SpaceBound = SpaceBound(Some(1));

    pub fn bins(b: usize) -> Result<Self, AlgorithmError> {
        if b == 0 {
            return Err(AlgorithmError::ZeroSpace);
        }
        Ok(SpaceBound(Some(b)))
    }

    pub fn limit(self) -> Option<usize> {
        self.0
    }
}

/// Which end of the remaining sorted sequence an item came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum End {
    Head,
    Tail,
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            End::Head => "head",
            End::Tail => "tail",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TraceEvent {
    /// Index of the item in the caller's (unsorted) instance.
    pub item: usize,
    pub end: End,
    pub bin: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
    pub packing: Packing,
}

impl Trace {
    /// Rebuilds the packing from the event list alone.
    pub fn replay(&self) -> Packing {
        let n = self.events.len();
        let mut assignment = vec![0; n];
        for e in &self.events {
            assignment[e.item] = e.bin;
        }
        Packing::new(assignment, self.packing.cap)
    }

    pub fn heads(&self) -> usize {
        self.events.iter().filter(|e| e.end == End::Head).count()
    }

    pub fn tails(&self) -> usize {
        self.events.len() - self.heads()
    }
}

/// Maps an assignment over sorted positions back to original item indices.
pub(crate) fn unsort(sorted_assignment: &[usize], order: &[usize]) -> Vec<usize> {
    let mut out = vec![0; sorted_assignment.len()];
    for (pos, &orig) in order.iter().enumerate() {
        out[orig] = sorted_assignment[pos];
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmKind {
    Nf,
    Nfd,
    Ff,
    Ffd,
    Mm,
}

impl AlgorithmKind {
    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Nf => "nf",
            AlgorithmKind::Nfd => "nfd",
            AlgorithmKind::Ff => "ff",
            AlgorithmKind::Ffd => "ffd",
            AlgorithmKind::Mm => "mm",
        }
    }
}

impl std::str::FromStr for AlgorithmKind {
    type Err = AlgorithmError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "nf" => AlgorithmKind::Nf,
            "nfd" => AlgorithmKind::Nfd,
            "ff" => AlgorithmKind::Ff,
            "ffd" => AlgorithmKind::Ffd,
            "mm" => AlgorithmKind::Mm,
            _ => return Err(AlgorithmError::UnknownAlgorithm(s.to_string())),
        })
    }
}

/// An algorithm together with its cardinality cap, written `mm` or `mm_3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgorithmId {
    pub kind: AlgorithmKind,
    pub cap: CardinalityCap,
}

impl AlgorithmId {
    pub fn new(kind: AlgorithmKind, cap: CardinalityCap) -> Self {
        AlgorithmId { kind, cap }
    }

    pub fn run(&self, instance: &crate::model::Instance) -> Packing {
        match self.kind {
            AlgorithmKind::Nf => run_nf(instance, self.cap),
            AlgorithmKind::Nfd => run_nfd(instance, self.cap),
            AlgorithmKind::Ff => run_ff(instance, self.cap),
            AlgorithmKind::Ffd => run_ffd(instance, self.cap),
            AlgorithmKind::Mm => run_mm(instance, self.cap).0,
        }
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cap.limit() {
            Some(k) => write!(f, "{}_{k}", self.kind.name()),
            None => f.write_str(self.kind.name()),
        }
    }
}

impl std::str::FromStr for AlgorithmId {
    type Err = AlgorithmError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('_') {
            Some((kind, k)) => {
                let k: usize = k
                    .parse()
                    .map_err(|_| AlgorithmError::UnknownAlgorithm(s.to_string()))?;
                Ok(AlgorithmId::new(kind.parse()?, CardinalityCap::at_most(k)?))
            }
            None => Ok(AlgorithmId::new(s.parse()?, CardinalityCap::UNBOUNDED)),
        }
    }
}
