use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use super::{unsort, AlgorithmError, CardinalityCap, End, SpaceBound, Trace, TraceEvent};
use crate::model::{BinState, Instance, Packing, Size};

/// Everything a max-min procedure may see: the two ends of the remaining
/// sorted sequence and the open bins. Interior items are never exposed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    pub head: Option<Size>,
    pub tail: Option<Size>,
    pub remaining: usize,
    /// Open bins in opening order.
    pub open_bins: Vec<BinState>,
}

impl Observation {
    pub fn item(&self, end: End) -> Option<&Size> {
        match end {
            End::Head => self.head.as_ref(),
            End::Tail => self.tail.as_ref(),
        }
    }

    /// Whether the item at `end` fits into `bin` under `cap`.
    pub fn fits(&self, end: End, bin: &BinState, cap: CardinalityCap) -> bool {
        self.item(end)
            .is_some_and(|size| bin.fits(size.value(), cap.limit()))
    }

    pub fn latest_open(&self) -> Option<&BinState> {
        self.open_bins.last()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    PackHead(usize),
    PackTail(usize),
    OpenBin,
    CloseBin(usize),
}

/// A max-min decision procedure. Implementations own any state they need.
pub trait DecisionProcedure {
    fn decide(&mut self, observation: &Observation) -> Action;
}

impl<P: DecisionProcedure + ?Sized> DecisionProcedure for &mut P {
    fn decide(&mut self, observation: &Observation) -> Action {
        (**self).decide(observation)
    }
}

impl<P: DecisionProcedure + ?Sized> DecisionProcedure for Box<P> {
    fn decide(&mut self, observation: &Observation) -> Action {
        (**self).decide(observation)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProtocolViolation {
    BinNotOpen(usize),
    Overfull { bin: usize },
    CardinalityExceeded { bin: usize },
    TooManyOpenBins(usize),
    EmptyBinAlreadyOpen(usize),
    CloseEmptyBin(usize),
}

impl fmt::Display for ProtocolViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProtocolViolation::BinNotOpen(b) => write!(f, "bin {b} is not open"),
            ProtocolViolation::Overfull { bin } => write!(f, "item does not fit in bin {bin}"),
            ProtocolViolation::CardinalityExceeded { bin } => {
                write!(f, "bin {bin} already holds the maximum number of items")
            }
            ProtocolViolation::TooManyOpenBins(b) => {
                write!(f, "opening a bin would exceed the space bound {b}")
            }
            ProtocolViolation::EmptyBinAlreadyOpen(b) => {
                write!(f, "bin {b} is open and still empty")
            }
            ProtocolViolation::CloseEmptyBin(b) => write!(f, "bin {b} is empty"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Packed(TraceEvent),
    Opened(usize),
    Closed(usize),
    Finished,
}

/// A resumable run of a decision procedure over one instance.
///
/// Callers drive it one action at a time with [`Session::step`] or one
/// packing event at a time with [`Session::next_event`], and may stop at
/// any point to inspect the partial trace.
#[derive(Clone, Debug)]
pub struct Session {
    items: Vec<Size>,
    order: Vec<usize>,
    head: usize,
    end: usize,
    bins: Vec<BinState>,
    open: Vec<usize>,
    sorted_assignment: Vec<usize>,
    events: Vec<TraceEvent>,
    steps: usize,
    budget: usize,
    space: SpaceBound,
    cap: CardinalityCap,
}

impl Session {
    pub fn new(instance: &Instance, space: SpaceBound, cap: CardinalityCap) -> Self {
        let (sorted, order) = instance.sorted_with_order();
        let n = sorted.len();
        Session {
            items: sorted.items().to_vec(),
            order,
            head: 0,
            end: n,
            bins: Vec::new(),
            open: Vec::new(),
            sorted_assignment: vec![0; n],
            events: Vec::with_capacity(n),
            steps: 0,
            budget: 4 * n.max(1),
            space,
            cap,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn is_finished(&self) -> bool {
        self.head >= self.end
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn events(&self) -> &[TraceEvent] {
        &self.events
    }

    pub fn observation(&self) -> Observation {
        let remaining = self.end - self.head;
        let (head, tail) = if remaining == 0 {
            (None, None)
        } else {
            (
                Some(self.items[self.head].clone()),
                Some(self.items[self.end - 1].clone()),
            )
        };
        Observation {
            head,
            tail,
            remaining,
            open_bins: self.open.iter().map(|&b| self.bins[b - 1].clone()).collect(),
        }
    }

    /// Asks the procedure for one action and applies it.
    pub fn step<P: DecisionProcedure + ?Sized>(
        &mut self,
        procedure: &mut P,
    ) -> Result<StepOutcome, AlgorithmError> {
        if self.is_finished() {
            return Ok(StepOutcome::Finished);
        }
        if self.steps >= self.budget {
            return Err(AlgorithmError::BudgetExceeded(self.budget));
        }
        let action = procedure.decide(&self.observation());
        self.steps += 1;
        self.apply(action).map_err(|violation| AlgorithmError::Protocol {
            step: self.steps,
            violation,
        })
    }

    /// Runs until the next item is packed. `None` once every item is packed.
    pub fn next_event<P: DecisionProcedure + ?Sized>(
        &mut self,
        procedure: &mut P,
    ) -> Result<Option<TraceEvent>, AlgorithmError> {
        loop {
            match self.step(procedure)? {
                StepOutcome::Packed(event) => return Ok(Some(event)),
                StepOutcome::Finished => return Ok(None),
                StepOutcome::Opened(_) | StepOutcome::Closed(_) => {}
            }
        }
    }

    pub fn finish<P: DecisionProcedure + ?Sized>(
        mut self,
        procedure: &mut P,
    ) -> Result<(Packing, Trace), AlgorithmError> {
        while self.next_event(procedure)?.is_some() {}
        Ok(self.into_result())
    }

    /// Packing of the items placed so far; unplaced items map to bin 0.
    fn into_result(self) -> (Packing, Trace) {
        let assignment = unsort(&self.sorted_assignment, &self.order);
        let packing = Packing::new(assignment, self.cap.limit());
        let trace = Trace {
            events: self.events,
            packing: packing.clone(),
        };
        (packing, trace)
    }

    fn apply(&mut self, action: Action) -> Result<StepOutcome, ProtocolViolation> {
        match action {
            Action::PackHead(bin) => self.pack(End::Head, bin),
            Action::PackTail(bin) => self.pack(End::Tail, bin),
            Action::OpenBin => {
                if let Some(&empty) = self.open.iter().find(|&&b| self.bins[b - 1].count == 0) {
                    return Err(ProtocolViolation::EmptyBinAlreadyOpen(empty));
                }
                if let Some(limit) = self.space.limit() {
                    if self.open.len() >= limit {
                        return Err(ProtocolViolation::TooManyOpenBins(limit));
                    }
                }
                let index = self.bins.len() + 1;
                self.bins.push(BinState::new(index));
                self.open.push(index);
                Ok(StepOutcome::Opened(index))
            }
            Action::CloseBin(bin) => {
                let pos = self.open_position(bin)?;
                if self.bins[bin - 1].count == 0 {
                    return Err(ProtocolViolation::CloseEmptyBin(bin));
                }
                self.open.remove(pos);
                Ok(StepOutcome::Closed(bin))
            }
        }
    }

    fn pack(&mut self, end: End, bin: usize) -> Result<StepOutcome, ProtocolViolation> {
        self.open_position(bin)?;
        let pos = match end {
            End::Head => self.head,
            End::Tail => self.end - 1,
        };
        let state = &mut self.bins[bin - 1];
        let size = self.items[pos].value();
        if &state.load + size > BigRational::one() {
            return Err(ProtocolViolation::Overfull { bin });
        }
        if self.cap.limit().is_some_and(|k| state.count >= k) {
            return Err(ProtocolViolation::CardinalityExceeded { bin });
        }
        state.add(size);
        match end {
            End::Head => self.head += 1,
            End::Tail => self.end -= 1,
        }
        self.sorted_assignment[pos] = bin;
        let event = TraceEvent {
            item: self.order[pos],
            end,
            bin,
        };
        self.events.push(event);
        Ok(StepOutcome::Packed(event))
    }

    fn open_position(&self, bin: usize) -> Result<usize, ProtocolViolation> {
        self.open
            .iter()
            .position(|&b| b == bin)
            .ok_or(ProtocolViolation::BinNotOpen(bin))
    }
}

/// Runs a decision procedure to completion.
pub fn run_maxmin<P: DecisionProcedure + ?Sized>(
    procedure: &mut P,
    instance: &Instance,
    space: SpaceBound,
    cap: CardinalityCap,
) -> Result<(Packing, Trace), AlgorithmError> {
    Session::new(instance, space, cap).finish(procedure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{run_mm, run_nfd, HeadPolicy, MmPolicy};

    fn inst(pairs: &[(i64, i64)]) -> Instance {
        Instance::from_ratios(pairs).unwrap()
    }

    struct Script(Vec<Action>);

    impl DecisionProcedure for Script {
        fn decide(&mut self, _: &Observation) -> Action {
            self.0.remove(0)
        }
    }

    #[test]
    fn policies_match_direct_algorithms() {
        let i = inst(&[(6, 10), (5, 10), (4, 10), (3, 10), (2, 10)]);
        let cap = CardinalityCap::UNBOUNDED;
        let (p, t) = run_maxmin(&mut MmPolicy::new(cap), &i, SpaceBound::ONE, cap).unwrap();
        let (q, u) = run_mm(&i, cap);
        assert_eq!(p, q);
        assert_eq!(t, u);
        let (p, _) = run_maxmin(&mut HeadPolicy::new(cap), &i, SpaceBound::ONE, cap).unwrap();
        assert_eq!(p, run_nfd(&i, cap));
    }

    #[test]
    fn overfull_pack_is_a_protocol_error() {
        let i = inst(&[(6, 10), (5, 10)]);
        let mut proc = Script(vec![Action::OpenBin, Action::PackHead(1), Action::PackHead(1)]);
        let err = run_maxmin(&mut proc, &i, SpaceBound::ONE, CardinalityCap::UNBOUNDED);
        assert_eq!(
            err.unwrap_err(),
            AlgorithmError::Protocol {
                step: 3,
                violation: ProtocolViolation::Overfull { bin: 1 }
            }
        );
    }

    #[test]
    fn space_bound_enforced() {
        let i = inst(&[(6, 10), (5, 10)]);
        let mut proc = Script(vec![Action::OpenBin, Action::PackHead(1), Action::OpenBin]);
        let err = run_maxmin(&mut proc, &i, SpaceBound::ONE, CardinalityCap::UNBOUNDED);
        assert!(matches!(
            err,
            Err(AlgorithmError::Protocol {
                step: 3,
                violation: ProtocolViolation::TooManyOpenBins(1)
            })
        ));
    }

    #[test]
    fn closed_bins_stay_closed() {
        let i = inst(&[(1, 10), (1, 10)]);
        let mut proc = Script(vec![
            Action::OpenBin,
            Action::PackHead(1),
            Action::CloseBin(1),
            Action::PackHead(1),
        ]);
        let err = run_maxmin(&mut proc, &i, SpaceBound::UNBOUNDED, CardinalityCap::UNBOUNDED);
        assert!(matches!(
            err,
            Err(AlgorithmError::Protocol {
                step: 4,
                violation: ProtocolViolation::BinNotOpen(1)
            })
        ));
    }

    #[test]
    fn cap_enforced() {
        let i = inst(&[(1, 10); 3]);
        let mut proc = Script(vec![
            Action::OpenBin,
            Action::PackHead(1),
            Action::PackTail(1),
            Action::PackHead(1),
        ]);
        let cap = CardinalityCap::at_most(2).unwrap();
        let err = run_maxmin(&mut proc, &i, SpaceBound::ONE, cap).unwrap_err();
        assert!(matches!(
            err,
            AlgorithmError::Protocol {
                violation: ProtocolViolation::CardinalityExceeded { bin: 1 },
                ..
            }
        ));
    }

    struct Dither;

    impl DecisionProcedure for Dither {
        fn decide(&mut self, obs: &Observation) -> Action {
            match obs.open_bins.first() {
                Some(b) => Action::CloseBin(b.index),
                None => Action::OpenBin,
            }
        }
    }

    #[test]
    fn bad_procedures_are_stopped() {
        let i = inst(&[(1, 10)]);
        let err = run_maxmin(&mut Dither, &i, SpaceBound::ONE, CardinalityCap::UNBOUNDED);
        assert!(matches!(
            err,
            Err(AlgorithmError::Protocol {
                step: 2,
                violation: ProtocolViolation::CloseEmptyBin(1)
            })
        ));

        struct Opener;
        impl DecisionProcedure for Opener {
            fn decide(&mut self, obs: &Observation) -> Action {
                match obs.open_bins.first() {
                    Some(b) => Action::PackHead(b.index + 10),
                    None => Action::OpenBin,
                }
            }
        }
        let err = run_maxmin(&mut Opener, &i, SpaceBound::ONE, CardinalityCap::UNBOUNDED);
        assert!(matches!(
            err,
            Err(AlgorithmError::Protocol {
                violation: ProtocolViolation::BinNotOpen(11),
                ..
            })
        ));
    }

    #[test]
    fn budget_exceeded() {
        struct Idle;
        impl DecisionProcedure for Idle {
            fn decide(&mut self, obs: &Observation) -> Action {
                match obs.open_bins.first() {
                    Some(b) if b.count == 0 => Action::PackHead(b.index),
                    _ => Action::OpenBin,
                }
            }
        }
        let i = inst(&[(1, 10); 3]);
        let session = Session::new(&i, SpaceBound::UNBOUNDED, CardinalityCap::UNBOUNDED)
            .with_budget(2);
        assert_eq!(
            session.finish(&mut Idle).unwrap_err(),
            AlgorithmError::BudgetExceeded(2)
        );
    }

    #[test]
    fn interruption_and_resume() {
        let i = inst(&[(6, 10), (5, 10), (4, 10), (3, 10), (2, 10)]);
        let cap = CardinalityCap::UNBOUNDED;
        let mut proc = MmPolicy::new(cap);
        let mut session = Session::new(&i, SpaceBound::ONE, cap);
        let first = session.next_event(&mut proc).unwrap().unwrap();
        assert_eq!(first.item, 0);
        assert_eq!(first.end, End::Head);
        let obs = session.observation();
        assert_eq!(obs.remaining, 4);
        assert_eq!(obs.head.unwrap().to_string(), "1/2");
        assert_eq!(obs.tail.unwrap().to_string(), "1/5");
        let (p, _) = session.finish(&mut proc).unwrap();
        assert_eq!(p, run_mm(&i, cap).0);
    }
}
