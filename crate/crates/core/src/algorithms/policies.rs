use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Action, CardinalityCap, DecisionProcedure, End, Observation, SpaceBound};

/// The MM / MM_k rule on a single open bin: head if it fits, else tail,
/// else close. With a finite cap the bin closes once it holds k items.
#[derive(Clone, Debug)]
pub struct MmPolicy {
    cap: CardinalityCap,
}

impl MmPolicy {
    pub fn new(cap: CardinalityCap) -> Self {
        MmPolicy { cap }
    }
}

impl DecisionProcedure for MmPolicy {
    fn decide(&mut self, obs: &Observation) -> Action {
        let Some(bin) = obs.latest_open() else {
            return Action::OpenBin;
        };
        if self.cap.limit().is_some_and(|k| bin.count >= k) {
            Action::CloseBin(bin.index)
        } else if obs.fits(End::Head, bin, self.cap) {
            Action::PackHead(bin.index)
        } else if obs.fits(End::Tail, bin, self.cap) {
            Action::PackTail(bin.index)
        } else {
            Action::CloseBin(bin.index)
        }
    }
}

/// Always the head, into the single open bin: NFD / NFD_k.
#[derive(Clone, Debug)]
pub struct HeadPolicy {
    cap: CardinalityCap,
}

impl HeadPolicy {
    pub fn new(cap: CardinalityCap) -> Self {
        HeadPolicy { cap }
    }
}

impl DecisionProcedure for HeadPolicy {
    fn decide(&mut self, obs: &Observation) -> Action {
        one_end(obs, End::Head, self.cap)
    }
}

/// Always the tail, into the single open bin: Next Fit on increasing sizes.
#[derive(Clone, Debug)]
pub struct TailPolicy {
    cap: CardinalityCap,
}

impl TailPolicy {
    pub fn new(cap: CardinalityCap) -> Self {
        TailPolicy { cap }
    }
}

impl DecisionProcedure for TailPolicy {
    fn decide(&mut self, obs: &Observation) -> Action {
        one_end(obs, End::Tail, self.cap)
    }
}

fn one_end(obs: &Observation, end: End, cap: CardinalityCap) -> Action {
    match obs.latest_open() {
        None => Action::OpenBin,
        Some(bin) if obs.fits(end, bin, cap) => match end {
            End::Head => Action::PackHead(bin.index),
            End::Tail => Action::PackTail(bin.index),
        },
        Some(bin) => Action::CloseBin(bin.index),
    }
}

/// A seeded procedure that picks uniformly among legal moves, biased
/// towards packing. It never issues an illegal action, so any run finishes
/// within the executor's default budget.
#[derive(Clone, Debug)]
pub struct RandomPolicy {
    rng: ChaCha8Rng,
    cap: CardinalityCap,
    space: SpaceBound,
}

impl RandomPolicy {
    pub fn new(seed: u64, space: SpaceBound, cap: CardinalityCap) -> Self {
        RandomPolicy {
            rng: ChaCha8Rng::seed_from_u64(seed),
            cap,
            space,
        }
    }
}

impl DecisionProcedure for RandomPolicy {
    fn decide(&mut self, obs: &Observation) -> Action {
        let mut packs = Vec::new();
        for bin in &obs.open_bins {
            if obs.fits(End::Head, bin, self.cap) {
                packs.push(Action::PackHead(bin.index));
            }
            if obs.fits(End::Tail, bin, self.cap) {
                packs.push(Action::PackTail(bin.index));
            }
        }
        let has_empty = obs.open_bins.iter().any(|b| b.count == 0);
        if !packs.is_empty() && (has_empty || self.rng.gen_bool(0.85)) {
            return *packs.choose(&mut self.rng).expect("non-empty");
        }
        let can_open = self.space.limit().is_none_or(|b| obs.open_bins.len() < b);
        let closable: Vec<usize> = obs
            .open_bins
            .iter()
            .filter(|b| b.count > 0)
            .map(|b| b.index)
            .collect();
        if can_open && (closable.is_empty() || self.rng.gen_bool(0.5)) {
            Action::OpenBin
        } else if let Some(&bin) = closable.choose(&mut self.rng) {
            Action::CloseBin(bin)
        } else {
            Action::OpenBin
        }
    }
}
