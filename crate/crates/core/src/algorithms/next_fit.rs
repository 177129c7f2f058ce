use num_rational::BigRational;

use super::{unsort, CardinalityCap};
use crate::model::{BinState, Instance, Packing, Size};

/// Next Fit (NF, or NF_k with a finite cap) over the items in input order.
pub fn run_nf(instance: &Instance, cap: CardinalityCap) -> Packing {
    Packing::new(next_fit(instance.items(), cap), cap.limit())
}

/// Next Fit Decreasing: sort non-increasing, then Next Fit.
pub fn run_nfd(instance: &Instance, cap: CardinalityCap) -> Packing {
    let (sorted, order) = instance.sorted_with_order();
    let assignment = next_fit(sorted.items(), cap);
    Packing::new(unsort(&assignment, &order), cap.limit())
}

fn next_fit(items: &[Size], cap: CardinalityCap) -> Vec<usize> {
    let mut assignment = Vec::with_capacity(items.len());
    let mut current: Option<BinState> = None;
    for item in items {
        let size: &BigRational = item.value();
        let bin = match current.as_mut() {
            Some(bin) if bin.fits(size, cap.limit()) => bin,
            _ => {
                let next = current.as_ref().map_or(1, |b| b.index + 1);
                current.insert(BinState::new(next))
            }
        };
        bin.add(size);
        assignment.push(bin.index);
    }
    assignment
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(pairs: &[(i64, i64)]) -> Instance {
        Instance::from_ratios(pairs).unwrap()
    }

    #[test]
    fn next_fit_hand_trace() {
        let i = inst(&[(6, 10), (5, 10), (4, 10), (3, 10), (2, 10)]);
        let p = run_nf(&i, CardinalityCap::UNBOUNDED);
        assert_eq!(p.assignment, vec![1, 2, 2, 3, 3]);
    }

    #[test]
    fn cardinality_splits() {
        let i = inst(&[(1, 10), (1, 10), (1, 10)]);
        let p = run_nf(&i, CardinalityCap::at_most(2).unwrap());
        assert_eq!(p.assignment, vec![1, 1, 2]);
        assert_eq!(p.cap, Some(2));
    }

    #[test]
    fn empty_input() {
        let p = run_nf(&Instance::default(), CardinalityCap::UNBOUNDED);
        assert_eq!(p.num_bins(), 0);
        let p = run_nfd(&Instance::default(), CardinalityCap::at_most(3).unwrap());
        assert_eq!(p.num_bins(), 0);
    }

    #[test]
    fn decreasing_hand_traces() {
        let i = inst(&[(7, 10), (7, 10), (3, 10), (3, 10)]);
        let p = run_nfd(&i, CardinalityCap::UNBOUNDED);
        assert_eq!(p.assignment, vec![1, 2, 2, 3]);

        let i = inst(&[(4, 10), (4, 10), (4, 10), (1, 10), (1, 10)]);
        let p = run_nfd(&i, CardinalityCap::at_most(2).unwrap());
        assert_eq!(p.assignment, vec![1, 1, 2, 2, 3]);

        let p = run_nfd(&inst(&[(1, 1)]), CardinalityCap::UNBOUNDED);
        assert_eq!(p.num_bins(), 1);
    }

    #[test]
    fn decreasing_reports_original_indices() {
        // 0.3 first in the input, but packed after 0.8
        let i = inst(&[(3, 10), (8, 10), (3, 10)]);
        let p = run_nfd(&i, CardinalityCap::UNBOUNDED);
        assert_eq!(p.assignment, vec![2, 1, 2]);
    }
}
