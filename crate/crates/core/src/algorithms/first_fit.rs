use super::{unsort, CardinalityCap};
use crate::model::{BinState, Instance, Packing, Size};

/// First Fit: each item goes to the lowest-index bin with room.
pub fn run_ff(instance: &Instance, cap: CardinalityCap) -> Packing {
    Packing::new(first_fit(instance.items(), cap), cap.limit())
}

/// First Fit Decreasing.
pub fn run_ffd(instance: &Instance, cap: CardinalityCap) -> Packing {
    let (sorted, order) = instance.sorted_with_order();
    let assignment = first_fit(sorted.items(), cap);
    Packing::new(unsort(&assignment, &order), cap.limit())
}

fn first_fit(items: &[Size], cap: CardinalityCap) -> Vec<usize> {
    let mut bins: Vec<BinState> = Vec::new();
    let mut assignment = Vec::with_capacity(items.len());
    for item in items {
        let size = item.value();
        let pos = match bins.iter().position(|b| b.fits(size, cap.limit())) {
            Some(pos) => pos,
            None => {
                bins.push(BinState::new(bins.len() + 1));
                bins.len() - 1
            }
        };
        bins[pos].add(size);
        assignment.push(bins[pos].index);
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
    fn first_fit_hand_trace() {
        let i = inst(&[(3, 10), (8, 10), (3, 10), (4, 10)]);
        let p = run_ff(&i, CardinalityCap::UNBOUNDED);
        assert_eq!(p.assignment, vec![1, 2, 1, 1]);

        let p = run_ff(&inst(&[(1, 2), (1, 2), (1, 2)]), CardinalityCap::UNBOUNDED);
        assert_eq!(p.num_bins(), 2);
        assert_eq!(run_ff(&Instance::default(), CardinalityCap::UNBOUNDED).num_bins(), 0);
    }

    #[test]
    fn first_fit_decreasing_hand_trace() {
        let i = inst(&[(3, 10), (8, 10), (3, 10), (4, 10)]);
        let p = run_ffd(&i, CardinalityCap::UNBOUNDED);
        // {0.8}, {0.4, 0.3, 0.3}
        assert_eq!(p.assignment, vec![2, 1, 2, 2]);

        let p = run_ffd(&inst(&[(6, 10), (6, 10), (6, 10)]), CardinalityCap::UNBOUNDED);
        assert_eq!(p.num_bins(), 3);
        let p = run_ffd(&inst(&[(1, 2), (1, 2)]), CardinalityCap::UNBOUNDED);
        assert_eq!(p.num_bins(), 1);
    }

    #[test]
    fn capped_first_fit() {
        let i = inst(&[(1, 10); 5]);
        let p = run_ff(&i, CardinalityCap::at_most(2).unwrap());
        assert_eq!(p.assignment, vec![1, 1, 2, 2, 3]);
    }
}
