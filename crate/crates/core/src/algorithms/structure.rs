use std::collections::BTreeSet;

use num_rational::BigRational;

use crate::model::{Instance, Packing};

/// For a packing of a sorted instance: the largest `p` such that item `p - 1`
/// (0-based) is a class-1 item (size > 1/2) alone in its bin. `None` when
/// no bin holds a sole class-1 item.
pub fn sole_class1_prefix(instance: &Instance, packing: &Packing) -> Option<usize> {
    let half = BigRational::new(1.into(), 2.into());
    let bins = packing.bins();
    let mut best = None;
    for bin in &bins {
        if let [only] = bin.as_slice() {
            if instance.items()[*only].value() > &half {
                best = best.max(Some(only + 1));
            }
        }
    }
    best
}

/// Items sharing a bin with any of items `0..p`, excluding those items.
pub fn partners_of_prefix(packing: &Packing, p: usize) -> BTreeSet<usize> {
    let prefix_bins: BTreeSet<usize> = packing.assignment[..p].iter().copied().collect();
    packing
        .assignment
        .iter()
        .enumerate()
        .skip(p)
        .filter(|(_, b)| prefix_bins.contains(b))
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{run_mm, CardinalityCap};

    #[test]
    fn prefix_and_partners() {
        // MM_2 on (0.8, 0.7, 0.6, 0.3, 0.2): {0.8, 0.2}, {0.7, 0.3}, {0.6}
        let i = Instance::from_ratios(&[(8, 10), (7, 10), (6, 10), (3, 10), (2, 10)]).unwrap();
        let (p, _) = run_mm(&i, CardinalityCap::at_most(2).unwrap());
        assert_eq!(p.assignment, vec![1, 2, 3, 2, 1]);
        assert_eq!(sole_class1_prefix(&i, &p), Some(3));
        assert_eq!(partners_of_prefix(&p, 3), BTreeSet::from([3, 4]));
    }

    #[test]
    fn no_sole_large_item() {
        let i = Instance::from_ratios(&[(6, 10), (4, 10)]).unwrap();
        let (p, _) = run_mm(&i, CardinalityCap::at_most(2).unwrap());
        assert_eq!(sole_class1_prefix(&i, &p), None);
    }
}
