use num_rational::BigRational;
use num_traits::{One, Zero};

use super::OracleError;
use crate::algorithms::CardinalityCap;
use crate::model::{Instance, Packing};

pub const ENUMERATION_LIMIT: usize = 9;

/// Calls `visit` once for every feasible packing, up to relabeling of bins.
/// Bins are numbered by their smallest item index. Returns the number of
/// packings visited.
pub fn for_each_packing<F: FnMut(&Packing)>(
    instance: &Instance,
    cap: CardinalityCap,
    mut visit: F,
) -> Result<usize, OracleError> {
    let n = instance.len();
    if n > ENUMERATION_LIMIT {
        return Err(OracleError::TooLarge {
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let sizes: Vec<BigRational> = instance.items().iter().map(|s| s.value().clone()).collect();
    let mut state = Walk {
        sizes: &sizes,
        k: cap.limit(),
        loads: Vec::new(),
        counts: Vec::new(),
        assignment: vec![0; n],
        visited: 0,
    };
    state.walk(0, &mut visit);
    Ok(state.visited)
}

/// Every feasible packing, collected.
pub fn enumerate_packings(
    instance: &Instance,
    cap: CardinalityCap,
) -> Result<Vec<Packing>, OracleError> {
    let mut out = Vec::new();
    for_each_packing(instance, cap, |p| out.push(p.clone()))?;
    Ok(out)
}

struct Walk<'a> {
    sizes: &'a [BigRational],
    k: Option<usize>,
    loads: Vec<BigRational>,
    counts: Vec<usize>,
    assignment: Vec<usize>,
    visited: usize,
}

impl Walk<'_> {
    // Restricted growth strings: item i joins an existing block or opens
    // block max+1, so each set partition appears exactly once.
    fn walk<F: FnMut(&Packing)>(&mut self, i: usize, visit: &mut F) {
        if i == self.sizes.len() {
            self.visited += 1;
            visit(&Packing::new(self.assignment.clone(), self.k));
            return;
        }
        let size = &self.sizes[i];
        for b in 0..=self.loads.len() {
            if b == self.loads.len() {
                self.loads.push(BigRational::zero());
                self.counts.push(0);
            }
            let fits = &self.loads[b] + size <= BigRational::one()
                && self.k.is_none_or(|k| self.counts[b] < k);
            if fits {
                self.loads[b] += size;
                self.counts[b] += 1;
                self.assignment[i] = b + 1;
                self.walk(i + 1, visit);
                self.loads[b] -= size;
                self.counts[b] -= 1;
            }
            if self.counts[b] == 0 {
                self.loads.pop();
                self.counts.pop();
            }
        }
    }
}
