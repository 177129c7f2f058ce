use std::collections::HashSet;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{OptResult, OracleError, DEFAULT_LIMIT};
use crate::algorithms::{unsort, CardinalityCap};
use crate::model::{Instance, Packing};

/// Entries kept in the transposition table before it stops growing.
const MEMO_CAP: usize = 2_000_000;

/// Exact minimum number of bins, with the default item limit.
pub fn opt_exact(instance: &Instance, cap: CardinalityCap) -> Result<OptResult, OracleError> {
    opt_exact_with_limit(instance, cap, DEFAULT_LIMIT)
}

/// Exact minimum number of bins for instances with at most `limit` items.
///
/// Depth-first branch and bound over items in non-increasing order. Each
/// item goes into one bin per distinct (load, count) state or into a new
/// bin. The incumbent starts from First Fit Decreasing.
pub fn opt_exact_with_limit(
    instance: &Instance,
    cap: CardinalityCap,
    limit: usize,
) -> Result<OptResult, OracleError> {
    let n = instance.len();
    if n > limit {
        return Err(OracleError::TooLarge { n, limit });
    }
    let (sorted, order) = instance.sorted_with_order();
    let (scaled, capacity) = scale(&sorted);
    let headroom = BigUint::from(n as u64 + 2);
    let (bins, assignment, nodes) = if &capacity * &headroom <= BigUint::from(u64::MAX) {
        let w: Vec<u64> = scaled.iter().map(|v| v.to_u64().expect("checked")).collect();
        solve(&w, capacity.to_u64().expect("checked"), cap.limit())
    } else if &capacity * &headroom <= BigUint::from(u128::MAX) {
        let w: Vec<u128> = scaled.iter().map(|v| v.to_u128().expect("checked")).collect();
        solve(&w, capacity.to_u128().expect("checked"), cap.limit())
    } else {
        solve(&scaled, capacity, cap.limit())
    };
    Ok(OptResult {
        opt: bins,
        witness: Packing::new(unsort(&assignment, &order), cap.limit()),
        nodes_explored: nodes,
    })
}

/// Integer sizes over the common denominator, and that denominator.
fn scale(sorted: &Instance) -> (Vec<BigUint>, BigUint) {
    let lcm = sorted
        .items()
        .iter()
        .fold(BigInt::from(1), |acc, s| acc.lcm(s.value().denom()));
    let w = sorted
        .items()
        .iter()
        .map(|s| {
            let v = s.value();
            (v.numer() * (&lcm / v.denom()))
                .to_biguint()
                .expect("sizes are positive")
        })
        .collect();
    (w, lcm.to_biguint().expect("positive"))
}

trait Weight: Clone + Ord + Hash + Debug + Integer {}
impl<T: Clone + Ord + Hash + Debug + Integer> Weight for T {}

fn div_ceil<T: Weight>(a: &T, b: &T) -> T {
    let (q, r) = a.div_rem(b);
    if r.is_zero() {
        q
    } else {
        q + T::one()
    }
}

fn to_usize<T: Weight>(v: &T) -> usize {
    // bin counts are at most n, so a linear count-down is cheap
    let mut count = 0;
    let mut x = v.clone();
    while !x.is_zero() {
        x = x - T::one();
        count += 1;
    }
    count
}

struct Search<'a, T> {
    w: &'a [T],
    capacity: T,
    k: Option<usize>,
    suffix: Vec<T>,
    lower: usize,
    best: usize,
    best_assignment: Vec<usize>,
    loads: Vec<T>,
    counts: Vec<usize>,
    assignment: Vec<usize>,
    nodes: u64,
    memo: HashSet<(usize, Vec<(T, usize)>)>,
}

/// Returns (optimum, assignment over sorted positions, nodes explored).
fn solve<T: Weight>(w: &[T], capacity: T, k: Option<usize>) -> (usize, Vec<usize>, u64) {
    let n = w.len();
    if n == 0 {
        return (0, Vec::new(), 0);
    }
    let mut suffix = vec![T::zero(); n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1].clone() + w[i].clone();
    }
    let two = T::one() + T::one();
    let large = w.iter().filter(|x| (*x).clone() * two.clone() > capacity).count();
    let mut lower = to_usize(&div_ceil(&suffix[0], &capacity)).max(large);
    if let Some(k) = k {
        lower = lower.max(n.div_ceil(k));
    }

    let (ffd_bins, ffd_assignment) = first_fit(w, &capacity, k);
    let mut search = Search {
        w,
        capacity,
        k,
        suffix,
        lower,
        best: ffd_bins,
        best_assignment: ffd_assignment,
        loads: Vec::new(),
        counts: Vec::new(),
        assignment: vec![0; n],
        nodes: 0,
        memo: HashSet::new(),
    };
    if search.best > search.lower {
        search.dfs(0);
    }
    (search.best, search.best_assignment, search.nodes)
}

fn first_fit<T: Weight>(w: &[T], capacity: &T, k: Option<usize>) -> (usize, Vec<usize>) {
    let mut loads: Vec<T> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    let mut assignment = Vec::with_capacity(w.len());
    for x in w {
        let pos = (0..loads.len()).find(|&b| {
            loads[b].clone() + x.clone() <= *capacity && k.is_none_or(|k| counts[b] < k)
        });
        let b = pos.unwrap_or_else(|| {
            loads.push(T::zero());
            counts.push(0);
            loads.len() - 1
        });
        loads[b] = loads[b].clone() + x.clone();
        counts[b] += 1;
        assignment.push(b + 1);
    }
    (loads.len(), assignment)
}

impl<T: Weight> Search<'_, T> {
    /// Bins still needed beyond the open ones, by size and by cardinality.
    fn extra_needed(&self, i: usize) -> usize {
        let n = self.w.len();
        let smallest = &self.w[n - 1];
        let mut free = T::zero();
        let mut slots = 0usize;
        for (load, &count) in self.loads.iter().zip(&self.counts) {
            let room = self.capacity.clone() - load.clone();
            let open = self.k.is_none_or(|k| count < k);
            if open && room >= *smallest {
                free = free + room;
                slots += self.k.map_or(0, |k| k - count);
            }
        }
        let rest = &self.suffix[i];
        let by_size = if *rest > free {
            to_usize(&div_ceil(&(rest.clone() - free), &self.capacity))
        } else {
            0
        };
        let by_count = match self.k {
            Some(k) => (n - i).saturating_sub(slots).div_ceil(k),
            None => 0,
        };
        by_size.max(by_count)
    }

    /// Returns true once a packing meeting the lower bound is found.
    fn dfs(&mut self, i: usize) -> bool {
        self.nodes += 1;
        let n = self.w.len();
        if i == n {
            if self.loads.len() < self.best {
                self.best = self.loads.len();
                self.best_assignment = self.assignment.clone();
            }
            return self.best <= self.lower;
        }
        if self.loads.len() + self.extra_needed(i) >= self.best {
            return false;
        }
        if self.memo.len() < MEMO_CAP {
            let mut state: Vec<(T, usize)> = self
                .loads
                .iter()
                .cloned()
                .zip(self.counts.iter().copied())
                .collect();
            state.sort();
            if !self.memo.insert((i, state)) {
                return false;
            }
        }

        let item = self.w[i].clone();
        let mut candidates: Vec<usize> = (0..self.loads.len())
            .filter(|&b| {
                self.loads[b].clone() + item.clone() <= self.capacity
                    && self.k.is_none_or(|k| self.counts[b] < k)
            })
            .collect();
        candidates.sort_by(|&a, &b| self.loads[b].cmp(&self.loads[a]));
        candidates.dedup_by(|a, b| {
            self.loads[*a] == self.loads[*b] && self.counts[*a] == self.counts[*b]
        });

        // Without a cardinality cap, an item that exactly fills a bin can
        // always go there: whatever else would fill that gap fits in its place.
        if self.k.is_none() {
            if let Some(&b) = candidates
                .iter()
                .find(|&&b| self.loads[b].clone() + item.clone() == self.capacity)
            {
                return self.place(i, b);
            }
        }

        for b in candidates {
            if self.place(i, b) {
                return true;
            }
        }
        if self.loads.len() + 1 < self.best {
            self.loads.push(T::zero());
            self.counts.push(0);
            let b = self.loads.len() - 1;
            let done = self.place(i, b);
            self.loads.pop();
            self.counts.pop();
            if done {
                return true;
            }
        }
        false
    }

    fn place(&mut self, i: usize, b: usize) -> bool {
        let item = self.w[i].clone();
        self.loads[b] = self.loads[b].clone() + item.clone();
        self.counts[b] += 1;
        self.assignment[i] = b + 1;
        let done = self.dfs(i + 1);
        self.loads[b] = self.loads[b].clone() - item;
        self.counts[b] -= 1;
        done
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(pairs: &[(i64, i64)]) -> Instance {
        Instance::from_ratios(pairs).unwrap()
    }

    #[test]
    fn small_optima() {
        let r = opt_exact(&inst(&[(1, 2); 4]), CardinalityCap::UNBOUNDED).unwrap();
        assert_eq!(r.opt, 2);

        let i = inst(&[(6, 10), (5, 10), (4, 10), (3, 10), (2, 10)]);
        let r = opt_exact(&i, CardinalityCap::UNBOUNDED).unwrap();
        assert_eq!(r.opt, 2);
        assert!(r.witness.validate(&i).unwrap().is_ok());
        assert_eq!(r.witness.num_bins(), 2);

        let r = opt_exact(&inst(&[(1, 10); 5]), CardinalityCap::at_most(2).unwrap()).unwrap();
        assert_eq!(r.opt, 3);
        assert_eq!(r.witness.cap, Some(2));

        let r = opt_exact(&Instance::default(), CardinalityCap::UNBOUNDED).unwrap();
        assert_eq!(r.opt, 0);
    }

    #[test]
    fn ffd_is_beaten_when_possible() {
        let sizes = [56, 39, 28, 21, 46, 16, 39, 42];
        let i = inst(&sizes.map(|s| (s, 100)));
        assert_eq!(crate::algorithms::run_ffd(&i, CardinalityCap::UNBOUNDED).num_bins(), 4);
        let r = opt_exact(&i, CardinalityCap::UNBOUNDED).unwrap();
        assert_eq!(r.opt, 3);
        assert!(r.witness.validate(&i).unwrap().is_ok());
    }

    #[test]
    fn limit_enforced() {
        let i = inst(&[(1, 10); 17]);
        assert_eq!(
            opt_exact(&i, CardinalityCap::UNBOUNDED).unwrap_err(),
            OracleError::TooLarge { n: 17, limit: 16 }
        );
        assert!(opt_exact_with_limit(&i, CardinalityCap::UNBOUNDED, 20).is_ok());
    }

    #[test]
    fn huge_denominators_fall_back_to_big_integers() {
        let i = Instance::new(vec![
            "1/340282366920938463463374607431768211297".parse().unwrap(),
            "1/2".parse().unwrap(),
            "1/3".parse().unwrap(),
        ]);
        let r = opt_exact(&i, CardinalityCap::UNBOUNDED).unwrap();
        assert_eq!(r.opt, 1);
    }
}
