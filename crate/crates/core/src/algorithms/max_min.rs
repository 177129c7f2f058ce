use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{CardinalityCap, End, Trace, TraceEvent};
use crate::model::{Instance, Packing};

/// MM (unbounded cap) or MM_k: sort non-increasing, then fill a single open
/// bin with the head while it fits, otherwise the tail, otherwise close it.
/// With a finite cap the bin also closes after k items.
pub fn run_mm(instance: &Instance, cap: CardinalityCap) -> (Packing, Trace) {
    let (sorted, order) = instance.sorted_with_order();
    let a = sorted.items();
    let n = a.len();
    let one = BigRational::one();
    let per_bin = cap.limit().unwrap_or(usize::MAX);

    let mut assignment = vec![0; n];
    let mut events = Vec::with_capacity(n);
    // remaining items are a[h..end]
    let mut h = 0;
    let mut end = n;
    let mut l = 1;
    while h < end {
        let mut load = BigRational::zero();
        let mut packed = 0;
        while packed < per_bin && h < end {
            let (pos, side) = if &load + a[h].value() <= one {
                h += 1;
                (h - 1, End::Head)
            } else if &load + a[end - 1].value() <= one {
                end -= 1;
                (end, End::Tail)
            } else {
                break;
            };
            load += a[pos].value();
            packed += 1;
            let item = order[pos];
            assignment[item] = l;
            events.push(TraceEvent {
                item,
                end: side,
                bin: l,
            });
        }
        l += 1;
    }

    let packing = Packing::new(assignment, cap.limit());
    let trace = Trace {
        events,
        packing: packing.clone(),
    };
    (packing, trace)
}
