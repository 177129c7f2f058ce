#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use binpack_core::model::{Instance, Packing};

pub fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

pub fn int(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Sizes scaled to integers over their common denominator.
pub fn scaled(instance: &Instance) -> (Vec<u128>, u128) {
    let den = instance
        .items()
        .iter()
        .fold(BigInt::one(), |acc, s| acc.lcm(s.value().denom()));
    let sizes = instance
        .items()
        .iter()
        .map(|s| {
            (s.value() * BigRational::from_integer(den.clone()))
                .to_integer()
                .to_u128()
                .expect("scaled size fits")
        })
        .collect();
    (sizes, den.to_u128().expect("denominator fits"))
}

/// Minimum bin count by dynamic programming over item subsets.
pub fn dp_opt(instance: &Instance, cap: Option<usize>) -> usize {
    let n = instance.len();
    assert!(n <= 12, "subset DP is for small instances");
    if n == 0 {
        return 0;
    }
    let (sizes, one) = scaled(instance);
    let full = (1usize << n) - 1;
    let mut load = vec![0u128; full + 1];
    for mask in 1..=full {
        let low = mask.trailing_zeros() as usize;
        load[mask] = load[mask & (mask - 1)] + sizes[low];
    }
    let ok = |mask: usize| {
        load[mask] <= one && cap.is_none_or(|k| mask.count_ones() as usize <= k)
    };
    let mut best = vec![usize::MAX; full + 1];
    best[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        // bins containing the lowest item: low | sub for sub ⊆ rest
        let mut sub = rest;
        loop {
            let bin = low | sub;
            if ok(bin) && best[mask ^ bin] != usize::MAX {
                best[mask] = best[mask].min(best[mask ^ bin] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    best[full]
}

/// `n − ν` with ν a maximum matching of items whose pair fits.
pub fn matching_opt2(instance: &Instance) -> usize {
    let n = instance.len();
    let (sizes, one) = scaled(instance);
    let mut memo: HashMap<u32, usize> = HashMap::new();
    fn go(mask: u32, sizes: &[u128], one: u128, memo: &mut HashMap<u32, usize>) -> usize {
        if mask == 0 {
            return 0;
        }
        if let Some(&v) = memo.get(&mask) {
            return v;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut best = go(rest, sizes, one, memo);
        let mut m = rest;
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            m &= m - 1;
            if sizes[i] + sizes[j] <= one {
                best = best.max(1 + go(rest & !(1 << j), sizes, one, memo));
            }
        }
        memo.insert(mask, best);
        best
    }
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    n - go(full, &sizes, one, &mut memo)
}

/// π_1 = 2, π_{i+1} = π_i² − π_i + 1.
pub fn pi_ref(i: usize) -> BigInt {
    let mut p = BigInt::from(2);
    for _ in 1..i {
        p = &p * &p - &p + 1;
    }
    p
}

pub fn lambda_ref(k: usize) -> BigRational {
    let kk = r(1, k as i64);
    (1..=k)
        .map(|i| {
            let term = BigRational::new(BigInt::one(), pi_ref(i) - 1);
            if term > kk {
                term
            } else {
                kk.clone()
            }
        })
        .sum()
}

/// Checks a witness packing by hand: every bin within capacity and cap,
/// labels contiguous from 1. Returns the bin count.
pub fn check_packing(instance: &Instance, packing: &Packing) -> Result<usize, String> {
    if packing.assignment.len() != instance.len() {
        return Err("length mismatch".into());
    }
    let bins = packing.assignment.iter().copied().max().unwrap_or(0);
    let mut loads = vec![BigRational::zero(); bins + 1];
    let mut counts = vec![0usize; bins + 1];
    for (i, &b) in packing.assignment.iter().enumerate() {
        if b == 0 {
            return Err(format!("item {i} unassigned"));
        }
        loads[b] += instance.items()[i].value();
        counts[b] += 1;
    }
    for b in 1..=bins {
        if counts[b] == 0 {
            return Err(format!("bin {b} empty"));
        }
        if loads[b] > BigRational::one() {
            return Err(format!("bin {b} overfull"));
        }
        if packing.cap.is_some_and(|k| counts[b] > k) {
            return Err(format!("bin {b} over cap"));
        }
    }
    Ok(bins)
}

pub fn ceil(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}
