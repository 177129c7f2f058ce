use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::certified::{CertifiedInstance, OptBasis};
use super::AdversaryError;
use crate::analysis::{pi, BoundId};
use crate::algorithms::CardinalityCap;
use crate::model::{ceil_nonneg, GeneratorMeta, Instance, Packing, Params, Size};
use crate::oracle::{opt_exact_with_limit, DEFAULT_LIMIT};

/// Named lower-bound families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    MaxminUnit,
    MaxminBounded,
    PresortedBounded,
    KcardBounded,
    OnlineUnit,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::MaxminUnit,
        Family::MaxminBounded,
        Family::PresortedBounded,
        Family::KcardBounded,
        Family::OnlineUnit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::MaxminUnit => "maxmin-unit",
            Family::MaxminBounded => "maxmin-bounded",
            Family::PresortedBounded => "presorted-bounded",
            Family::KcardBounded => "kcard-bounded",
            Family::OnlineUnit => "online-unit",
        }
    }

    /// The lower bound this family is built to witness. `cap3` selects the
    /// k = 3 reading of the unit family.
    pub fn lower_bound(self, cap3: bool) -> BoundId {
        match self {
            Family::MaxminUnit if cap3 => BoundId::Maxmin3UnitLb,
            Family::MaxminUnit => BoundId::MaxminUnitLb,
            Family::MaxminBounded => BoundId::MaxminBoundedLb,
            Family::PresortedBounded => BoundId::PresortedBoundedLb,
            Family::KcardBounded => BoundId::KcardBoundedLb,
            Family::OnlineUnit => BoundId::OnlineUnitLb,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = AdversaryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == norm)
            .ok_or_else(|| AdversaryError::Parameter(format!("unknown family {s:?}")))
    }
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<(), AdversaryError> {
    if cond {
        Ok(())
    } else {
        Err(AdversaryError::Parameter(what()))
    }
}

fn size(v: BigRational) -> Result<Size, AdversaryError> {
    Size::new(v).map_err(|e| AdversaryError::Parameter(e.to_string()))
}

/// Assembles and checks a certified instance. The certificate is given as
/// bins of item positions. The lower-bound argument is the total size when
/// it reaches the bin count, else `fallback`, else the oracle for small
/// instances.
fn finish(
    family: Family,
    params: Params,
    items: Vec<BigRational>,
    bins: Vec<Vec<usize>>,
    cap: Option<usize>,
    fallback: Option<OptBasis>,
    require_sorted: bool,
) -> Result<CertifiedInstance, AdversaryError> {
    let mut assignment = vec![0; items.len()];
    for (b, bin) in bins.iter().enumerate() {
        for &pos in bin {
            if assignment[pos] != 0 {
                return Err(AdversaryError::Construction(format!(
                    "item {pos} assigned twice"
                )));
            }
            assignment[pos] = b + 1;
        }
    }
    let sizes = items.into_iter().map(size).collect::<Result<Vec<_>, _>>()?;
    let instance = Instance::new(sizes).with_meta(GeneratorMeta {
        name: family.name().to_string(),
        params: params.clone(),
    });
    if require_sorted && !instance.is_sorted_nonincreasing() {
        return Err(AdversaryError::Construction(format!(
            "{family} instance is not sorted non-increasing"
        )));
    }
    let claimed_opt = bins.len();
    let total_ceil = ceil_nonneg(&instance.total_size());
    let basis = if total_ceil == BigInt::from(claimed_opt) {
        OptBasis::TotalSize
    } else if let Some(b) = fallback {
        b
    } else if instance.len() <= DEFAULT_LIMIT {
        let cap = CardinalityCap::from_option(cap)?;
        let opt = opt_exact_with_limit(&instance, cap, DEFAULT_LIMIT)?.opt;
        if opt != claimed_opt {
            return Err(AdversaryError::Parameter(format!(
                "parameters give optimum {opt}, not {claimed_opt}"
            )));
        }
        OptBasis::Oracle
    } else {
        return Err(AdversaryError::Parameter(format!(
            "parameters leave total size below {claimed_opt} bins and the instance is too large to confirm"
        )));
    };
    let certified = CertifiedInstance {
        instance,
        certificate: Packing::new(assignment, cap),
        claimed_opt,
        params,
        basis,
    };
    certified.verify()?;
    Ok(certified)
}

/// Overridable rationals of the max-min 1-bounded construction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnitParams {
    pub r: Option<BigRational>,
    pub delta: Option<BigRational>,
    pub eps: Option<BigRational>,
}

/// Items `a_1..a_m`, `m` copies of `c`, then `b_m..b_1`, where
/// `a_i = 1/2 + δ r^(i-1)`, `c = 1/4 + ε`, `b_i = 1/4 − ε − δ r^(i-1)`.
pub fn gen_maxmin_unit_lb(m: usize, cap3: bool) -> Result<CertifiedInstance, AdversaryError> {
    gen_maxmin_unit_lb_with(m, cap3, &UnitParams::default())
}

pub fn gen_maxmin_unit_lb_with(
    m: usize,
    cap3: bool,
    overrides: &UnitParams,
) -> Result<CertifiedInstance, AdversaryError> {
    require(m >= 2 && m.is_multiple_of(2), || format!("m = {m} must be even and at least 2"))?;
    let exp = i32::try_from(m).map_err(|_| AdversaryError::Parameter("m too large".into()))? - 3;
    let r = overrides.r.clone().unwrap_or_else(|| rat(1, 3));
    let delta = overrides.delta.clone().unwrap_or_else(|| rat(1, 40));
    require(r > BigRational::zero() && r < BigRational::one(), || format!("r = {r} outside (0, 1)"))?;
    require(delta > BigRational::zero(), || format!("δ = {delta} must be positive"))?;
    let slack = BigRational::one() - &r - &r * &r;
    let scale = &delta * r.pow(exp) * &slack;
    let eps = overrides.eps.clone().unwrap_or_else(|| &scale / BigInt::from(4));
    require(eps > BigRational::zero(), || format!("ε = {eps} must be positive"))?;
    require(slack > BigRational::zero(), || format!("1 − r − r² ≤ 0 for r = {r}"))?;
    require(&eps + &delta < rat(1, 20), || format!("ε + δ = {} not below 1/20", &eps + &delta))?;
    require(scale > &eps * BigInt::from(2), || {
        "δ r^(m−3) (1 − r − r²) > 2ε fails".to_string()
    })?;

    let quarter = rat(1, 4);
    let half = rat(1, 2);
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    let mut step = delta.clone();
    for _ in 0..m {
        a.push(&half + &step);
        b.push(&quarter - &eps - &step);
        step = &step * &r;
    }
    let c = &quarter + &eps;
    require(
        a.iter().all(|x| x > &half) && a[0] <= &half + &delta && a[0] < BigRational::one(),
        || "a_i outside (1/2, 1/2 + δ]".to_string(),
    )?;
    require(c > quarter && c < rat(3, 10), || format!("c = {c} outside (1/4, 3/10)"))?;
    require(b.iter().all(|x| x > &rat(1, 5) && x < &quarter), || {
        "b_i outside (1/5, 1/4)".to_string()
    })?;

    let mut items = a;
    items.extend(std::iter::repeat_n(c, m));
    items.extend(b.into_iter().rev());
    let bins = (1..=m).map(|i| vec![i - 1, m + i - 1, 3 * m - i]).collect();

    let mut params = Params::new();
    params.insert("m".into(), m.into());
    if cap3 {
        params.insert("k".into(), 3usize.into());
    }
    params.insert("r".into(), r.into());
    params.insert("delta".into(), delta.into());
    params.insert("eps".into(), eps.into());
    finish(Family::MaxminUnit, params, items, bins, cap3.then_some(3), None, true)
}

/// `m` copies each of `1/2 + ε`, `1/3 + ε`, `1/6 − 2ε`, with ε = 1/100.
pub fn gen_maxmin_bounded_lb(m: usize, b: usize) -> Result<CertifiedInstance, AdversaryError> {
    gen_maxmin_bounded_lb_with_eps(m, b, rat(1, 100))
}

pub fn gen_maxmin_bounded_lb_with_eps(
    m: usize,
    b: usize,
    eps: BigRational,
) -> Result<CertifiedInstance, AdversaryError> {
    require(m >= 1 && m.is_multiple_of(3), || format!("m = {m} must be a positive multiple of 3"))?;
    require(b >= 1, || "B must be at least 1".to_string())?;
    require(m >= 2 * b, || format!("m = {m} is below 2B = {}", 2 * b))?;
    require(eps > BigRational::zero() && eps < rat(1, 84), || format!("ε = {eps} outside (0, 1/84)"))?;

    let sizes = [
        rat(1, 2) + &eps,
        rat(1, 3) + &eps,
        rat(1, 6) - &eps * BigInt::from(2),
    ];
    let items = sizes
        .iter()
        .flat_map(|s| std::iter::repeat_n(s.clone(), m))
        .collect();
    let bins = (0..m).map(|i| vec![i, m + i, 2 * m + i]).collect();

    let mut params = Params::new();
    params.insert("m".into(), m.into());
    params.insert("B".into(), b.into());
    params.insert("eps".into(), eps.into());
    finish(Family::MaxminBounded, params, items, bins, None, None, true)
}

/// `m` copies each of `1/π_i + ε` for `i = 1..=K`, ε = 1/(K(π_{K+1} − 1)),
/// so one item of each size fills a bin exactly.
pub fn gen_presorted_bounded_lb(classes: usize, m: usize) -> Result<CertifiedInstance, AdversaryError> {
    require((1..=5).contains(&classes), || format!("K = {classes} outside 1..=5"))?;
    let eps = BigRational::new(
        BigInt::one(),
        BigInt::from(classes) * (pi(classes + 1) - BigInt::one()),
    );
    gen_presorted_bounded_lb_with_eps(classes, m, eps)
}

pub fn gen_presorted_bounded_lb_with_eps(
    classes: usize,
    m: usize,
    eps: BigRational,
) -> Result<CertifiedInstance, AdversaryError> {
    require((1..=5).contains(&classes), || format!("K = {classes} outside 1..=5"))?;
    require(m >= 1, || "m must be at least 1".to_string())?;
    require(eps > BigRational::zero(), || format!("ε = {eps} must be positive"))?;
    let sizes: Vec<BigRational> = (1..=classes)
        .map(|i| BigRational::new(BigInt::one(), pi(i)) + &eps)
        .collect();
    for (i, s) in sizes.iter().enumerate() {
        let fit = s * BigRational::from_integer(pi(i + 1) - BigInt::one());
        require(fit <= BigRational::one(), || {
            format!("π_{} − 1 items of size {s} exceed a bin", i + 1)
        })?;
    }
    let bin_sum: BigRational = sizes.iter().sum();
    require(bin_sum <= BigRational::one(), || format!("one item per class sums to {bin_sum} > 1"))?;

    let items = sizes
        .iter()
        .flat_map(|s| std::iter::repeat_n(s.clone(), m))
        .collect();
    let bins = (0..m)
        .map(|j| (0..classes).map(|i| i * m + j).collect())
        .collect();

    let mut params = Params::new();
    params.insert("K".into(), classes.into());
    params.insert("m".into(), m.into());
    params.insert("eps".into(), eps.into());
    finish(Family::PresortedBounded, params, items, bins, None, None, true)
}

/// `m` copies each of `1/2 + ε`, `1/3 + ε`, `1/6 − 3ε`, then `(k−3)m` items
/// of `ε/(k−3)`, with ε = 1/200. Certificate bins hold exactly `k` items.
pub fn gen_kcard_bounded_lb(k: usize, m: usize, b: usize) -> Result<CertifiedInstance, AdversaryError> {
    gen_kcard_bounded_lb_with_eps(k, m, b, rat(1, 200))
}

pub fn gen_kcard_bounded_lb_with_eps(
    k: usize,
    m: usize,
    b: usize,
    eps: BigRational,
) -> Result<CertifiedInstance, AdversaryError> {
    require(k >= 4, || format!("k = {k} must be at least 4"))?;
    require(b >= 1, || "B must be at least 1".to_string())?;
    require(m >= 1 && m.is_multiple_of(3), || format!("m = {m} is not divisible by 3"))?;
    require(m.is_multiple_of(k - 1), || format!("m = {m} is not divisible by k − 1 = {}", k - 1))?;
    require(m >= (k - 1) * b, || format!("m = {m} is below (k − 1)B = {}", (k - 1) * b))?;
    require(eps > BigRational::zero() && eps < rat(1, 126), || format!("ε = {eps} outside (0, 1/126)"))?;

    let small = &eps / BigInt::from(k - 3);
    let mut items: Vec<BigRational> = Vec::with_capacity(k * m);
    for s in [
        rat(1, 2) + &eps,
        rat(1, 3) + &eps,
        rat(1, 6) - &eps * BigInt::from(3),
    ] {
        items.extend(std::iter::repeat_n(s, m));
    }
    items.extend(std::iter::repeat_n(small, (k - 3) * m));
    let bins = (0..m)
        .map(|i| {
            let mut bin = vec![i, m + i, 2 * m + i];
            bin.extend((0..k - 3).map(|j| 3 * m + i * (k - 3) + j));
            bin
        })
        .collect();

    let mut params = Params::new();
    params.insert("k".into(), k.into());
    params.insert("m".into(), m.into());
    params.insert("B".into(), b.into());
    params.insert("eps".into(), eps.into());
    finish(Family::KcardBounded, params, items, bins, Some(k), None, true)
}

/// Interleaved `a_1, b_1, …, a_N, b_N` with `N = m − 1`,
/// `a_i = 1/2 + iε − (k−2)δ`, `b_i = 1/2 − (i−1)ε`, then `(k−2)(N−1)` items
/// of size δ. Defaults ε = 1/(4N), δ = ε/(2(k−2)).
///
/// The order is not sorted: the sequence is aimed at online algorithms.
pub fn gen_online_unit_lb(k: usize, m: usize) -> Result<CertifiedInstance, AdversaryError> {
    gen_online_unit_lb_with(k, m, None, None)
}

pub fn gen_online_unit_lb_with(
    k: usize,
    m: usize,
    eps: Option<BigRational>,
    delta: Option<BigRational>,
) -> Result<CertifiedInstance, AdversaryError> {
    require(k >= 2, || format!("k = {k} must be at least 2"))?;
    require(m >= 3, || format!("m = {m} must be at least 3"))?;
    let n = m - 1;
    let eps = eps.unwrap_or_else(|| BigRational::new(BigInt::one(), BigInt::from(4 * n)));
    let delta = if k > 2 {
        delta.unwrap_or_else(|| &eps / BigInt::from(2 * (k - 2)))
    } else {
        BigRational::zero()
    };
    let filler = &delta * BigInt::from(k - 2);
    require(eps > BigRational::zero() && &eps * BigInt::from(n) < rat(1, 2), || {
        format!("ε = {eps} violates 0 < Nε < 1/2")
    })?;
    if k > 2 {
        require(delta > BigRational::zero() && filler < eps, || {
            format!("δ = {delta} violates 0 < (k−2)δ < ε")
        })?;
    }

    let half = rat(1, 2);
    let mut items = Vec::with_capacity(2 * n + (k - 2) * (n - 1));
    for i in 1..=n {
        items.push(&half + &eps * BigInt::from(i) - &filler);
        items.push(&half - &eps * BigInt::from(i - 1));
    }
    items.extend(std::iter::repeat_n(delta.clone(), (k - 2) * (n - 1)));
    let a = |i: usize| 2 * (i - 1);
    let b = |i: usize| 2 * (i - 1) + 1;
    let mut bins: Vec<Vec<usize>> = (1..n)
        .map(|i| {
            let mut bin = vec![a(i), b(i + 1)];
            bin.extend((0..k - 2).map(|j| 2 * n + (i - 1) * (k - 2) + j));
            bin
        })
        .collect();
    bins.push(vec![b(1)]);
    bins.push(vec![a(n)]);

    let mut params = Params::new();
    params.insert("k".into(), k.into());
    params.insert("m".into(), m.into());
    params.insert("eps".into(), eps.into());
    if k > 2 {
        params.insert("delta".into(), delta.into());
    }
    finish(
        Family::OnlineUnit,
        params,
        items,
        bins,
        Some(k),
        Some(OptBasis::LargeItemBound),
        false,
    )
}
