use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::AdversaryError;
use crate::algorithms::{CardinalityCap, DecisionProcedure, End, Session, SpaceBound};
use crate::model::{GeneratorMeta, Instance, Params, Size};
use crate::oracle::opt_exact_with_limit;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdversaryOptions {
    /// Must lie in (0, 1/36).
    pub eps: BigRational,
    pub space: SpaceBound,
    /// Instances up to this many items get their optimum confirmed by the
    /// exact oracle.
    pub oracle_limit: usize,
}

impl Default for AdversaryOptions {
    fn default() -> Self {
        AdversaryOptions {
            eps: BigRational::new(1.into(), 40.into()),
            space: SpaceBound::UNBOUNDED,
            oracle_limit: 26,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chosen {
    Minus,
    Plus,
}

impl fmt::Display for Chosen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chosen::Minus => "I-",
            Chosen::Plus => "I+",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdversaryOutcome {
    pub chosen: Chosen,
    pub instance: Instance,
    /// Large items packed from the head before the interruption.
    pub n1: usize,
    /// Small items packed from the tail before the interruption.
    pub n2: usize,
    pub alg_bins: usize,
    pub opt_bins: usize,
    /// `alg_bins > 16/15 · (opt_bins − 1)`.
    pub inequality_ok: bool,
    /// Whether the exact oracle confirmed both optima.
    pub opt_confirmed: bool,
}

fn beats(alg: usize, opt: usize) -> bool {
    15 * alg > 16 * opt.saturating_sub(1)
}

fn build(
    name: &str,
    m: usize,
    eps: &BigRational,
    groups: &[(BigRational, usize)],
) -> Result<Instance, AdversaryError> {
    let mut items = Vec::new();
    for (s, count) in groups {
        let s = Size::new(s.clone()).map_err(|e| AdversaryError::Parameter(e.to_string()))?;
        items.extend(std::iter::repeat_n(s, *count));
    }
    let mut params = Params::new();
    params.insert("m".into(), m.into());
    params.insert("eps".into(), eps.clone().into());
    Ok(Instance::new(items).with_meta(GeneratorMeta {
        name: name.into(),
        params,
    }))
}

/// Optimum of `b` items of size `1/3 + 2ε` and `s` of size `1/3 − 3ε`.
fn opt_minus(b: usize, s: usize) -> usize {
    if 2 * b <= s {
        (b + s).div_ceil(3)
    } else {
        (2 * b + s).div_ceil(4)
    }
}

fn confirm(
    label: &'static str,
    instance: &Instance,
    closed_form: usize,
    limit: usize,
) -> Result<bool, AdversaryError> {
    if instance.len() > limit {
        return Ok(false);
    }
    let oracle = opt_exact_with_limit(instance, CardinalityCap::UNBOUNDED, limit)?.opt;
    if oracle != closed_form {
        return Err(AdversaryError::OptMismatch {
            instance: label,
            closed_form,
            oracle,
        });
    }
    Ok(true)
}

/// Plays the two-instance adversary against a max-min procedure.
///
/// `I+` holds `N = 4m` items each of `1/3 + 2ε`, `1/3 + ε`, `1/3 − 3ε`. The
/// run is interrupted once the procedure packs the last large item or the
/// first small one; `N1` and `N2` count the head and tail packs so far.
/// `I−` holds `N1 + 1` large and `N2 + 1` small items, so the procedure sees
/// the same observations up to that point. The instance on which the
/// procedure exceeds `16/15 · (OPT − 1)` is returned.
pub fn adversary_unbounded<P>(
    procedure: P,
    m: usize,
    options: &AdversaryOptions,
) -> Result<AdversaryOutcome, AdversaryError>
where
    P: DecisionProcedure + Clone,
{
    if m == 0 {
        return Err(AdversaryError::Parameter("m must be positive".into()));
    }
    let eps = &options.eps;
    if *eps <= BigRational::zero() || *eps >= BigRational::new(1.into(), 36.into()) {
        return Err(AdversaryError::Parameter(format!("ε = {eps} outside (0, 1/36)")));
    }
    let third = BigRational::new(1.into(), 3.into());
    let large = &third + eps * BigInt::from(2);
    let middle = &third + eps;
    let small = &third - eps * BigInt::from(3);
    let n = 4 * m;

    let plus = build(
        "adversary-plus",
        m,
        eps,
        &[(large.clone(), n), (middle, n), (small.clone(), n)],
    )?;
    let mut fresh = procedure.clone();
    let mut proc_plus = procedure;
    let mut session = Session::new(&plus, options.space, CardinalityCap::UNBOUNDED);
    while let Some(event) = session.next_event(&mut proc_plus)? {
        if event.item == n - 1 || event.item == 2 * n {
            break;
        }
    }
    let prefix: Vec<(End, usize)> = session.events().iter().map(|e| (e.end, e.bin)).collect();
    let n1 = prefix.iter().filter(|(end, _)| *end == End::Head).count();
    let n2 = prefix.len() - n1;
    let (plus_packing, _) = session.finish(&mut proc_plus)?;
    let plus_alg = plus_packing.num_bins();

    let minus = build(
        "adversary-minus",
        m,
        eps,
        &[(large, n1 + 1), (small, n2 + 1)],
    )?;
    let mut session = Session::new(&minus, options.space, CardinalityCap::UNBOUNDED);
    for (idx, expected) in prefix.iter().enumerate() {
        let event = session.next_event(&mut fresh)?;
        if event.map(|e| (e.end, e.bin)) != Some(*expected) {
            return Err(AdversaryError::NotMaxMin { event: idx + 1 });
        }
    }
    let (minus_packing, _) = session.finish(&mut fresh)?;
    let minus_alg = minus_packing.num_bins();

    let minus_opt = opt_minus(n1 + 1, n2 + 1);
    let plus_opt = n;
    let confirmed = confirm("I-", &minus, minus_opt, options.oracle_limit)?
        & confirm("I+", &plus, plus_opt, options.oracle_limit)?;

    let (chosen, instance, alg_bins, opt_bins) = if beats(minus_alg, minus_opt) {
        (Chosen::Minus, minus, minus_alg, minus_opt)
    } else if beats(plus_alg, plus_opt) {
        (Chosen::Plus, plus, plus_alg, plus_opt)
    } else {
        return Err(AdversaryError::InequalityViolation {
            minus_alg,
            minus_opt,
            plus_alg,
            plus_opt,
        });
    };
    Ok(AdversaryOutcome {
        chosen,
        instance,
        n1,
        n2,
        alg_bins,
        opt_bins,
        inequality_ok: true,
        opt_confirmed: confirmed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{
        run_nfd, Action, HeadPolicy, MmPolicy, Observation, RandomPolicy, TailPolicy,
    };

    #[test]
    fn closed_form_matches_small_cases() {
        assert_eq!(opt_minus(1, 1), 1);
        assert_eq!(opt_minus(5, 1), 3);
        assert_eq!(opt_minus(1, 5), 2);
        assert_eq!(opt_minus(3, 6), 3);
    }

    #[test]
    fn always_head() {
        let out = adversary_unbounded(
            HeadPolicy::new(CardinalityCap::UNBOUNDED),
            1,
            &AdversaryOptions::default(),
        )
        .unwrap();
        assert_eq!((out.n1, out.n2), (4, 0));
        assert_eq!(out.chosen, Chosen::Minus);
        assert_eq!(out.instance.len(), 6);
        assert_eq!(out.alg_bins, 3);
        assert_eq!(run_nfd(&out.instance, CardinalityCap::UNBOUNDED).num_bins(), 3);
        assert_eq!(out.opt_bins, 3);
        assert!(out.inequality_ok && out.opt_confirmed);
    }

    #[test]
    fn always_tail() {
        let out = adversary_unbounded(
            TailPolicy::new(CardinalityCap::UNBOUNDED),
            1,
            &AdversaryOptions::default(),
        )
        .unwrap();
        assert_eq!((out.n1, out.n2), (0, 4));
        assert!(out.inequality_ok);
    }

    #[test]
    fn mm_and_random() {
        let opts = AdversaryOptions::default();
        let out = adversary_unbounded(MmPolicy::new(CardinalityCap::UNBOUNDED), 1, &opts).unwrap();
        assert!(out.inequality_ok && out.opt_confirmed);
        assert_eq!(out.n1.max(out.n2), 4);
        for seed in 0..5 {
            let p = RandomPolicy::new(seed, SpaceBound::UNBOUNDED, CardinalityCap::UNBOUNDED);
            let out = adversary_unbounded(p, 1, &opts).unwrap();
            assert!(out.inequality_ok);
            assert_eq!(out.n1.max(out.n2), 4);
        }
    }

    #[derive(Clone)]
    struct CountsRemaining;

    impl DecisionProcedure for CountsRemaining {
        fn decide(&mut self, obs: &Observation) -> Action {
            match obs.latest_open() {
                None => Action::OpenBin,
                Some(bin) if bin.count == 0 && obs.remaining.is_multiple_of(2) => Action::PackHead(bin.index),
                Some(bin) if bin.count == 0 => Action::PackTail(bin.index),
                Some(bin) => Action::CloseBin(bin.index),
            }
        }
    }

    #[test]
    fn rejects_procedures_reading_the_length() {
        let err = adversary_unbounded(CountsRemaining, 1, &AdversaryOptions::default()).unwrap_err();
        assert!(matches!(err, AdversaryError::NotMaxMin { .. }));
    }

    #[test]
    fn rejects_bad_eps() {
        let opts = AdversaryOptions {
            eps: BigRational::new(1.into(), 36.into()),
            ..AdversaryOptions::default()
        };
        assert!(adversary_unbounded(MmPolicy::new(CardinalityCap::UNBOUNDED), 1, &opts).is_err());
    }
}
