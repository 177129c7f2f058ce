use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::sequences::{gamma_partial, lambda, GammaInterval};
use super::AnalysisError;
use crate::algorithms::{AlgorithmId, AlgorithmKind, CardinalityCap};
use crate::model::format_rational;

/// Number of terms used for the certified γ enclosure in bound checks.
pub const GAMMA_TERMS: usize = 5;

/// Named inequalities between an algorithm's bin count and the optimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundId {
    /// MM ≤ 3/2·OPT + 1
    MmCr,
    /// MM_2 = OPT_2
    Tsuchiya,
    /// MM_k ≤ (λ_k − 1/k)·OPT_k + k
    MmKCr,
    /// NFD ≤ γ·OPT + 3
    NfdGamma,
    /// NFD_k ≤ λ_k·OPT_k + k
    NfdK,
    /// NF_k ≤ (3 − 2/k)·OPT_k + 1
    NfK,
    /// max-min 1-bounded: ALG ≥ 5/4·OPT − 1/4
    MaxminUnitLb,
    /// max-min 1-bounded, k = 3: ALG ≥ 4/3·OPT_3 − 4/3
    Maxmin3UnitLb,
    /// max-min B-bounded: ALG ≥ 7/6·OPT − B
    MaxminBoundedLb,
    /// pre-sorted online B-bounded: ALG ≥ (Σ_{i≤K} 1/(π_i − 1))·OPT − B(K − 1)
    PresortedBoundedLb,
    /// max-min B-bounded, k-cardinality, three regimes in k
    KcardBoundedLb,
    /// online 1-bounded, k-cardinality
    OnlineUnitLb,
    /// max-min unbounded space: ALG > 16/15·(OPT − 1)
    Adversary16_15,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    AtMost,
    Equal,
    AtLeast,
    Greater,
}

impl Relation {
    pub fn holds(self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Relation::AtMost => lhs <= rhs,
            Relation::Equal => lhs == rhs,
            Relation::AtLeast => lhs >= rhs,
            Relation::Greater => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::Equal => "=",
            Relation::AtLeast => ">=",
            Relation::Greater => ">",
        }
    }
}

/// Parameters some bounds depend on: the cap k, the space bound B, the
/// number of size classes K.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BoundContext {
    pub k: Option<usize>,
    pub space: Option<usize>,
    pub classes: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundOutcome {
    pub bound: BoundId,
    pub relation: Relation,
    pub rhs: BigRational,
    pub satisfied: bool,
}

impl fmt::Display for BoundOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}: {}",
            self.bound,
            self.relation.symbol(),
            format_rational(&self.rhs),
            if self.satisfied { "ok" } else { "VIOLATED" }
        )
    }
}

const ALL: [BoundId; 13] = [
    BoundId::MmCr,
    BoundId::Tsuchiya,
    BoundId::MmKCr,
    BoundId::NfdGamma,
    BoundId::NfdK,
    BoundId::NfK,
    BoundId::MaxminUnitLb,
    BoundId::Maxmin3UnitLb,
    BoundId::MaxminBoundedLb,
    BoundId::PresortedBoundedLb,
    BoundId::KcardBoundedLb,
    BoundId::OnlineUnitLb,
    BoundId::Adversary16_15,
];

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn int(v: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl BoundId {
    pub fn all() -> &'static [BoundId] {
        &ALL
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundId::MmCr => "mm_cr",
            BoundId::Tsuchiya => "tsuchiya",
            BoundId::MmKCr => "mm_k_cr",
            BoundId::NfdGamma => "nfd_gamma",
            BoundId::NfdK => "nfd_k",
            BoundId::NfK => "nf_k",
            BoundId::MaxminUnitLb => "maxmin_unit_lb",
            BoundId::Maxmin3UnitLb => "maxmin3_unit_lb",
            BoundId::MaxminBoundedLb => "maxmin_bounded_lb",
            BoundId::PresortedBoundedLb => "presorted_bounded_lb",
            BoundId::KcardBoundedLb => "kcard_bounded_lb",
            BoundId::OnlineUnitLb => "online_unit_lb",
            BoundId::Adversary16_15 => "adversary_16_15",
        }
    }

    pub fn is_upper(self) -> bool {
        matches!(
            self,
            BoundId::MmCr
                | BoundId::Tsuchiya
                | BoundId::MmKCr
                | BoundId::NfdGamma
                | BoundId::NfdK
                | BoundId::NfK
        )
    }

    /// The algorithm an upper bound is stated for, given the cap.
    pub fn subject(self, k: Option<usize>) -> Result<AlgorithmId, AnalysisError> {
        let capped = |kind| -> Result<AlgorithmId, AnalysisError> {
            let k = k.ok_or(AnalysisError::MissingContext {
                bound: self,
                field: "k",
            })?;
            let cap = CardinalityCap::at_most(k).map_err(|e| AnalysisError::Context {
                bound: self,
                message: e.to_string(),
            })?;
            Ok(AlgorithmId::new(kind, cap))
        };
        let free = |kind| Ok(AlgorithmId::new(kind, CardinalityCap::UNBOUNDED));
        match self {
            BoundId::MmCr => free(AlgorithmKind::Mm),
            BoundId::Tsuchiya => Ok(AlgorithmId::new(
                AlgorithmKind::Mm,
                CardinalityCap::at_most(2).expect("2 is a valid cap"),
            )),
            BoundId::MmKCr => capped(AlgorithmKind::Mm),
            BoundId::NfdGamma => free(AlgorithmKind::Nfd),
            BoundId::NfdK => capped(AlgorithmKind::Nfd),
            BoundId::NfK => capped(AlgorithmKind::Nf),
            _ => Err(AnalysisError::NotAnUpperBound(self)),
        }
    }

    /// Whether the inequality is claimed for this algorithm: upper bounds
    /// for their own algorithm, lower bounds for every member of the
    /// algorithm class they quantify over.
    pub fn applies_to(self, alg: &AlgorithmId) -> bool {
        use AlgorithmKind::*;
        let k = alg.cap.limit();
        match self {
            BoundId::MmCr => alg.kind == Mm && k.is_none(),
            BoundId::Tsuchiya => alg.kind == Mm && k == Some(2),
            BoundId::MmKCr => alg.kind == Mm && k.is_some(),
            BoundId::NfdGamma => alg.kind == Nfd && k.is_none(),
            BoundId::NfdK => alg.kind == Nfd && k.is_some(),
            BoundId::NfK => alg.kind == Nf && k.is_some(),
            BoundId::MaxminUnitLb | BoundId::MaxminBoundedLb => {
                matches!(alg.kind, Mm | Nfd) && k.is_none()
            }
            BoundId::Maxmin3UnitLb => matches!(alg.kind, Mm | Nfd) && k == Some(3),
            BoundId::PresortedBoundedLb => alg.kind == Nfd && k.is_none(),
            BoundId::KcardBoundedLb => matches!(alg.kind, Mm | Nfd) && k.is_some(),
            BoundId::OnlineUnitLb => alg.kind == Nf && k.is_some(),
            BoundId::Adversary16_15 => matches!(alg.kind, Mm | Nfd | Ffd) && k.is_none(),
        }
    }

    /// Right-hand side of the inequality for a given optimum.
    pub fn rhs(
        self,
        opt: usize,
        ctx: &BoundContext,
    ) -> Result<(Relation, BigRational), AnalysisError> {
        let need = |v: Option<usize>, field: &'static str| {
            v.ok_or(AnalysisError::MissingContext { bound: self, field })
        };
        let bad = |message: &str| AnalysisError::Context {
            bound: self,
            message: message.to_string(),
        };
        let opt = int(opt);
        let k_at_least = |min: usize| -> Result<usize, AnalysisError> {
            let k = need(ctx.k, "k")?;
            if k < min {
                return Err(bad(&format!("needs k >= {min}")));
            }
            Ok(k)
        };
        Ok(match self {
            BoundId::MmCr => (Relation::AtMost, r(3, 2) * &opt + int(1)),
            BoundId::Tsuchiya => (Relation::Equal, opt),
            BoundId::MmKCr => {
                let k = k_at_least(2)?;
                (
                    Relation::AtMost,
                    (lambda(k) - r(1, k as i64)) * &opt + int(k),
                )
            }
            BoundId::NfdGamma => {
                // the smaller endpoint of the enclosure is the adverse one
                let gamma = GammaInterval::with_terms(GAMMA_TERMS).lower;
                (Relation::AtMost, gamma * &opt + int(3))
            }
            BoundId::NfdK => {
                let k = k_at_least(2)?;
                (Relation::AtMost, lambda(k) * &opt + int(k))
            }
            BoundId::NfK => {
                let k = k_at_least(2)?;
                (
                    Relation::AtMost,
                    (int(3) - r(2, k as i64)) * &opt + int(1),
                )
            }
            BoundId::MaxminUnitLb => (Relation::AtLeast, r(5, 4) * &opt - r(1, 4)),
            BoundId::Maxmin3UnitLb => (Relation::AtLeast, r(4, 3) * &opt - r(4, 3)),
            BoundId::MaxminBoundedLb => {
                let b = need(ctx.space, "B")?;
                (Relation::AtLeast, r(7, 6) * &opt - int(b))
            }
            BoundId::PresortedBoundedLb => {
                let b = need(ctx.space, "B")?;
                let classes = need(ctx.classes, "K")?;
                if classes == 0 {
                    return Err(bad("needs K >= 1"));
                }
                (
                    Relation::AtLeast,
                    gamma_partial(classes) * &opt - int(b * (classes - 1)),
                )
            }
            BoundId::KcardBoundedLb => {
                let k = k_at_least(4)?;
                let b = int(need(ctx.space, "B")?);
                let rhs = match k {
                    4..=6 => {
                        (r(5, 3) - r(1, k as i64 - 1)) * &opt - b * int(k + 5) * r(1, 6)
                    }
                    7 => r(3, 2) * &opt - int(2) * b,
                    _ => r(3, 2) * &opt - b * r(1, 2),
                };
                (Relation::AtLeast, rhs)
            }
            BoundId::OnlineUnitLb => {
                let k = k_at_least(2)?;
                let rhs = if k == 2 {
                    int(2) * &opt - int(2)
                } else {
                    (int(3) - r(2, k as i64)) * &opt - int(5) + r(5, k as i64)
                };
                (Relation::AtLeast, rhs)
            }
            BoundId::Adversary16_15 => (Relation::Greater, r(16, 15) * (opt - int(1))),
        })
    }

    pub fn check(
        self,
        alg_bins: usize,
        opt_bins: usize,
        ctx: &BoundContext,
    ) -> Result<BoundOutcome, AnalysisError> {
        let (relation, rhs) = self.rhs(opt_bins, ctx)?;
        let satisfied = relation.holds(&int(alg_bins), &rhs);
        Ok(BoundOutcome {
            bound: self,
            relation,
            rhs,
            satisfied,
        })
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundId {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL.iter()
            .copied()
            .find(|b| b.name() == s)
            .ok_or_else(|| AnalysisError::UnknownBound(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(k: Option<usize>, b: Option<usize>, classes: Option<usize>) -> BoundContext {
        BoundContext {
            k,
            space: b,
            classes,
        }
    }

    #[test]
    fn names_round_trip() {
        for &b in BoundId::all() {
            assert_eq!(b.name().parse::<BoundId>().unwrap(), b);
        }
        assert!(matches!(
            "nope".parse::<BoundId>(),
            Err(AnalysisError::UnknownBound(_))
        ));
    }

    #[test]
    fn upper_bounds_on_small_cases() {
        let none = BoundContext::default();
        let o = BoundId::MmCr.check(3, 2, &none).unwrap();
        assert!(o.satisfied);
        assert_eq!(o.rhs, int(4));
        assert!(BoundId::Tsuchiya.check(3, 3, &none).unwrap().satisfied);
        assert!(!BoundId::Tsuchiya.check(4, 3, &none).unwrap().satisfied);
        let o = BoundId::NfK.check(2, 2, &ctx(Some(2), None, None)).unwrap();
        assert_eq!(o.rhs, int(5));
        assert!(o.satisfied);
        let o = BoundId::MmKCr.rhs(2, &ctx(Some(3), None, None)).unwrap();
        assert_eq!(o.1, int(6));
    }

    #[test]
    fn lower_bound_values() {
        let (_, v) = BoundId::MaxminUnitLb.rhs(20, &BoundContext::default()).unwrap();
        assert_eq!(v, r(99, 4));
        let (_, v) = BoundId::MaxminBoundedLb.rhs(30, &ctx(None, Some(1), None)).unwrap();
        assert_eq!(v, int(34));
        let (_, v) = BoundId::PresortedBoundedLb
            .rhs(42, &ctx(None, Some(1), Some(3)))
            .unwrap();
        assert_eq!(v, int(68));
        let (_, v) = BoundId::KcardBoundedLb.rhs(9, &ctx(Some(4), Some(1), None)).unwrap();
        assert_eq!(v, r(21, 2));
        let (_, v) = BoundId::KcardBoundedLb.rhs(21, &ctx(Some(8), Some(1), None)).unwrap();
        assert_eq!(v, int(31));
        let (_, v) = BoundId::OnlineUnitLb.rhs(10, &ctx(Some(2), None, None)).unwrap();
        assert_eq!(v, int(18));
        let (_, v) = BoundId::OnlineUnitLb.rhs(5, &ctx(Some(4), None, None)).unwrap();
        assert_eq!(v, r(35, 4));
    }

    #[test]
    fn missing_context_is_an_error() {
        assert!(matches!(
            BoundId::MmKCr.rhs(3, &BoundContext::default()),
            Err(AnalysisError::MissingContext { field: "k", .. })
        ));
        assert!(BoundId::KcardBoundedLb
            .rhs(3, &ctx(Some(3), Some(1), None))
            .is_err());
    }

    #[test]
    fn applicability() {
        let mm: AlgorithmId = "mm".parse().unwrap();
        let mm2: AlgorithmId = "mm_2".parse().unwrap();
        assert!(BoundId::MmCr.applies_to(&mm));
        assert!(!BoundId::MmCr.applies_to(&mm2));
        assert!(BoundId::Tsuchiya.applies_to(&mm2));
        assert!(!BoundId::PresortedBoundedLb.applies_to(&mm));
        assert_eq!(BoundId::NfK.subject(Some(3)).unwrap().to_string(), "nf_3");
        assert!(BoundId::Adversary16_15.subject(None).is_err());
    }
}
