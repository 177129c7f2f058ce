use num_rational::BigRational;
use rayon::prelude::*;

use super::random::{random_instance, RandomInstanceSpec};
use super::HarnessError;
use crate::adversary::{
    gen_kcard_bounded_lb_with_eps, gen_maxmin_bounded_lb_with_eps, gen_maxmin_unit_lb_with,
    gen_online_unit_lb_with, gen_presorted_bounded_lb, gen_presorted_bounded_lb_with_eps,
    CertifiedInstance, Family, UnitParams,
};
use crate::algorithms::{AlgorithmId, CardinalityCap};
use crate::analysis::{ratio_report, BoundContext, BoundId, ReportRow};
use crate::oracle::{opt_exact_with_limit, OracleError, DEFAULT_LIMIT};

/// Environment variable overriding the oracle's item limit.
pub const ORACLE_LIMIT_ENV: &str = "BINPACK_ORACLE_LIMIT";

/// Default oracle limit: 16 items without a cap, 14 with one, unless the
/// environment says otherwise.
pub fn oracle_limit(cap: CardinalityCap) -> usize {
    std::env::var(ORACLE_LIMIT_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(if cap.is_unbounded() { DEFAULT_LIMIT } else { 14 })
}

/// Parameters for one member of a lower-bound family. Unset fields take the
/// family defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FamilyParams {
    pub m: usize,
    pub k: Option<usize>,
    pub space: Option<usize>,
    pub classes: Option<usize>,
    pub cap3: bool,
    pub eps: Option<BigRational>,
}

impl FamilyParams {
    pub fn new(m: usize) -> Self {
        FamilyParams {
            m,
            ..FamilyParams::default()
        }
    }

    /// Context for the family's bound, with `B = 1` where the family is
    /// bounded-space and no `B` was given.
    pub fn context(&self, family: Family) -> BoundContext {
        let space = match family {
            Family::OnlineUnit => None,
            Family::MaxminUnit => Some(1),
            _ => Some(self.space.unwrap_or(1)),
        };
        BoundContext {
            k: match family {
                Family::MaxminUnit => self.cap3.then_some(3),
                _ => self.k,
            },
            space,
            classes: self.classes,
        }
    }
}

fn need(v: Option<usize>, flag: &str, family: Family) -> Result<usize, HarnessError> {
    v.ok_or_else(|| HarnessError::Usage(format!("{family} needs --{flag}")))
}

pub fn generate_family(family: Family, p: &FamilyParams) -> Result<CertifiedInstance, HarnessError> {
    let b = p.space.unwrap_or(1);
    let eps = |default: (i64, i64)| {
        p.eps
            .clone()
            .unwrap_or_else(|| BigRational::new(default.0.into(), default.1.into()))
    };
    let out = match family {
        Family::MaxminUnit => gen_maxmin_unit_lb_with(
            p.m,
            p.cap3,
            &UnitParams {
                eps: p.eps.clone(),
                ..UnitParams::default()
            },
        ),
        Family::MaxminBounded => gen_maxmin_bounded_lb_with_eps(p.m, b, eps((1, 100))),
        Family::PresortedBounded => {
            let classes = need(p.classes, "K", family)?;
            match &p.eps {
                Some(e) => gen_presorted_bounded_lb_with_eps(classes, p.m, e.clone()),
                None => gen_presorted_bounded_lb(classes, p.m),
            }
        }
        Family::KcardBounded => {
            gen_kcard_bounded_lb_with_eps(need(p.k, "k", family)?, p.m, b, eps((1, 200)))
        }
        Family::OnlineUnit => gen_online_unit_lb_with(need(p.k, "k", family)?, p.m, p.eps.clone(), None),
    };
    Ok(out?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub bound: BoundId,
    pub algorithm: AlgorithmId,
    pub spec: RandomInstanceSpec,
    pub trials: usize,
    pub seed: u64,
    pub oracle_limit: usize,
    pub ctx: BoundContext,
}

impl VerifyConfig {
    /// Checks `bound` on its own subject algorithm.
    pub fn for_bound(
        bound: BoundId,
        k: Option<usize>,
        spec: RandomInstanceSpec,
        trials: usize,
        seed: u64,
    ) -> Result<Self, HarnessError> {
        let algorithm = bound.subject(k)?;
        Ok(VerifyConfig {
            bound,
            algorithm,
            spec,
            trials,
            seed,
            oracle_limit: oracle_limit(algorithm.cap),
            ctx: BoundContext {
                k,
                ..BoundContext::default()
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skipped {
    pub trial: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifySummary {
    pub rows: Vec<ReportRow>,
    pub skipped: Vec<Skipped>,
}

impl VerifySummary {
    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| r.is_violation()).count()
    }

    pub fn is_clean(&self) -> bool {
        self.violations() == 0
    }
}

/// Runs the bound check on `trials` random instances, optimum from the
/// exact oracle. Instances above the oracle limit are skipped and listed.
pub fn verify_random(cfg: &VerifyConfig) -> Result<VerifySummary, HarnessError> {
    let outcomes: Vec<Result<Result<ReportRow, Skipped>, HarnessError>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let inst = random_instance(&cfg.spec, cfg.seed, trial as u64);
            if inst.is_empty() {
                return Ok(Err(Skipped {
                    trial,
                    reason: "empty instance".into(),
                }));
            }
            let opt = match opt_exact_with_limit(&inst, cfg.algorithm.cap, cfg.oracle_limit) {
                Ok(r) => r.opt,
                Err(e @ OracleError::TooLarge { .. }) => {
                    return Ok(Err(Skipped {
                        trial,
                        reason: e.to_string(),
                    }))
                }
                Err(e) => return Err(e.into()),
            };
            let report = ratio_report(cfg.algorithm, &inst, opt, Some(cfg.bound), &cfg.ctx)?;
            Ok(Ok(report.to_row(&format!("random-{trial}"), None, &cfg.ctx)))
        })
        .collect();
    let mut summary = VerifySummary::default();
    for outcome in outcomes {
        match outcome? {
            Ok(row) => summary.rows.push(row),
            Err(skip) => summary.skipped.push(skip),
        }
    }
    Ok(summary)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub family: Family,
    pub ms: Vec<usize>,
    pub algorithms: Vec<AlgorithmId>,
    pub params: FamilyParams,
    /// `None` checks the family's own lower bound where it applies.
    pub bound: Option<BoundId>,
}

/// One row per `(m, algorithm)` against the certified optimum, sorted.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<ReportRow>, HarnessError> {
    if cfg.ms.is_empty() || cfg.algorithms.is_empty() {
        return Err(HarnessError::Usage("sweep needs at least one m and one algorithm".into()));
    }
    let bound = cfg
        .bound
        .unwrap_or_else(|| cfg.family.lower_bound(cfg.params.cap3));
    let per_m: Vec<Result<Vec<ReportRow>, HarnessError>> = cfg
        .ms
        .par_iter()
        .map(|&m| {
            let params = FamilyParams { m, ..cfg.params.clone() };
            let cert = generate_family(cfg.family, &params)?;
            let base = params.context(cfg.family);
            cfg.algorithms
                .iter()
                .map(|alg| {
                    let ctx = BoundContext {
                        k: base.k.or(alg.cap.limit()),
                        ..base
                    };
                    let bound = bound.applies_to(alg).then_some(bound);
                    let report = ratio_report(*alg, &cert.instance, cert.claimed_opt, bound, &ctx)?;
                    Ok(report.to_row(cfg.family.name(), Some(m), &ctx))
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_m {
        rows.extend(r?);
    }
    rows.sort();
    rows.dedup();
    Ok(rows)
}
