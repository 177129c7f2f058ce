use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::bounds::{BoundContext, BoundId, BoundOutcome};
use super::AnalysisError;
use crate::algorithms::AlgorithmId;
use crate::model::{GeneratorMeta, Instance};

/// One algorithm run compared against a known optimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioReport {
    pub algorithm: AlgorithmId,
    pub meta: Option<GeneratorMeta>,
    pub alg_bins: usize,
    pub opt_bins: usize,
    pub ratio: BigRational,
    pub bound: Option<BoundOutcome>,
}

/// Runs `algorithm` on `instance` and evaluates `bound` against `opt_bins`.
///
/// A missing `k` in the context is taken from the algorithm's cap.
pub fn ratio_report(
    algorithm: AlgorithmId,
    instance: &Instance,
    opt_bins: usize,
    bound: Option<BoundId>,
    ctx: &BoundContext,
) -> Result<RatioReport, AnalysisError> {
    if opt_bins == 0 {
        return Err(AnalysisError::ZeroOptimum);
    }
    let alg_bins = algorithm.run(instance).num_bins();
    let ctx = BoundContext {
        k: ctx.k.or(algorithm.cap.limit()),
        ..*ctx
    };
    let bound = bound
        .map(|b| b.check(alg_bins, opt_bins, &ctx))
        .transpose()?;
    Ok(RatioReport {
        algorithm,
        meta: instance.meta().cloned(),
        alg_bins,
        opt_bins,
        ratio: BigRational::new(BigInt::from(alg_bins), BigInt::from(opt_bins)),
        bound,
    })
}

/// The flat record written as one CSV row or one JSON object.
///
/// Columns: `family,m,k,B,algorithm,alg_bins,opt_bins,ratio_num,ratio_den,bound,satisfied`.
/// An inapplicable bound is written as `n/a` with an empty `satisfied` cell.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReportRow {
    pub family: String,
    pub m: Option<u64>,
    pub k: Option<u64>,
    #[serde(rename = "B")]
    pub space: Option<u64>,
    pub algorithm: String,
    pub alg_bins: u64,
    pub opt_bins: u64,
    pub ratio_num: u64,
    pub ratio_den: u64,
    pub bound: String,
    pub satisfied: Option<bool>,
}

impl RatioReport {
    pub fn to_row(&self, family: &str, m: Option<usize>, ctx: &BoundContext) -> ReportRow {
        let to_u64 = |v: &BigInt| v.to_u64().expect("bin counts fit in u64");
        ReportRow {
            family: family.to_string(),
            m: m.map(|v| v as u64),
            k: ctx.k.or(self.algorithm.cap.limit()).map(|v| v as u64),
            space: ctx.space.map(|v| v as u64),
            algorithm: self.algorithm.to_string(),
            alg_bins: self.alg_bins as u64,
            opt_bins: self.opt_bins as u64,
            ratio_num: to_u64(self.ratio.numer()),
            ratio_den: to_u64(self.ratio.denom()),
            bound: self
                .bound
                .as_ref()
                .map_or_else(|| "n/a".to_string(), |b| b.bound.to_string()),
            satisfied: self.bound.as_ref().map(|b| b.satisfied),
        }
    }
}

impl ReportRow {
    pub fn is_violation(&self) -> bool {
        self.satisfied == Some(false)
    }
}

pub fn rows_to_csv(rows: &[ReportRow]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        writer
            .write_record([
                "family",
                "m",
                "k",
                "B",
                "algorithm",
                "alg_bins",
                "opt_bins",
                "ratio_num",
                "ratio_den",
                "bound",
                "satisfied",
            ])
            .expect("in-memory write");
    }
    for row in rows {
        writer.serialize(row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

pub fn rows_from_csv(text: &str) -> Result<Vec<ReportRow>, AnalysisError> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<Vec<ReportRow>, _>>()
        .map_err(|e| AnalysisError::Format(e.to_string()))
}

pub fn rows_to_json(rows: &[ReportRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}

pub fn rows_from_json(text: &str) -> Result<Vec<ReportRow>, AnalysisError> {
    serde_json::from_str(text).map_err(|e| AnalysisError::Format(e.to_string()))
}
