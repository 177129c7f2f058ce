use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::AdversaryError;
use crate::algorithms::CardinalityCap;
use crate::model::{ceil_nonneg, Instance, Packing, Params};
use crate::oracle::opt_exact_with_limit;

/// How the claimed optimum is known to be a lower bound as well.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OptBasis {
    /// `⌈total size⌉` equals the claimed value.
    TotalSize,
    /// Items above 1/2 need their own bins, plus one for an item that fits
    /// with none of them.
    LargeItemBound,
    /// Confirmed by the exact oracle.
    Oracle,
}

/// A generated instance with a packing proving `OPT ≤ claimed_opt`, and a
/// recorded reason why `OPT ≥ claimed_opt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedInstance {
    pub instance: Instance,
    pub certificate: Packing,
    pub claimed_opt: usize,
    pub params: Params,
    pub basis: OptBasis,
}

/// `L + 1` when some item of size ≤ 1/2 cannot join the smallest of the `L`
/// items above 1/2, else `L`.
pub fn large_item_lower_bound(instance: &Instance) -> usize {
    let half = BigRational::new(1.into(), 2.into());
    let large: Vec<&BigRational> = instance
        .items()
        .iter()
        .map(|s| s.value())
        .filter(|v| *v > &half)
        .collect();
    let Some(smallest_large) = large.iter().min() else {
        return usize::from(!instance.is_empty());
    };
    let stranded = instance
        .items()
        .iter()
        .map(|s| s.value())
        .any(|v| v <= &half && *smallest_large + v > BigRational::one());
    large.len() + usize::from(stranded)
}

impl CertifiedInstance {
    pub fn cap(&self) -> CardinalityCap {
        CardinalityCap::from_option(self.certificate.cap).unwrap_or_default()
    }

    /// Re-checks the certificate and the recorded lower-bound argument.
    pub fn verify(&self) -> Result<(), AdversaryError> {
        let report = self
            .certificate
            .validate(&self.instance)
            .map_err(|e| AdversaryError::Construction(e.to_string()))?;
        if let Some(v) = report.violations.first() {
            return Err(AdversaryError::Construction(format!("certificate invalid: {v}")));
        }
        let bins = self.certificate.num_bins();
        if bins != self.claimed_opt {
            return Err(AdversaryError::Construction(format!(
                "certificate uses {bins} bins, claimed {}",
                self.claimed_opt
            )));
        }
        let lower = match self.basis {
            OptBasis::TotalSize => ceil_nonneg(&self.instance.total_size())
                .try_into()
                .unwrap_or(usize::MAX),
            OptBasis::LargeItemBound => large_item_lower_bound(&self.instance),
            OptBasis::Oracle => self.claimed_opt,
        };
        if lower != self.claimed_opt {
            return Err(AdversaryError::Construction(format!(
                "lower bound {lower} does not match claimed optimum {}",
                self.claimed_opt
            )));
        }
        Ok(())
    }

    /// Confirms the claimed optimum with the exact oracle.
    pub fn confirm_with_oracle(&self, limit: usize) -> Result<(), AdversaryError> {
        let result = opt_exact_with_limit(&self.instance, self.cap(), limit)?;
        if result.opt != self.claimed_opt {
            return Err(AdversaryError::Construction(format!(
                "oracle optimum {} differs from claimed {}",
                result.opt, self.claimed_opt
            )));
        }
        Ok(())
    }

    /// The sidecar document: claimed optimum, parameters, certificate.
    pub fn sidecar_json(&self) -> serde_json::Value {
        serde_json::json!({
            "claimed_opt": self.claimed_opt,
            "opt_basis": self.basis,
            "params": self.params,
            "certificate": self.certificate,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_item_bound() {
        let i = Instance::from_ratios(&[(6, 10), (7, 10), (1, 2), (1, 10)]).unwrap();
        assert_eq!(large_item_lower_bound(&i), 3);
        let i = Instance::from_ratios(&[(6, 10), (4, 10)]).unwrap();
        assert_eq!(large_item_lower_bound(&i), 1);
        let i = Instance::from_ratios(&[(1, 10)]).unwrap();
        assert_eq!(large_item_lower_bound(&i), 1);
        assert_eq!(large_item_lower_bound(&Instance::default()), 0);
    }
}
