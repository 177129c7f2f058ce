use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::size::format_rational;
use super::{Instance, ModelError};

/// Item-to-bin assignment. `assignment[i]` is the 1-based bin of item `i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Packing {
    pub assignment: Vec<usize>,
    #[serde(rename = "k")]
    pub cap: Option<usize>,
}

/// Running state of one bin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinState {
    pub index: usize,
    pub load: BigRational,
    pub count: usize,
}

impl BinState {
    pub fn new(index: usize) -> Self {
        BinState {
            index,
            load: BigRational::zero(),
            count: 0,
        }
    }

    pub fn fits(&self, size: &BigRational, cap: Option<usize>) -> bool {
        &self.load + size <= BigRational::one() && cap.is_none_or(|k| self.count < k)
    }

    pub fn add(&mut self, size: &BigRational) {
        self.load += size;
        self.count += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Overfull { bin: usize, load: BigRational },
    Cardinality { bin: usize, count: usize, cap: usize },
    ZeroIndex { item: usize },
    MissingBin { bin: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Overfull { bin, load } => {
                write!(f, "bin {bin} load {} > 1", format_rational(load))
            }
            Violation::Cardinality { bin, count, cap } => {
                write!(f, "bin {bin} holds {count} items, cap {cap}")
            }
            Violation::ZeroIndex { item } => write!(f, "item {item} assigned to bin 0"),
            Violation::MissingBin { bin } => {
                write!(f, "bin {bin} is empty but a higher bin is used")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Packing {
    pub fn new(assignment: Vec<usize>, cap: Option<usize>) -> Self {
        Packing { assignment, cap }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Number of distinct bins used.
    pub fn num_bins(&self) -> usize {
        self.assignment.iter().collect::<BTreeSet<_>>().len()
    }

    /// Item indices (0-based) per bin, bins in index order. Entry 0 is bin 1.
    pub fn bins(&self) -> Vec<Vec<usize>> {
        let top = self.assignment.iter().copied().max().unwrap_or(0);
        let mut bins = vec![Vec::new(); top];
        for (item, &bin) in self.assignment.iter().enumerate() {
            if bin > 0 {
                bins[bin - 1].push(item);
            }
        }
        bins
    }

    /// Per-bin state, recomputed from the instance.
    pub fn bin_states(&self, instance: &Instance) -> Result<Vec<BinState>, ModelError> {
        self.check_len(instance)?;
        let top = self.assignment.iter().copied().max().unwrap_or(0);
        let mut states: Vec<BinState> = (1..=top).map(BinState::new).collect();
        for (item, &bin) in self.assignment.iter().enumerate() {
            if bin > 0 {
                states[bin - 1].add(instance.items()[item].value());
            }
        }
        Ok(states)
    }

    /// Packing of the permuted instance whose position `p` holds original item `order[p]`.
    pub fn permuted(&self, order: &[usize]) -> Packing {
        Packing {
            assignment: order.iter().map(|&i| self.assignment[i]).collect(),
            cap: self.cap,
        }
    }

    /// Renumbers bins by first appearance in item order.
    pub fn canonical(&self) -> Packing {
        let mut map = std::collections::HashMap::new();
        let assignment = self
            .assignment
            .iter()
            .map(|&b| {
                let next = map.len() + 1;
                *map.entry(b).or_insert(next)
            })
            .collect();
        Packing {
            assignment,
            cap: self.cap,
        }
    }

    pub fn validate(&self, instance: &Instance) -> Result<ValidationReport, ModelError> {
        self.check_len(instance)?;
        let mut violations = Vec::new();
        for (item, &bin) in self.assignment.iter().enumerate() {
            if bin == 0 {
                violations.push(Violation::ZeroIndex { item: item + 1 });
            }
        }
        for state in self.bin_states(instance)? {
            if state.count == 0 {
                violations.push(Violation::MissingBin { bin: state.index });
                continue;
            }
            if state.load > BigRational::one() {
                violations.push(Violation::Overfull {
                    bin: state.index,
                    load: state.load.clone(),
                });
            }
            if let Some(cap) = self.cap {
                if state.count > cap {
                    violations.push(Violation::Cardinality {
                        bin: state.index,
                        count: state.count,
                        cap,
                    });
                }
            }
        }
        Ok(ValidationReport { violations })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("packing serializes")
    }

    pub fn from_json(text: &str) -> Result<Packing, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))
    }

    fn check_len(&self, instance: &Instance) -> Result<(), ModelError> {
        if self.assignment.len() != instance.len() {
            return Err(ModelError::LengthMismatch {
                expected: instance.len(),
                got: self.assignment.len(),
            });
        }
        Ok(())
    }
}

pub fn validate_packing(
    instance: &Instance,
    packing: &Packing,
) -> Result<ValidationReport, ModelError> {
    packing.validate(instance)
}

pub fn num_bins(packing: &Packing) -> usize {
    packing.num_bins()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(pairs: &[(i64, i64)]) -> Instance {
        Instance::from_ratios(pairs).unwrap()
    }

    #[test]
    fn overfull_bin_reported() {
        let i = inst(&[(6, 10), (5, 10)]);
        let report = Packing::new(vec![1, 1], None).validate(&i).unwrap();
        assert_eq!(
            report.violations,
            vec![Violation::Overfull {
                bin: 1,
                load: BigRational::new(11.into(), 10.into())
            }]
        );
    }

    #[test]
    fn cardinality_reported() {
        let i = inst(&[(2, 10), (2, 10), (2, 10)]);
        let report = Packing::new(vec![1, 1, 1], Some(2)).validate(&i).unwrap();
        assert_eq!(
            report.violations,
            vec![Violation::Cardinality {
                bin: 1,
                count: 3,
                cap: 2
            }]
        );
    }

    #[test]
    fn exact_fill_is_fine() {
        let i = inst(&[(6, 10), (4, 10)]);
        assert!(Packing::new(vec![1, 1], None).validate(&i).unwrap().is_ok());
    }

    #[test]
    fn gaps_and_zero_detected() {
        let i = inst(&[(1, 10), (1, 10)]);
        let report = Packing::new(vec![1, 3], None).validate(&i).unwrap();
        assert_eq!(report.violations, vec![Violation::MissingBin { bin: 2 }]);
        let report = Packing::new(vec![0, 1], None).validate(&i).unwrap();
        assert_eq!(report.violations, vec![Violation::ZeroIndex { item: 1 }]);
    }

    #[test]
    fn length_mismatch_is_structural() {
        let i = inst(&[(1, 10)]);
        assert_eq!(
            Packing::new(vec![1, 1], None).validate(&i),
            Err(ModelError::LengthMismatch {
                expected: 1,
                got: 2
            })
        );
    }

    #[test]
    fn bin_counts() {
        assert_eq!(Packing::new(vec![], None).num_bins(), 0);
        assert_eq!(Packing::new(vec![1, 1, 2], None).num_bins(), 2);
        assert_eq!(Packing::new(vec![1, 2, 3, 3], None).num_bins(), 3);
    }

    #[test]
    fn json_shape() {
        let p = Packing::new(vec![1, 1, 2], None);
        assert_eq!(p.to_json(), r#"{"assignment":[1,1,2],"k":null}"#);
        let q = Packing::from_json(r#"{"assignment":[1,2], "k":3}"#).unwrap();
        assert_eq!(q, Packing::new(vec![1, 2], Some(3)));
    }

    #[test]
    fn canonical_relabels_by_first_use() {
        let p = Packing::new(vec![3, 1, 3, 2], None);
        assert_eq!(p.canonical().assignment, vec![1, 2, 1, 3]);
    }
}
