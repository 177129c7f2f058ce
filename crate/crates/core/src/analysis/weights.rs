use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::AnalysisError;
use crate::model::{Instance, Size};

/// The weight functions used by the ratio proofs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightFunctionId {
    /// 1 on (1/2, 1], 1/2 on (1/3, 1/2], 0 below.
    W1,
    /// Harmonic classes with class 1 discounted to `1 − 1/k`; needs k ≥ 3.
    W2(usize),
    /// Harmonic classes `1/j` up to class k; needs k ≥ 2.
    W3(usize),
    /// Piecewise linear: `2 − 1/k`, `2x`, `1/k`; needs k ≥ 2.
    W4(usize),
}

impl WeightFunctionId {
    pub fn check(self) -> Result<Self, AnalysisError> {
        let ok = match self {
            WeightFunctionId::W1 => true,
            WeightFunctionId::W2(k) => k >= 3,
            WeightFunctionId::W3(k) | WeightFunctionId::W4(k) => k >= 2,
        };
        if ok {
            Ok(self)
        } else {
            Err(AnalysisError::InvalidWeight(self.to_string()))
        }
    }

    pub fn k(self) -> Option<usize> {
        match self {
            WeightFunctionId::W1 => None,
            WeightFunctionId::W2(k) | WeightFunctionId::W3(k) | WeightFunctionId::W4(k) => Some(k),
        }
    }

    /// `(class infimum, class weight)` for the piecewise-constant functions,
    /// class 1 first. Each class is the interval (infimum, previous infimum].
    pub fn class_table(self) -> Result<Vec<(BigRational, BigRational)>, AnalysisError> {
        let r = |p: usize, q: usize| BigRational::new(BigInt::from(p), BigInt::from(q));
        match self.check()? {
            WeightFunctionId::W1 => Ok(vec![
                (r(1, 2), r(1, 1)),
                (r(1, 3), r(1, 2)),
                (BigRational::zero(), BigRational::zero()),
            ]),
            WeightFunctionId::W2(k) => {
                let mut table = vec![(r(1, 2), BigRational::one() - r(1, k))];
                table.extend((2..k).map(|j| (r(1, j + 1), r(1, j))));
                table.push((BigRational::zero(), r(1, k)));
                Ok(table)
            }
            WeightFunctionId::W3(k) => {
                let mut table: Vec<_> = (1..k).map(|j| (r(1, j + 1), r(1, j))).collect();
                table.push((BigRational::zero(), r(1, k)));
                Ok(table)
            }
            WeightFunctionId::W4(_) => Err(AnalysisError::NotPiecewiseConstant(self.to_string())),
        }
    }
}

impl fmt::Display for WeightFunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightFunctionId::W1 => f.write_str("w1"),
            WeightFunctionId::W2(k) => write!(f, "w2_{k}"),
            WeightFunctionId::W3(k) => write!(f, "w3_{k}"),
            WeightFunctionId::W4(k) => write!(f, "w4_{k}"),
        }
    }
}

impl FromStr for WeightFunctionId {
    type Err = AnalysisError;

    /// `w1`, or `w2_K`, `w3_K`, `w4_K`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AnalysisError::InvalidWeight(s.to_string());
        if s == "w1" {
            return Ok(WeightFunctionId::W1);
        }
        let (name, k) = s.split_once('_').ok_or_else(bad)?;
        let k: usize = k.parse().map_err(|_| bad())?;
        let id = match name {
            "w2" => WeightFunctionId::W2(k),
            "w3" => WeightFunctionId::W3(k),
            "w4" => WeightFunctionId::W4(k),
            _ => return Err(bad()),
        };
        id.check()
    }
}

/// The harmonic class `j` with `x ∈ (1/(j+1), 1/j]`, i.e. `⌊1/x⌋`.
pub fn harmonic_class(x: &Size) -> usize {
    let v = x.value();
    let (q, _) = v.denom().div_rem(v.numer());
    q.to_usize().unwrap_or(usize::MAX)
}

pub fn weight(w: WeightFunctionId, x: &Size) -> Result<BigRational, AnalysisError> {
    let w = w.check()?;
    let inv = |j: usize| BigRational::new(BigInt::one(), BigInt::from(j));
    let j = harmonic_class(x);
    Ok(match w {
        WeightFunctionId::W1 => match j {
            1 => BigRational::one(),
            2 => inv(2),
            _ => BigRational::zero(),
        },
        WeightFunctionId::W2(k) => match j {
            1 => BigRational::one() - inv(k),
            j if j < k => inv(j),
            _ => inv(k),
        },
        WeightFunctionId::W3(k) => {
            if j < k {
                inv(j)
            } else {
                inv(k)
            }
        }
        WeightFunctionId::W4(k) => {
            let edge = inv(2 * k);
            let v = x.value();
            if v > &(BigRational::one() - &edge) {
                BigRational::from_integer(2.into()) - inv(k)
            } else if v > &edge {
                v * BigRational::from_integer(2.into())
            } else {
                inv(k)
            }
        }
    })
}

pub fn weight_sum(w: WeightFunctionId, instance: &Instance) -> Result<BigRational, AnalysisError> {
    let w = w.check()?;
    instance.items().iter().map(|x| weight(w, x)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: i64, q: i64) -> Size {
        Size::from_ratio(p, q).unwrap()
    }

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn class_of_boundaries() {
        assert_eq!(harmonic_class(&s(1, 1)), 1);
        assert_eq!(harmonic_class(&s(1, 2)), 2);
        assert_eq!(harmonic_class(&s(51, 100)), 1);
        assert_eq!(harmonic_class(&s(1, 3)), 3);
        assert_eq!(harmonic_class(&s(34, 100)), 2);
        assert_eq!(harmonic_class(&s(1, 7)), 7);
    }

    #[test]
    fn point_values() {
        assert_eq!(weight(WeightFunctionId::W1, &s(1, 2)).unwrap(), r(1, 2));
        assert_eq!(weight(WeightFunctionId::W1, &s(1, 3)).unwrap(), r(0, 1));
        assert_eq!(weight(WeightFunctionId::W2(3), &s(3, 5)).unwrap(), r(2, 3));
        assert_eq!(weight(WeightFunctionId::W2(3), &s(1, 3)).unwrap(), r(1, 3));
        assert_eq!(weight(WeightFunctionId::W4(2), &s(1, 2)).unwrap(), r(1, 1));
        // k = 2: edges at 1/4 and 3/4, both right-closed
        assert_eq!(weight(WeightFunctionId::W4(2), &s(3, 4)).unwrap(), r(3, 2));
        assert_eq!(weight(WeightFunctionId::W4(2), &s(4, 5)).unwrap(), r(3, 2));
        assert_eq!(weight(WeightFunctionId::W4(2), &s(1, 4)).unwrap(), r(1, 2));
        assert_eq!(weight(WeightFunctionId::W3(4), &s(1, 5)).unwrap(), r(1, 4));
    }

    #[test]
    fn sums() {
        let i = Instance::from_ratios(&[(6, 10), (4, 10), (3, 10)]).unwrap();
        assert_eq!(weight_sum(WeightFunctionId::W3(3), &i).unwrap(), r(11, 6));
        assert_eq!(
            weight_sum(WeightFunctionId::W2(3), &Instance::default()).unwrap(),
            r(0, 1)
        );
        let i = Instance::from_ratios(&[(51, 100), (103, 300), (107, 700)]).unwrap();
        assert_eq!(weight_sum(WeightFunctionId::W2(3), &i).unwrap(), r(3, 2));
    }

    #[test]
    fn parameter_checks() {
        assert!(WeightFunctionId::W2(2).check().is_err());
        assert!(WeightFunctionId::W3(1).check().is_err());
        assert!(WeightFunctionId::W4(2).class_table().is_err());
        assert_eq!("w3_4".parse::<WeightFunctionId>().unwrap(), WeightFunctionId::W3(4));
        assert!("w2_2".parse::<WeightFunctionId>().is_err());
        assert!("w9_3".parse::<WeightFunctionId>().is_err());
    }
}
