use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

static PI_TABLE: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();

/// The sequence 2, 3, 7, 43, 1807, … with `π(i+1) = π(i)(π(i) − 1) + 1`.
///
/// Terms are memoized process-wide. `i` is 1-based.
pub fn pi(i: usize) -> BigInt {
    assert!(i >= 1, "the sequence is 1-indexed");
    let table = PI_TABLE.get_or_init(|| RwLock::new(vec![BigInt::from(2)]));
    {
        let read = table.read().expect("pi table poisoned");
        if let Some(v) = read.get(i - 1) {
            return v.clone();
        }
    }
    let mut write = table.write().expect("pi table poisoned");
    while write.len() < i {
        let last = write.last().expect("seeded").clone();
        write.push(&last * (&last - 1) + 1);
    }
    write[i - 1].clone()
}

fn inv(v: BigInt) -> BigRational {
    BigRational::new(BigInt::one(), v)
}

/// `Σ_{i=1}^{terms} 1/(π(i) − 1)`.
pub fn gamma_partial(terms: usize) -> BigRational {
    (1..=terms).map(|i| inv(pi(i) - 1)).sum()
}

/// Upper bound on `Σ_{i>terms} 1/(π(i) − 1)`.
///
/// Consecutive terms shrink by a factor `1/π(i)`, so the tail is dominated by
/// a geometric series with ratio `1/π(terms+1)`.
pub fn gamma_tail_bound(terms: usize) -> BigRational {
    let p = pi(terms + 1);
    let d = &p - 1;
    BigRational::new(p, &d * &d)
}

/// A certified enclosure of γ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaInterval {
    pub lower: BigRational,
    pub upper: BigRational,
    pub terms: usize,
}

impl GammaInterval {
    pub fn with_terms(terms: usize) -> Self {
        let lower = gamma_partial(terms);
        let upper = &lower + gamma_tail_bound(terms);
        GammaInterval {
            lower,
            upper,
            terms,
        }
    }

    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }
}

/// Smallest partial sum whose tail bound is below `tolerance`.
pub fn gamma(tolerance: &BigRational) -> GammaInterval {
    assert!(
        tolerance > &BigRational::from_integer(0.into()),
        "tolerance must be positive"
    );
    let mut terms = 1;
    while &gamma_tail_bound(terms) >= tolerance {
        terms += 1;
    }
    GammaInterval::with_terms(terms)
}

/// `λ_k = Σ_{i=1}^{k} max{1/(π(i) − 1), 1/k}`.
pub fn lambda(k: usize) -> BigRational {
    assert!(k >= 1, "k must be positive");
    let floor = BigRational::new(BigInt::one(), BigInt::from(k));
    let mut sum = BigRational::from_integer(0.into());
    // terms decrease, so once one drops to 1/k the rest are 1/k too
    for i in 1..=k {
        let term = inv(pi(i) - 1);
        if term <= floor {
            return sum + &floor * BigInt::from(k - i + 1);
        }
        sum += term;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn pi_terms() {
        let got: Vec<BigInt> = (1..=5).map(pi).collect();
        let want: Vec<BigInt> = [2, 3, 7, 43, 1807].into_iter().map(BigInt::from).collect();
        assert_eq!(got, want);
        assert_eq!(pi(6), BigInt::from(3_263_443u64));
    }

    #[test]
    fn reciprocal_identity() {
        // 1 - Σ_{i≤j} 1/π(i) = 1/(π(j+1) - 1)
        for j in 1..=6 {
            let s: BigRational = (1..=j).map(|i| inv(pi(i))).sum();
            assert_eq!(BigRational::one() - s, inv(pi(j + 1) - 1), "j = {j}");
        }
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma_partial(3), r(5, 3));
        let g = gamma(&r(1, 10));
        assert_eq!(g.terms, 3);
        assert!(g.lower >= r(160, 100) && g.upper <= r(170, 100));
        let g5 = gamma_partial(5);
        assert!(g5 >= r(16910, 10000) && g5 <= r(16911, 10000));
        assert!(gamma(&r(1, 1_000_000)).width() < r(1, 1_000_000));
    }

    #[test]
    fn lambda_values() {
        assert_eq!(lambda(2), r(3, 2));
        assert_eq!(lambda(3), r(11, 6));
        assert_eq!(lambda(4), r(2, 1));
        assert_eq!(lambda(5), r(21, 10));
        assert_eq!(lambda(1), BigRational::one());
    }

    #[test]
    fn lambda_increases() {
        for k in 2..=12 {
            assert!(lambda(k) > lambda(k - 1));
            assert!(lambda(k) >= BigRational::one());
        }
    }
}
