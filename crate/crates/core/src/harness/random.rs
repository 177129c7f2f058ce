use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::model::{Instance, Size};

/// lcm(1..=9): every boundary 1/2, …, 1/9 lies on the grid.
pub const DEFAULT_DENOMINATOR: u64 = 2520;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SizeModel {
    /// Uniform over `1/D, 2/D, …, D/D`.
    Grid { denominator: u64 },
    /// Sizes clustered within a few grid steps of `1/j` for `j` in
    /// `2..=max_class`, mixed with uniform grid sizes.
    Anchored { denominator: u64, max_class: u64 },
}

impl Default for SizeModel {
    fn default() -> Self {
        SizeModel::Grid {
            denominator: DEFAULT_DENOMINATOR,
        }
    }
}

/// Item count drawn uniformly from `min_items..=max_items`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomInstanceSpec {
    pub min_items: usize,
    pub max_items: usize,
    pub model: SizeModel,
}

impl RandomInstanceSpec {
    pub fn up_to(max_items: usize) -> Self {
        RandomInstanceSpec {
            min_items: 1,
            max_items,
            model: SizeModel::default(),
        }
    }

    pub fn with_model(mut self, model: SizeModel) -> Self {
        self.model = model;
        self
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Instance {
        let lo = self.min_items.min(self.max_items);
        let n = rng.gen_range(lo..=self.max_items);
        Instance::new((0..n).map(|_| self.sample_size(rng)).collect())
    }

    fn sample_size<R: Rng + ?Sized>(&self, rng: &mut R) -> Size {
        let (num, den) = match self.model {
            SizeModel::Grid { denominator } => (rng.gen_range(1..=denominator), denominator),
            SizeModel::Anchored {
                denominator,
                max_class,
            } => {
                if rng.gen_bool(0.25) {
                    (rng.gen_range(1..=denominator), denominator)
                } else {
                    let j = rng.gen_range(2..=max_class.max(2));
                    let anchor = (denominator / j) as i64;
                    let offset = rng.gen_range(-3i64..=3);
                    let num = (anchor + offset).clamp(1, denominator as i64);
                    (num as u64, denominator)
                }
            }
        };
        Size::new(BigRational::new(num.into(), den.into())).expect("grid sizes lie in (0, 1]")
    }
}

/// Independent stream for one trial; the same `(seed, trial)` always gives
/// the same instance.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn random_instance(spec: &RandomInstanceSpec, seed: u64, trial: u64) -> Instance {
    spec.sample(&mut trial_rng(seed, trial))
}

pub fn random_instances(spec: &RandomInstanceSpec, seed: u64, trials: usize) -> Vec<Instance> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| random_instance(spec, seed, t))
        .collect()
}
