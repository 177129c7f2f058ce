use num_rational::BigRational;
use num_traits::{One, Zero};

use super::OracleError;
use crate::analysis::WeightFunctionId;

pub const MAX_CONFIG_ITEMS: usize = 12;

/// Supremum of the total weight of at most `max_items` items fitting in one
/// bin, for a piecewise-constant weight function.
///
/// Classes are half-open intervals, so `n_j` items of class `j` are
/// achievable exactly when `Σ n_j · inf_j < 1` (sizes may sit arbitrarily
/// close above each infimum).
pub fn max_weight_config(w: WeightFunctionId, max_items: usize) -> Result<BigRational, OracleError> {
    if max_items == 0 || max_items > MAX_CONFIG_ITEMS {
        return Err(OracleError::ConfigItems(max_items));
    }
    let table = w.class_table().map_err(|e| OracleError::Unsupported(e.to_string()))?;
    let mut best = BigRational::zero();
    search(&table, 0, max_items, &BigRational::zero(), &BigRational::zero(), &mut best);
    Ok(best)
}

fn search(
    table: &[(BigRational, BigRational)],
    class: usize,
    items_left: usize,
    size: &BigRational,
    weight: &BigRational,
    best: &mut BigRational,
) {
    if weight > best {
        *best = weight.clone();
    }
    if class == table.len() || items_left == 0 {
        return;
    }
    let (inf, w) = &table[class];
    let mut size = size.clone();
    let mut weight = weight.clone();
    for used in 0..=items_left {
        if used > 0 {
            size += inf;
            weight += w;
        }
        if size >= BigRational::one() {
            break;
        }
        search(table, class + 1, items_left - used, &size, &weight, best);
    }
}
