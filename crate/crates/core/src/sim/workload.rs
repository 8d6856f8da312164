use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub const MB: u64 = 1 << 20;

/// Object sizes of a production object-store mix: 1 MB, 32 MB and 64 MB.
pub const DEFAULT_SIZES: [u64; 3] = [MB, 32 * MB, 64 * MB];
pub const DEFAULT_RATIOS: [f64; 3] = [0.825, 0.1, 0.075];

/// `count` object sizes drawn from `sizes` with probabilities `ratios`.
pub fn gen_workload(sizes: &[u64], ratios: &[f64], count: usize, seed: u64) -> Result<Vec<u64>> {
    if sizes.len() != ratios.len() || sizes.is_empty() {
        return Err(Error::Parameter("sizes and ratios must be non-empty and of equal length".into()));
    }
    if ratios.iter().any(|&r| !(r >= 0.0 && r.is_finite())) {
        return Err(Error::Parameter("ratios must be finite and non-negative".into()));
    }
    let total: f64 = ratios.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Parameter(format!("ratios sum to {total}, not 1")));
    }
    let dist = WeightedIndex::new(ratios).map_err(|e| Error::Parameter(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| sizes[dist.sample(&mut rng)]).collect())
}
