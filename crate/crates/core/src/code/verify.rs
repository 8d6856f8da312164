use num_rational::Ratio;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CodeDefinition, CodeSpec, ErasurePattern, Family};
use crate::error::{Error, Result};

/// Largest `n` for which [`verify_distance`] enumerates by default.
pub const DEFAULT_DISTANCE_BUDGET: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceReport {
    pub distance: usize,
    /// False when the budget was exceeded and `distance` is only the claim.
    pub exhaustive: bool,
    pub checks: usize,
    /// First undecodable pattern found, in enumeration order.
    pub witness: Option<Vec<usize>>,
}

/// Lexicographic k-subsets of `0..n`, visited until `f` returns false.
fn for_each_subset(n: usize, e: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if e > n {
        return;
    }
    let mut idx: Vec<usize> = (0..e).collect();
    loop {
        if !f(&idx) {
            return;
        }
        // advance
        let mut i = e;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - e + i {
                idx[i] += 1;
                for j in i + 1..e {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Smallest erasure count with an undecodable pattern, by exhaustive search.
///
/// Patterns are visited by increasing size, then lexicographically; the
/// search stops at the first failure.
pub fn verify_distance(code: &CodeDefinition, max_n: usize) -> DistanceReport {
    let n = code.n();
    if n > max_n {
        return DistanceReport { distance: code.spec.d, exhaustive: false, checks: 0, witness: None };
    }
    let mut checks = 0;
    for e in 1..=n - code.k() + 1 {
        let mut witness = None;
        for_each_subset(n, e, |p| {
            checks += 1;
            if code.decodable(&ErasurePattern::new(p.iter().copied())) {
                true
            } else {
                witness = Some(p.to_vec());
                false
            }
        });
        if witness.is_some() {
            return DistanceReport { distance: e, exhaustive: true, checks, witness };
        }
    }
    unreachable!("more than n - k erasures are never decodable")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledDistance {
    pub claimed: usize,
    pub samples: usize,
    /// Sampled `(d-1)`-column subsets of `H` that turned out dependent.
    pub failures: Vec<Vec<usize>>,
}

impl SampledDistance {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Spot check for codes too wide to enumerate: random `(d-1)`-subsets of
/// parity-check columns must all be independent.
pub fn sample_distance(code: &CodeDefinition, samples: usize, seed: u64) -> SampledDistance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let claimed = code.spec.d;
    let mut failures = Vec::new();
    for _ in 0..samples {
        let mut cols = sample(&mut rng, code.n(), claimed - 1).into_vec();
        cols.sort_unstable();
        if !code.erased_columns_independent(&ErasurePattern::new(cols.iter().copied())) {
            failures.push(cols);
        }
    }
    SampledDistance { claimed, samples, failures }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rate {
    pub k_over_n: Ratio<u64>,
    /// `r/(r+1) * (1 - 1/z)`
    pub locality_form: Ratio<u64>,
    /// `1 - (alpha+1)/(alpha*z+1)`
    pub alpha_form: Ratio<u64>,
}

impl Rate {
    pub fn consistent(&self) -> bool {
        self.k_over_n == self.locality_form && self.k_over_n == self.alpha_form
    }

    pub fn as_f64(&self) -> f64 {
        *self.k_over_n.numer() as f64 / *self.k_over_n.denom() as f64
    }
}

/// Code rate of a UniLRC spec together with its two closed forms.
pub fn rate_check(spec: &CodeSpec) -> Result<Rate> {
    let alpha = match (spec.family, spec.alpha) {
        (Family::UniLrc, Some(a)) => a as u64,
        _ => return Err(Error::Parameter("rate check applies to UniLRC specs".into())),
    };
    let (r, z) = (spec.r as u64, spec.z as u64);
    let one = Ratio::from_integer(1u64);
    let rate = Rate {
        k_over_n: Ratio::new(spec.k as u64, spec.n as u64),
        locality_form: Ratio::new(r, r + 1) * (one - Ratio::new(1, z)),
        alpha_form: one - Ratio::new(alpha + 1, alpha * z + 1),
    };
    if !rate.consistent() {
        return Err(Error::Contract(format!("rate forms disagree: {rate:?}")));
    }
    Ok(rate)
}

/// Whether `n - k` meets the parity lower bound `n/z + z - 1` exactly.
pub fn parity_bound_check(spec: &CodeSpec) -> Result<bool> {
    if spec.family != Family::UniLrc {
        return Err(Error::Parameter("parity bound applies to UniLRC specs".into()));
    }
    if !spec.n.is_multiple_of(spec.z) {
        return Ok(false);
    }
    Ok(spec.n - spec.k == spec.n / spec.z + spec.z - 1)
}

/// `n - k - n/(r+1) = d - 2`, the distance-optimality condition when `(r+1) | n`.
pub fn singleton_equality(spec: &CodeSpec, d: usize) -> bool {
    spec.n.is_multiple_of(spec.r + 1) && spec.n - spec.k - spec.n / (spec.r + 1) + 2 == d
}
