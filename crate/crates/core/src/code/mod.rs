//! Wide LRC constructions and the coding operations on them.
//!
//! Block indices follow one convention for every family: data blocks
//! `0..k` in group order, then global parities `k..k+g` in group order,
//! then local parities `k+g..n`, one per local group.

mod build;
pub mod json;
mod ops;
mod verify;

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

pub use build::{build_alrc, build_olrc, build_ulrc, build_unilrc, evaluation_points};
pub use ops::{DecodePlan, Repair, Stripe};
pub use verify::{
    parity_bound_check, rate_check, sample_distance, singleton_equality, verify_distance, DistanceReport, Rate,
    SampledDistance, DEFAULT_DISTANCE_BUDGET,
};

use crate::error::{Error, Result};
use crate::gf::Gf;
use crate::matrix::GfMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    #[serde(rename = "unilrc")]
    UniLrc,
    Alrc,
    Olrc,
    Ulrc,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Alrc, Family::Olrc, Family::Ulrc, Family::UniLrc];

    pub fn name(self) -> &'static str {
        match self {
            Family::UniLrc => "UniLRC",
            Family::Alrc => "ALRC",
            Family::Olrc => "OLRC",
            Family::Ulrc => "ULRC",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        match s.to_ascii_lowercase().as_str() {
            "unilrc" => Ok(Family::UniLrc),
            "alrc" => Ok(Family::Alrc),
            "olrc" => Ok(Family::Olrc),
            "ulrc" => Ok(Family::Ulrc),
            other => Err(Error::Parameter(format!("unknown family {other:?}"))),
        }
    }
}

/// Parameters of one code instance. `d` is the claimed minimum distance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    /// Largest local-group locality (helpers needed by a local repair).
    pub r: usize,
    /// Number of local groups; equals the cluster count for UniLRC.
    pub z: usize,
    /// Scale coefficient, UniLRC only.
    pub alpha: Option<usize>,
    pub g: usize,
    pub l: usize,
    pub d: usize,
    pub f: usize,
}

impl CodeSpec {
    /// UniLRC parameters for scale `alpha` and `z` clusters.
    pub fn unilrc(alpha: usize, z: usize) -> Result<CodeSpec> {
        if alpha == 0 {
            return Err(Error::Parameter("alpha must be positive".into()));
        }
        if z < 2 {
            return Err(Error::Parameter(
                "z must be at least 2: a single cluster cannot survive a cluster failure".into(),
            ));
        }
        let n = alpha * z * z + z;
        let k = alpha * z * z - alpha * z;
        let r = alpha * z;
        Ok(CodeSpec { family: Family::UniLrc, n, k, r, z, alpha: Some(alpha), g: r, l: z, d: r + 2, f: r + 1 })
    }

    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.k as u64, self.n as u64)
    }

    /// One-line summary used by the CLI.
    pub fn summary(&self) -> String {
        let rate = *self.rate().numer() as f64 / *self.rate().denom() as f64;
        format!(
            "family={} n={} k={} r={} z={} g={} l={} d={} rate={:.4}",
            self.family, self.n, self.k, self.r, self.z, self.g, self.l, self.d, rate
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Data,
    Global,
    Local,
}

/// Local groups over block indices. Each group holds exactly one local parity.
///
/// For UniLRC, ALRC data groups and ULRC the groups are disjoint. OLRC's
/// global parities belong to every group, and ALRC's global parities belong
/// to none (they are repaired by a global decode).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupLayout {
    pub roles: Vec<Role>,
    pub groups: Vec<Vec<usize>>,
}

impl GroupLayout {
    pub fn n(&self) -> usize {
        self.roles.len()
    }

    pub fn role(&self, block: usize) -> Role {
        self.roles[block]
    }

    /// First group containing `block`.
    pub fn group_of(&self, block: usize) -> Option<usize> {
        self.groups.iter().position(|g| g.contains(&block))
    }

    /// Blocks whose XOR rebuilds `block`, if it has a local group.
    pub fn repair_set(&self, block: usize) -> Option<Vec<usize>> {
        let g = self.group_of(block)?;
        Some(self.groups[g].iter().copied().filter(|&b| b != block).collect())
    }

    /// Blocks that belong to exactly one group, per group. Shared and
    /// ungrouped blocks are returned separately.
    pub fn exclusive_members(&self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let mut count = vec![0usize; self.n()];
        for g in &self.groups {
            for &b in g {
                count[b] += 1;
            }
        }
        let exclusive = self.groups.iter().map(|g| g.iter().copied().filter(|&b| count[b] == 1).collect()).collect();
        let rest = (0..self.n()).filter(|&b| count[b] != 1).collect();
        (exclusive, rest)
    }

    fn validate(&self) -> Result<()> {
        for (i, g) in self.groups.iter().enumerate() {
            let locals = g.iter().filter(|&&b| self.roles[b] == Role::Local).count();
            if locals != 1 {
                return Err(Error::Contract(format!("group {i} has {locals} local parities")));
            }
            if g.iter().any(|&b| b >= self.n()) {
                return Err(Error::Contract(format!("group {i} references a block out of range")));
            }
        }
        Ok(())
    }
}

/// Block indices that are unavailable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ErasurePattern {
    pub erased: BTreeSet<usize>,
}

impl ErasurePattern {
    pub fn new(erased: impl IntoIterator<Item = usize>) -> ErasurePattern {
        ErasurePattern { erased: erased.into_iter().collect() }
    }

    pub fn len(&self) -> usize {
        self.erased.len()
    }

    pub fn is_empty(&self) -> bool {
        self.erased.is_empty()
    }

    pub fn contains(&self, b: usize) -> bool {
        self.erased.contains(&b)
    }
}

impl fmt::Display for ErasurePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.erased.iter().map(|b| b.to_string()).collect();
        write!(f, "{{{}}}", v.join(","))
    }
}

/// A fully built code: parameters, layout and matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeDefinition {
    pub spec: CodeSpec,
    pub layout: GroupLayout,
    /// `n x k`, systematic.
    pub generator: GfMatrix,
    /// `(n-k) x n`, derived from the generator.
    pub parity_check: GfMatrix,
    pub eval_points: Vec<Gf>,
}

impl CodeDefinition {
    pub(crate) fn assemble(
        spec: CodeSpec,
        layout: GroupLayout,
        generator: GfMatrix,
        eval_points: Vec<Gf>,
    ) -> Result<CodeDefinition> {
        if generator.rows() != spec.n || generator.cols() != spec.k || layout.n() != spec.n {
            return Err(Error::Contract("generator or layout shape disagrees with spec".into()));
        }
        if spec.n != spec.k + spec.g + spec.l {
            return Err(Error::Contract("n != k + g + l".into()));
        }
        layout.validate()?;
        let parity_check = generator.derive_parity_check()?;
        Ok(CodeDefinition { spec, layout, generator, parity_check, eval_points })
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn k(&self) -> usize {
        self.spec.k
    }

    /// Helper count of the cheapest single-block repair: the group size
    /// minus one for locally repairable blocks, `k` otherwise.
    pub fn repair_cost(&self, block: usize) -> usize {
        self.layout.repair_set(block).map_or(self.k(), |s| s.len())
    }

    pub fn is_locally_repairable(&self, block: usize) -> bool {
        self.layout.group_of(block).is_some()
    }

    /// True when every group's generator rows sum to the zero row.
    pub fn group_xor_identity_holds(&self) -> bool {
        self.layout
            .groups
            .iter()
            .all(|g| (0..self.k()).all(|c| g.iter().map(|&b| self.generator[(b, c)]).sum::<Gf>().is_zero()))
    }

    /// True when `H * G = 0`.
    pub fn parity_check_nullity_holds(&self) -> bool {
        match self.parity_check.mul(&self.generator) {
            Ok(p) => (0..p.rows()).all(|r| p.row(r).iter().all(|v| v.is_zero())),
            Err(_) => false,
        }
    }
}
