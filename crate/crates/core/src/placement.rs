//! Block-to-cluster placement of one stripe.
//!
//! UniLRC places local group `i` in cluster `i`. The baselines use an
//! ECWide-style packer: blocks go into as few clusters as possible while any
//! single cluster can be lost without losing data.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::code::{CodeDefinition, ErasurePattern, Family};
use crate::error::{Error, Result};
use crate::matrix::RowBasis;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacementMap {
    pub cluster_of: Vec<usize>,
    pub num_clusters: usize,
}

#[derive(Serialize, Deserialize)]
struct PlacementJson {
    schema_version: u32,
    num_clusters: usize,
    clusters: Vec<Vec<usize>>,
}

impl PlacementMap {
    pub fn new(cluster_of: Vec<usize>, num_clusters: usize) -> Result<PlacementMap> {
        if let Some(b) = cluster_of.iter().position(|&c| c >= num_clusters) {
            return Err(Error::Domain(format!("block {b} assigned to cluster {} of {num_clusters}", cluster_of[b])));
        }
        Ok(PlacementMap { cluster_of, num_clusters })
    }

    /// Builds a map from explicit cluster contents.
    pub fn from_clusters(clusters: &[Vec<usize>]) -> Result<PlacementMap> {
        let n = clusters.iter().map(Vec::len).sum();
        let mut cluster_of = vec![usize::MAX; n];
        for (c, blocks) in clusters.iter().enumerate() {
            for &b in blocks {
                match cluster_of.get_mut(b) {
                    Some(slot) if *slot == usize::MAX => *slot = c,
                    _ => return Err(Error::Domain(format!("block {b} is out of range or placed twice"))),
                }
            }
        }
        PlacementMap::new(cluster_of, clusters.len())
    }

    pub fn n(&self) -> usize {
        self.cluster_of.len()
    }

    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_clusters];
        for (b, &c) in self.cluster_of.iter().enumerate() {
            out[c].push(b);
        }
        out
    }

    pub fn blocks_in(&self, cluster: usize) -> Vec<usize> {
        (0..self.n()).filter(|&b| self.cluster_of[b] == cluster).collect()
    }

    /// Data blocks (`0..k`) per cluster.
    pub fn data_per_cluster(&self, k: usize) -> Vec<usize> {
        let mut out = vec![0; self.num_clusters];
        for &c in &self.cluster_of[..k.min(self.n())] {
            out[c] += 1;
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = PlacementJson { schema_version: 1, num_clusters: self.num_clusters, clusters: self.clusters() };
        let mut s = serde_json::to_string_pretty(&doc)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<PlacementMap> {
        let doc: PlacementJson = serde_json::from_str(text)?;
        if doc.schema_version != 1 {
            return Err(Error::Format(format!("unsupported schema_version {}", doc.schema_version)));
        }
        if doc.clusters.len() != doc.num_clusters {
            return Err(Error::Format("num_clusters disagrees with cluster list".into()));
        }
        PlacementMap::from_clusters(&doc.clusters)
    }
}

/// Two-tier network: fast links inside a cluster, a slower shared gateway between clusters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClusterTopology {
    pub num_clusters: usize,
    /// Bytes per second.
    pub inner_bandwidth: f64,
    /// Bytes per second.
    pub cross_bandwidth: f64,
}

impl ClusterTopology {
    pub fn new(num_clusters: usize, inner_bandwidth: f64, cross_bandwidth: f64) -> Result<ClusterTopology> {
        if !(inner_bandwidth > 0.0 && cross_bandwidth > 0.0) || !cross_bandwidth.is_finite() {
            return Err(Error::Parameter("bandwidths must be positive, and cross-cluster bandwidth finite".into()));
        }
        if cross_bandwidth > inner_bandwidth {
            return Err(Error::Parameter("cross-cluster bandwidth exceeds inner-cluster bandwidth".into()));
        }
        Ok(ClusterTopology { num_clusters, inner_bandwidth, cross_bandwidth })
    }
}

pub fn place_unilrc(code: &CodeDefinition) -> Result<PlacementMap> {
    if code.spec.family != Family::UniLrc {
        return Err(Error::Parameter(format!("native placement needs a UniLRC code, got {}", code.spec.family)));
    }
    PlacementMap::from_clusters(&code.layout.groups)
}

/// Native placement for UniLRC, ECWide for everything else.
pub fn place_default(code: &CodeDefinition) -> Result<PlacementMap> {
    match code.spec.family {
        Family::UniLrc => place_unilrc(code),
        _ => place_ecwide(code),
    }
}

/// ECWide-style packing with `d` blocks per cluster.
pub fn place_ecwide(code: &CodeDefinition) -> Result<PlacementMap> {
    place_ecwide_with_capacity(code, code.spec.d)
}

fn cluster_decodable(code: &CodeDefinition, blocks: &[usize]) -> bool {
    code.decodable(&ErasurePattern::new(blocks.iter().copied()))
}

/// `unit` cut into `parts` near-equal pieces, larger pieces first.
fn balanced(unit: &[usize], parts: usize) -> Vec<Vec<usize>> {
    let (q, r) = (unit.len() / parts, unit.len() % parts);
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for p in 0..parts {
        let len = q + usize::from(p < r);
        out.push(unit[start..start + len].to_vec());
        start += len;
    }
    out
}

/// Greedy packer.
///
/// Packing units are each group's exclusive blocks plus one unit of blocks
/// that are shared by several groups or belong to none. Units are taken by
/// size (descending, then lowest block index). A unit that exceeds
/// `capacity` is split into the fewest balanced parts that each survive a
/// cluster loss, and every part gets a cluster of its own. Other units go
/// first-fit into existing unsplit clusters when the merged cluster still
/// survives its own loss. Clusters are finally numbered by their lowest block.
pub fn place_ecwide_with_capacity(code: &CodeDefinition, capacity: usize) -> Result<PlacementMap> {
    if capacity < 1 {
        return Err(Error::Parameter("cluster capacity must be at least 1".into()));
    }
    let (mut units, rest) = code.layout.exclusive_members();
    units.push(rest);
    units.retain(|u| !u.is_empty());
    for u in &mut units {
        u.sort_unstable();
    }
    units.sort_by_key(|u| (std::cmp::Reverse(u.len()), u[0]));

    // (blocks, open for merging)
    let mut clusters: Vec<(Vec<usize>, bool)> = Vec::new();
    for unit in units {
        if unit.len() <= capacity && cluster_decodable(code, &unit) {
            let slot = clusters.iter().position(|(c, open)| {
                *open && c.len() + unit.len() <= capacity && {
                    let merged: Vec<usize> = c.iter().chain(&unit).copied().collect();
                    cluster_decodable(code, &merged)
                }
            });
            match slot {
                Some(i) => clusters[i].0.extend(&unit),
                None => clusters.push((unit, true)),
            }
            continue;
        }
        let mut parts = unit.len().div_ceil(capacity).max(2);
        loop {
            if parts > unit.len() {
                return Err(Error::Contract(format!(
                    "cannot place unit starting at block {} so that a cluster loss is survivable",
                    unit[0]
                )));
            }
            let split = balanced(&unit, parts);
            if split.iter().all(|p| cluster_decodable(code, p)) {
                clusters.extend(split.into_iter().map(|p| (p, false)));
                break;
            }
            parts += 1;
        }
    }
    let mut contents: Vec<Vec<usize>> = clusters
        .into_iter()
        .map(|(mut c, _)| {
            c.sort_unstable();
            c
        })
        .collect();
    contents.sort_by_key(|c| c[0]);
    PlacementMap::from_clusters(&contents)
}

/// True when losing any single cluster leaves the stripe decodable.
pub fn validate_placement(code: &CodeDefinition, map: &PlacementMap) -> bool {
    map.n() == code.n() && map.clusters().iter().all(|c| cluster_decodable(code, c))
}

/// Helpers read to rebuild one lost block, chosen with cluster awareness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairPlan {
    pub failed: usize,
    pub helpers: Vec<usize>,
    /// Local group repair (XOR) rather than a global decode.
    pub local: bool,
}

impl RepairPlan {
    /// Helpers grouped by cluster, in cluster order.
    pub fn helpers_by_cluster(&self, map: &PlacementMap) -> Vec<(usize, Vec<usize>)> {
        let mut out: Vec<(usize, Vec<usize>)> = Vec::new();
        let clusters: BTreeSet<usize> = self.helpers.iter().map(|&h| map.cluster_of[h]).collect();
        for c in clusters {
            out.push((c, self.helpers.iter().copied().filter(|&h| map.cluster_of[h] == c).collect()));
        }
        out
    }

    pub fn remote_clusters(&self, map: &PlacementMap) -> BTreeSet<usize> {
        let own = map.cluster_of[self.failed];
        self.helpers.iter().map(|&h| map.cluster_of[h]).filter(|&c| c != own).collect()
    }
}

/// Cheapest repair of `failed`: its local group when it has one, else a
/// global decode over `k` independent survivors taken from its own cluster
/// first, then by cluster id, then by block index.
pub fn plan_repair(code: &CodeDefinition, map: &PlacementMap, failed: usize) -> Result<RepairPlan> {
    if failed >= code.n() || map.n() != code.n() {
        return Err(Error::Domain(format!("block {failed} out of range")));
    }
    if let Some(helpers) = code.layout.repair_set(failed) {
        return Ok(RepairPlan { failed, helpers, local: true });
    }
    let own = map.cluster_of[failed];
    let mut order: Vec<usize> = (0..code.n()).filter(|&b| b != failed).collect();
    order.sort_by_key(|&b| (map.cluster_of[b] != own, map.cluster_of[b], b));
    let mut basis = RowBasis::new(code.k());
    let mut helpers = Vec::with_capacity(code.k());
    for b in order {
        if basis.insert(code.generator.row(b)) {
            helpers.push(b);
            if helpers.len() == code.k() {
                break;
            }
        }
    }
    if helpers.len() < code.k() {
        return Err(Error::Decode(format!("block {failed} cannot be rebuilt")));
    }
    Ok(RepairPlan { failed, helpers, local: false })
}

/// Cross-cluster helper traffic, in blocks, for repairing `failed`.
///
/// Helpers in the same remote cluster are combined there into one partial
/// result before crossing the gateway, so the cost is the number of distinct
/// remote clusters that contribute.
pub fn cross_cluster_cost(code: &CodeDefinition, map: &PlacementMap, failed: usize) -> Result<usize> {
    Ok(plan_repair(code, map, failed)?.remote_clusters(map).len())
}
