//! Deterministic simulation of reads and repairs over a two-tier network.
//!
//! Every block of a stripe sits on its own node. Nodes have an uplink and a
//! downlink at the inner-cluster rate; each cluster has one gateway with an
//! egress and an ingress link at the cross-cluster rate. Concurrent
//! transfers share links max-min fairly; compute time is not modelled.
//!
//! A repair sends same-cluster helpers straight to the rebuilding node. The
//! helpers of each remote cluster are first combined on one of them, and the
//! combined block crosses the gateway once. Latency is measured from request
//! to the last byte arriving at the client.

pub mod network;
mod workload;

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use network::{Endpoint, Network, NodeId, TraceEvent, Traffic};
pub use workload::{gen_workload, DEFAULT_RATIOS, DEFAULT_SIZES, MB};

use crate::code::CodeDefinition;
use crate::error::{Error, Result};
use crate::metrics::csv_err;
use crate::placement::{plan_repair, ClusterTopology, PlacementMap};
use crate::report::sig6;

#[derive(Clone, Debug, PartialEq)]
pub enum Workload {
    /// One full-stripe read of all data blocks.
    NormalRead,
    /// Sequential reads of randomly chosen unavailable data blocks.
    DegradedRead { requests: usize },
    /// Each of the `n` blocks lost and rebuilt in turn.
    Reconstruction,
    /// One node holding a block of each of `stripes` stripes fails; all
    /// stripes are repaired concurrently.
    FullNode { stripes: usize },
    /// Sequential object reads over stripes filled back to back; with
    /// `degraded`, the first block of every object is unavailable.
    ObjectRead { sizes: Vec<u64>, degraded: bool },
}

impl Workload {
    pub fn name(&self) -> &'static str {
        match self {
            Workload::NormalRead => "normal_read",
            Workload::DegradedRead { .. } => "degraded_read",
            Workload::Reconstruction => "reconstruction",
            Workload::FullNode { .. } => "full_node",
            Workload::ObjectRead { degraded: false, .. } => "object_read",
            Workload::ObjectRead { degraded: true, .. } => "object_degraded_read",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub topology: ClusterTopology,
    pub block_size: u64,
    pub code: CodeDefinition,
    pub map: PlacementMap,
    pub seed: u64,
    pub workload: Workload,
    /// Nodes per cluster; defaults to the largest cluster plus spares.
    pub nodes_per_cluster: Option<usize>,
    /// Keep a per-flow event trace.
    pub trace: bool,
}

/// 1 Gb/s between clusters, 10 Gb/s inside, in bytes per second.
pub const DEFAULT_CROSS_BANDWIDTH: f64 = 1e9 / 8.0;
pub const DEFAULT_INNER_BANDWIDTH: f64 = 10e9 / 8.0;

impl SimConfig {
    /// 1 MB blocks on the default 1:10 topology.
    pub fn new(code: CodeDefinition, map: PlacementMap, workload: Workload) -> SimConfig {
        let topology = ClusterTopology {
            num_clusters: map.num_clusters,
            inner_bandwidth: DEFAULT_INNER_BANDWIDTH,
            cross_bandwidth: DEFAULT_CROSS_BANDWIDTH,
        };
        SimConfig { topology, block_size: MB, code, map, seed: 0, workload, nodes_per_cluster: None, trace: false }
    }

    fn validate(&self) -> Result<()> {
        if self.block_size == 0 {
            return Err(Error::Parameter("block size must be positive".into()));
        }
        if self.map.n() != self.code.n() {
            return Err(Error::Domain("placement and code disagree on n".into()));
        }
        if self.topology.num_clusters < self.map.num_clusters {
            return Err(Error::Parameter(format!(
                "topology has {} clusters, placement needs {}",
                self.topology.num_clusters, self.map.num_clusters
            )));
        }
        ClusterTopology::new(self.topology.num_clusters, self.topology.inner_bandwidth, self.topology.cross_bandwidth)?;
        if let Some(npc) = self.nodes_per_cluster {
            if npc <= self.largest_cluster() {
                return Err(Error::Parameter("each cluster needs a spare node beyond its blocks".into()));
            }
        }
        Ok(())
    }

    fn largest_cluster(&self) -> usize {
        self.map.clusters().iter().map(Vec::len).max().unwrap_or(0)
    }

    fn nodes(&self, spares: usize) -> usize {
        self.nodes_per_cluster.unwrap_or(self.largest_cluster() + spares)
    }

    fn network(&self, spares: usize) -> Network {
        let net = Network::new(
            self.topology.num_clusters,
            self.nodes(spares),
            self.topology.inner_bandwidth,
            self.topology.cross_bandwidth,
        );
        if self.trace {
            net.with_trace()
        } else {
            net
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SimResult {
    /// Bytes per second.
    pub throughput: f64,
    /// Seconds, one per request or repair.
    pub latency_samples: Vec<f64>,
    /// Repair traffic through cluster gateways.
    pub cross_cluster_bytes: f64,
    /// Repair traffic inside clusters.
    pub inner_cluster_bytes: f64,
    /// Bytes delivered to the client.
    pub client_bytes: f64,
    pub trace: Option<Vec<TraceEvent>>,
}

impl SimResult {
    pub fn mean_latency(&self) -> f64 {
        if self.latency_samples.is_empty() {
            return 0.0;
        }
        self.latency_samples.iter().sum::<f64>() / self.latency_samples.len() as f64
    }

    /// Nearest-rank percentile, `p` in `0..=100`.
    pub fn percentile(&self, p: f64) -> f64 {
        if self.latency_samples.is_empty() {
            return 0.0;
        }
        let mut v = self.latency_samples.clone();
        v.sort_by(f64::total_cmp);
        let rank = ((p / 100.0) * v.len() as f64).ceil().max(1.0) as usize;
        v[rank.min(v.len()) - 1]
    }

    fn absorb(&mut self, net: &mut Network) {
        for f in 0..net.flow_count() {
            match net.traffic(f) {
                Traffic::Inner => self.inner_cluster_bytes += net.bytes(f),
                Traffic::Cross => self.cross_cluster_bytes += net.bytes(f),
                Traffic::Client => self.client_bytes += net.bytes(f),
            }
        }
        if let Some(events) = net.trace.take() {
            self.trace.get_or_insert_with(Vec::new).extend(events);
        }
    }
}

/// Node of every block when block `b` sits at its rank within its cluster.
fn identity_layout(map: &PlacementMap) -> Vec<NodeId> {
    let mut node_of = vec![NodeId { cluster: 0, node: 0 }; map.n()];
    for (c, blocks) in map.clusters().iter().enumerate() {
        for (slot, &b) in blocks.iter().enumerate() {
            node_of[b] = NodeId { cluster: c, node: slot };
        }
    }
    node_of
}

/// First node of `cluster` that holds no block.
fn spare_node(map: &PlacementMap, cluster: usize) -> NodeId {
    NodeId { cluster, node: map.blocks_in(cluster).len() }
}

/// Adds the transfers that rebuild `failed` on `dest`; returns the flows
/// that end at `dest`.
fn add_repair(
    net: &mut Network,
    cfg: &SimConfig,
    node_of: &[NodeId],
    failed: usize,
    dest: NodeId,
    job: usize,
) -> Result<Vec<usize>> {
    let plan = plan_repair(&cfg.code, &cfg.map, failed)?;
    let own = cfg.map.cluster_of[failed];
    let bs = cfg.block_size as f64;
    let mut last = Vec::new();
    for (cluster, helpers) in plan.helpers_by_cluster(&cfg.map) {
        if cluster == own {
            for h in helpers {
                last.push(net.add_flow(node_of[h], Endpoint::Node(dest), bs, job, &[]));
            }
        } else {
            let agg = node_of[helpers[0]];
            let gather: Vec<usize> =
                helpers[1..].iter().map(|&h| net.add_flow(node_of[h], Endpoint::Node(agg), bs, job, &[])).collect();
            last.push(net.add_flow(agg, Endpoint::Node(dest), bs, job, &gather));
        }
    }
    Ok(last)
}

/// Time to rebuild block `failed` on a spare node of its cluster, alone on the network.
pub fn repair_time(cfg: &SimConfig, failed: usize) -> Result<f64> {
    Ok(single_repair(cfg, failed)?.0)
}

fn single_repair(cfg: &SimConfig, failed: usize) -> Result<(f64, Network)> {
    cfg.validate()?;
    let mut net = cfg.network(1);
    let node_of = identity_layout(&cfg.map);
    let dest = spare_node(&cfg.map, cfg.map.cluster_of[failed]);
    add_repair(&mut net, cfg, &node_of, failed, dest, 0)?;
    let t = net.run();
    Ok((t, net))
}

pub fn sim_normal_read(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let mut net = cfg.network(1);
    let node_of = identity_layout(&cfg.map);
    for (b, &node) in node_of.iter().enumerate().take(cfg.code.k()) {
        net.add_flow(node, Endpoint::Client, cfg.block_size as f64, b, &[]);
    }
    let t = net.run();
    let mut r = SimResult { latency_samples: vec![t], ..SimResult::default() };
    r.absorb(&mut net);
    r.throughput = (cfg.code.k() as u64 * cfg.block_size) as f64 / t;
    Ok(r)
}

pub fn sim_degraded_read(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let requests = match cfg.workload {
        Workload::DegradedRead { requests } => requests,
        _ => 1,
    };
    let node_of = identity_layout(&cfg.map);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut r = SimResult::default();
    for _ in 0..requests {
        let failed = rng.gen_range(0..cfg.code.k());
        let mut net = cfg.network(1);
        let dest = spare_node(&cfg.map, cfg.map.cluster_of[failed]);
        let repaired = add_repair(&mut net, cfg, &node_of, failed, dest, 0)?;
        net.add_flow(dest, Endpoint::Client, cfg.block_size as f64, 0, &repaired);
        r.latency_samples.push(net.run());
        r.absorb(&mut net);
    }
    let total: f64 = r.latency_samples.iter().sum();
    r.throughput = if total > 0.0 { (requests as u64 * cfg.block_size) as f64 / total } else { f64::INFINITY };
    Ok(r)
}

/// Every block rebuilt once, one at a time. Throughput is the bytes rebuilt
/// over the summed repair time.
pub fn sim_reconstruction(cfg: &SimConfig) -> Result<SimResult> {
    let mut r = SimResult::default();
    for b in 0..cfg.code.n() {
        let (t, mut net) = single_repair(cfg, b)?;
        r.latency_samples.push(t);
        r.absorb(&mut net);
    }
    let total: f64 = r.latency_samples.iter().sum();
    r.throughput = if total > 0.0 { (cfg.code.n() as u64 * cfg.block_size) as f64 / total } else { f64::INFINITY };
    Ok(r)
}

/// Node 0 of cluster 0 fails. Stripe `s` has block `s mod n` on that node:
/// its clusters are rotated so that block's cluster lands on cluster 0, and
/// node slots are rotated per stripe to spread load. Each stripe rebuilds on
/// a free node of cluster 0, chosen round-robin.
pub fn sim_full_node(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let stripes = match cfg.workload {
        Workload::FullNode { stripes } => stripes,
        _ => cfg.code.n(),
    };
    if stripes == 0 {
        return Err(Error::Parameter("full-node recovery needs at least one stripe".into()));
    }
    let npc = cfg.nodes(4);
    let clusters = cfg.map.clusters();
    let nc = cfg.map.num_clusters;
    let mut net = cfg.network(4);
    for s in 0..stripes {
        let failed = s % cfg.code.n();
        let home = cfg.map.cluster_of[failed];
        let physical = |c: usize| (c + nc - home) % nc;
        let mut node_of = vec![NodeId { cluster: 0, node: 0 }; cfg.code.n()];
        for (c, blocks) in clusters.iter().enumerate() {
            if c == home {
                let others = blocks.iter().filter(|&&b| b != failed);
                for (i, &b) in others.enumerate() {
                    node_of[b] = NodeId { cluster: 0, node: 1 + (i + s) % (npc - 1) };
                }
                node_of[failed] = NodeId { cluster: 0, node: 0 };
            } else {
                for (slot, &b) in blocks.iter().enumerate() {
                    node_of[b] = NodeId { cluster: physical(c), node: (slot + s) % npc };
                }
            }
        }
        let used: Vec<usize> = clusters[home].iter().map(|&b| node_of[b].node).collect();
        let free: Vec<usize> = (1..npc).filter(|n| !used.contains(n)).collect();
        let dest = NodeId { cluster: 0, node: free[s % free.len()] };
        add_repair(&mut net, cfg, &node_of, failed, dest, s)?;
    }
    let makespan = net.run();
    let mut r =
        SimResult { latency_samples: (0..stripes).map(|s| net.job_finish(s)).collect(), ..SimResult::default() };
    r.absorb(&mut net);
    r.throughput = (stripes as u64 * cfg.block_size) as f64 / makespan;
    Ok(r)
}

/// Objects laid out back to back over the data blocks of consecutive
/// stripes, all stripes sharing one placement. Objects are read one at a
/// time.
pub fn sim_object_read(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let (sizes, degraded) = match &cfg.workload {
        Workload::ObjectRead { sizes, degraded } => (sizes.clone(), *degraded),
        other => return Err(Error::Parameter(format!("object read needs an object workload, got {}", other.name()))),
    };
    let node_of = identity_layout(&cfg.map);
    let (k, bs) = (cfg.code.k() as u64, cfg.block_size);
    let mut offset = 0u64;
    let mut r = SimResult::default();
    for size in sizes {
        let mut net = cfg.network(1);
        let (first, end) = (offset / bs, (offset + size).div_ceil(bs));
        for j in first..end {
            let lo = offset.max(j * bs);
            let hi = (offset + size).min((j + 1) * bs);
            let block = (j % k) as usize;
            if degraded && j == first {
                let dest = spare_node(&cfg.map, cfg.map.cluster_of[block]);
                let repaired = add_repair(&mut net, cfg, &node_of, block, dest, 0)?;
                net.add_flow(dest, Endpoint::Client, (hi - lo) as f64, 0, &repaired);
            } else {
                net.add_flow(node_of[block], Endpoint::Client, (hi - lo) as f64, 0, &[]);
            }
        }
        r.latency_samples.push(net.run());
        r.absorb(&mut net);
        offset += size;
    }
    let total: f64 = r.latency_samples.iter().sum();
    r.throughput = if total > 0.0 { r.client_bytes / total } else { f64::INFINITY };
    Ok(r)
}

pub fn simulate(cfg: &SimConfig) -> Result<SimResult> {
    match cfg.workload {
        Workload::NormalRead => sim_normal_read(cfg),
        Workload::DegradedRead { .. } => sim_degraded_read(cfg),
        Workload::Reconstruction => sim_reconstruction(cfg),
        Workload::FullNode { .. } => sim_full_node(cfg),
        Workload::ObjectRead { .. } => sim_object_read(cfg),
    }
}

pub const SIM_CSV_HEADER: [&str; 9] = [
    "scheme",
    "family",
    "workload",
    "cross_bw",
    "throughput",
    "p50_latency",
    "p95_latency",
    "cross_bytes",
    "inner_bytes",
];

/// One row per simulation: scheme, family, workload, cross bandwidth
/// (bytes/s), throughput (bytes/s), p50 and p95 latency (s), repair bytes
/// across and inside clusters.
pub struct SimRow {
    pub scheme: String,
    pub family: String,
    pub workload: String,
    pub cross_bandwidth: f64,
    pub result: SimResult,
}

pub fn write_sim_csv<W: Write>(out: W, rows: &[SimRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SIM_CSV_HEADER).map_err(csv_err)?;
    for row in rows {
        let r = &row.result;
        w.write_record([
            row.scheme.clone(),
            row.family.clone(),
            row.workload.clone(),
            sig6(row.cross_bandwidth),
            sig6(r.throughput),
            sig6(r.percentile(50.0)),
            sig6(r.percentile(95.0)),
            sig6(r.cross_cluster_bytes),
            sig6(r.inner_cluster_bytes),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
