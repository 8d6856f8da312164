//! Fluid-flow network: transfers share link capacity max-min fairly and
//! may wait for other transfers to finish first.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Traffic {
    Inner,
    Cross,
    /// Delivery to the client outside the clusters.
    Client,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NodeId {
    pub cluster: usize,
    pub node: usize,
}

/// Where a transfer ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Node(NodeId),
    Client,
}

#[derive(Clone, Debug)]
struct Flow {
    links: Vec<usize>,
    bytes: f64,
    remaining: f64,
    waiting_on: usize,
    dependents: Vec<usize>,
    job: usize,
    traffic: Traffic,
    src: NodeId,
    dst: Endpoint,
    start: Option<f64>,
    finish: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEvent {
    pub time: f64,
    pub event: &'static str,
    pub flow: usize,
    pub job: usize,
    pub src: NodeId,
    /// `None` for the client.
    pub dst: Option<NodeId>,
    pub bytes: f64,
    pub traffic: Traffic,
}

/// Per-node NIC links (out, in) at the inner rate and per-cluster gateway
/// links (egress, ingress) at the cross rate. The client has no limit.
#[derive(Clone, Debug)]
pub struct Network {
    clusters: usize,
    nodes_per_cluster: usize,
    capacity: Vec<f64>,
    flows: Vec<Flow>,
    pub trace: Option<Vec<TraceEvent>>,
}

impl Network {
    pub fn new(clusters: usize, nodes_per_cluster: usize, inner: f64, cross: f64) -> Network {
        let mut capacity = Vec::with_capacity(clusters * (2 * nodes_per_cluster + 2));
        for _ in 0..clusters {
            capacity.extend(std::iter::repeat_n(inner, 2 * nodes_per_cluster));
            capacity.extend([cross, cross]);
        }
        Network { clusters, nodes_per_cluster, capacity, flows: Vec::new(), trace: None }
    }

    pub fn with_trace(mut self) -> Network {
        self.trace = Some(Vec::new());
        self
    }

    fn base(&self, cluster: usize) -> usize {
        assert!(cluster < self.clusters, "cluster {cluster} out of range");
        cluster * (2 * self.nodes_per_cluster + 2)
    }

    fn node_out(&self, n: NodeId) -> usize {
        assert!(n.node < self.nodes_per_cluster, "node {} out of range", n.node);
        self.base(n.cluster) + 2 * n.node
    }

    fn node_in(&self, n: NodeId) -> usize {
        self.node_out(n) + 1
    }

    fn egress(&self, cluster: usize) -> usize {
        self.base(cluster) + 2 * self.nodes_per_cluster
    }

    fn ingress(&self, cluster: usize) -> usize {
        self.egress(cluster) + 1
    }

    /// Adds a transfer of `bytes` that starts once every flow in `after` is done.
    pub fn add_flow(&mut self, src: NodeId, dst: Endpoint, bytes: f64, job: usize, after: &[usize]) -> usize {
        let mut links = vec![self.node_out(src)];
        let traffic = match dst {
            Endpoint::Node(d) if d.cluster == src.cluster => {
                links.push(self.node_in(d));
                Traffic::Inner
            }
            Endpoint::Node(d) => {
                links.extend([self.egress(src.cluster), self.ingress(d.cluster), self.node_in(d)]);
                Traffic::Cross
            }
            Endpoint::Client => {
                links.push(self.egress(src.cluster));
                Traffic::Client
            }
        };
        let id = self.flows.len();
        for &a in after {
            self.flows[a].dependents.push(id);
        }
        self.flows.push(Flow {
            links,
            bytes,
            remaining: bytes,
            waiting_on: after.len(),
            dependents: Vec::new(),
            job,
            traffic,
            src,
            dst,
            start: None,
            finish: None,
        });
        id
    }

    pub fn traffic(&self, flow: usize) -> Traffic {
        self.flows[flow].traffic
    }

    pub fn bytes(&self, flow: usize) -> f64 {
        self.flows[flow].bytes
    }

    pub fn finish(&self, flow: usize) -> Option<f64> {
        self.flows[flow].finish
    }

    /// Latest finish time among the flows of `job`.
    pub fn job_finish(&self, job: usize) -> f64 {
        self.flows.iter().filter(|f| f.job == job).filter_map(|f| f.finish).fold(0.0, f64::max)
    }

    pub fn flow_count(&self) -> usize {
        self.flows.len()
    }

    fn record(&mut self, time: f64, event: &'static str, id: usize) {
        if let Some(trace) = self.trace.as_mut() {
            let f = &self.flows[id];
            trace.push(TraceEvent {
                time,
                event,
                flow: id,
                job: f.job,
                src: f.src,
                dst: match f.dst {
                    Endpoint::Node(n) => Some(n),
                    Endpoint::Client => None,
                },
                bytes: f.bytes,
                traffic: f.traffic,
            });
        }
    }

    /// Max-min fair rates for the active flows, by progressive filling.
    /// Ties between bottleneck links go to the lowest link index.
    fn rates(&self, active: &[usize]) -> Vec<f64> {
        let mut on_link: Vec<Vec<usize>> = vec![Vec::new(); self.capacity.len()];
        for (i, &f) in active.iter().enumerate() {
            for &l in &self.flows[f].links {
                on_link[l].push(i);
            }
        }
        let mut users: Vec<usize> = on_link.iter().map(Vec::len).collect();
        let mut left = self.capacity.clone();
        let mut rate = vec![f64::INFINITY; active.len()];
        let mut frozen = vec![false; active.len()];
        loop {
            let mut best: Option<(f64, usize)> = None;
            for l in 0..left.len() {
                if users[l] > 0 {
                    let s = left[l].max(0.0) / users[l] as f64;
                    if best.is_none_or(|(b, _)| s < b) {
                        best = Some((s, l));
                    }
                }
            }
            let Some((share, link)) = best else { break };
            if share.is_infinite() {
                break;
            }
            for &i in &on_link[link] {
                if !frozen[i] {
                    frozen[i] = true;
                    rate[i] = share;
                    for &l in &self.flows[active[i]].links {
                        left[l] -= share;
                        users[l] -= 1;
                    }
                }
            }
        }
        rate
    }

    /// Runs every flow to completion and returns the makespan.
    pub fn run(&mut self) -> f64 {
        let mut now = 0.0;
        let mut active: Vec<usize> = Vec::new();
        for id in 0..self.flows.len() {
            if self.flows[id].waiting_on == 0 {
                self.flows[id].start = Some(0.0);
                self.record(0.0, "start", id);
                active.push(id);
            }
        }
        while !active.is_empty() {
            let rates = self.rates(&active);
            let times: Vec<f64> = active
                .iter()
                .zip(&rates)
                .map(|(&f, &r)| if r.is_infinite() { 0.0 } else { self.flows[f].remaining / r })
                .collect();
            let dt = times.iter().copied().fold(f64::INFINITY, f64::min);
            now += dt;
            let mut done = Vec::new();
            let mut still = Vec::new();
            for ((&f, &r), &t) in active.iter().zip(&rates).zip(&times) {
                if t <= dt * (1.0 + 1e-12) {
                    done.push(f);
                } else {
                    self.flows[f].remaining -= r * dt;
                    still.push(f);
                }
            }
            for &f in &done {
                self.flows[f].remaining = 0.0;
                self.flows[f].finish = Some(now);
                self.record(now, "finish", f);
            }
            for &f in &done {
                for d in self.flows[f].dependents.clone() {
                    self.flows[d].waiting_on -= 1;
                    if self.flows[d].waiting_on == 0 {
                        self.flows[d].start = Some(now);
                        self.record(now, "start", d);
                        still.push(d);
                    }
                }
            }
            still.sort_unstable();
            active = still;
        }
        now
    }
}
