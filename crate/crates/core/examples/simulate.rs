//! Simulated reconstruction, degraded reads and full-node recovery under a
//! cross-cluster bandwidth sweep.
//!
//! cargo run --release --example simulate

use unilrc::placement::place_default;
use unilrc::presets::{build, Scheme};
use unilrc::sim::{simulate, SimConfig, Workload};
use unilrc::Family;

fn main() -> unilrc::Result<()> {
    let workloads =
        [Workload::Reconstruction, Workload::DegradedRead { requests: 50 }, Workload::FullNode { stripes: 42 }];
    for workload in workloads {
        println!("{}", workload.name());
        for family in Family::ALL {
            let code = build(family, Scheme::N42)?;
            let map = place_default(&code)?;
            let mut line = format!("  {family:<7}");
            for gbps in [0.5, 1.0, 2.0, 5.0, 10.0] {
                let mut cfg = SimConfig::new(code.clone(), map.clone(), workload.clone());
                cfg.topology.cross_bandwidth = gbps * 1e9 / 8.0;
                let r = simulate(&cfg)?;
                line += &format!(" {:>8.1}", r.throughput / 1e6);
            }
            println!("{line}   MB/s at 0.5/1/2/5/10 Gb/s cross");
        }
    }
    Ok(())
}
