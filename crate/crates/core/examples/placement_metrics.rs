//! Place each 42-block code across clusters and compare repair and read balance metrics.
//!
//! cargo run --example placement_metrics

use unilrc::metrics::{compute_metrics, write_metrics_csv};
use unilrc::placement::{cross_cluster_cost, place_default};
use unilrc::presets::{build, Scheme};
use unilrc::Family;

fn main() -> unilrc::Result<()> {
    let mut rows = Vec::new();
    for family in Family::ALL {
        let code = build(family, Scheme::N42)?;
        let map = place_default(&code)?;
        println!("{family}: {} clusters", map.num_clusters);
        for (c, blocks) in map.clusters().iter().enumerate() {
            let cross: Vec<usize> =
                blocks.iter().map(|&b| cross_cluster_cost(&code, &map, b)).collect::<unilrc::Result<_>>()?;
            println!("  cluster {c}: blocks {blocks:?} cross cost {cross:?}");
        }
        rows.push((family.to_string(), Scheme::N42.label(), compute_metrics(&code, &map)?));
    }
    println!();
    write_metrics_csv(std::io::stdout(), &rows)
}
