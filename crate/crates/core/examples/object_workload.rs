//! Draw an object-size mix and replay it as normal and degraded reads.
//!
//! cargo run --release --example object_workload

use unilrc::placement::place_default;
use unilrc::presets::{build, Scheme};
use unilrc::sim::{gen_workload, simulate, SimConfig, Workload, DEFAULT_RATIOS, DEFAULT_SIZES, MB};
use unilrc::Family;

fn main() -> unilrc::Result<()> {
    let sizes = gen_workload(&DEFAULT_SIZES, &DEFAULT_RATIOS, 200, 9)?;
    for s in DEFAULT_SIZES {
        println!("{:>3} MB objects: {}", s / MB, sizes.iter().filter(|&&x| x == s).count());
    }
    for family in Family::ALL {
        let code = build(family, Scheme::N42)?;
        let map = place_default(&code)?;
        let mut out = Vec::new();
        for degraded in [false, true] {
            let cfg =
                SimConfig::new(code.clone(), map.clone(), Workload::ObjectRead { sizes: sizes.clone(), degraded });
            let r = simulate(&cfg)?;
            out.push(format!("p50 {:.4}s p95 {:.4}s", r.percentile(50.0), r.percentile(95.0)));
        }
        println!("{family:<7} normal {}  degraded {}", out[0], out[1]);
    }
    Ok(())
}
