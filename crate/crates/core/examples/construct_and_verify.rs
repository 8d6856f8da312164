//! Build the UniLRC family and its baselines, then check distances on small instances.
//!
//! cargo run --example construct_and_verify

use unilrc::code::{build_unilrc, parity_bound_check, sample_distance, verify_distance};
use unilrc::presets::{build, Scheme};
use unilrc::Family;

fn main() -> unilrc::Result<()> {
    for (alpha, z) in [(1, 6), (2, 8), (2, 10)] {
        let code = build_unilrc(alpha, z)?;
        println!("{}  parity bound tight: {}", code.spec.summary(), parity_bound_check(&code.spec)?);
    }

    println!();
    for (alpha, z) in [(1, 2), (1, 3), (2, 2), (1, 4)] {
        let code = build_unilrc(alpha, z)?;
        let rep = verify_distance(&code, 24);
        println!(
            "UniLRC({alpha},{z}) n={:<3} claimed d={} measured d={} after {} checks, witness {:?}",
            code.n(),
            code.spec.d,
            rep.distance,
            rep.checks,
            rep.witness.unwrap_or_default()
        );
    }

    // too wide to enumerate: sample (d-1)-subsets of parity-check columns
    println!();
    for family in Family::ALL {
        let code = build(family, Scheme::N42)?;
        let s = sample_distance(&code, 2000, 1);
        println!("{:<40} sampled {} subsets, {} dependent", code.spec.summary(), s.samples, s.failures.len());
    }
    Ok(())
}
