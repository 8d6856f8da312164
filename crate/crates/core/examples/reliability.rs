//! Mean time to data loss for every code at every width, with the chain for one of them.
//!
//! cargo run --example reliability

use unilrc::placement::place_default;
use unilrc::presets::{build, Scheme};
use unilrc::reliability::{mttdl, MarkovParams, TransitionKind};
use unilrc::Family;

fn main() -> unilrc::Result<()> {
    for scheme in Scheme::ALL {
        println!("{}", scheme.label());
        for family in Family::ALL {
            let code = build(family, scheme)?;
            let r = mttdl(&code, &place_default(&code)?, &MarkovParams::defaults(code.spec.f))?;
            println!(
                "  {family:<7} C={:<8} exact {:.3e} years  product {:.3e} years",
                r.cost.c.to_string(),
                r.exact,
                r.product
            );
        }
    }

    let code = build(Family::UniLrc, Scheme::N42)?;
    let r = mttdl(&code, &place_default(&code)?, &MarkovParams::defaults(code.spec.f))?;
    println!("\nUniLRC 30-of-42 chain: states {:?}, absorbing {}", r.chain.states(), r.chain.absorbing());
    for t in &r.chain.transitions {
        let kind = match t.kind {
            TransitionKind::Failure => "fail",
            TransitionKind::Repair => "repair",
            TransitionKind::MultiRepair => "repair'",
        };
        println!("  {:>2} -> {:>2}  {kind:<7} {:.4e}/s", t.from, t.to, t.rate);
    }
    Ok(())
}
