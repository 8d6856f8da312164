//! Encode a stripe, repair one block from its local group, then decode after
//! losing a whole cluster's worth of blocks.
//!
//! cargo run --example encode_repair_decode

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unilrc::code::build_unilrc;
use unilrc::placement::place_unilrc;
use unilrc::ErasurePattern;

fn main() -> unilrc::Result<()> {
    let code = build_unilrc(1, 6)?;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let data: Vec<Vec<u8>> = (0..code.k()).map(|_| (0..4096).map(|_| rng.gen()).collect()).collect();
    let stripe = code.encode(&data)?;
    println!("{}", code.spec.summary());

    for failed in [0, 31, 41] {
        let erased = ErasurePattern::new([failed]);
        let r = code.repair(&stripe.view(&erased), failed)?;
        assert_eq!(r.block, stripe.blocks[failed]);
        println!(
            "block {failed:>2} ({:?}) rebuilt from {:?}, xor only: {}",
            code.layout.role(failed),
            r.helpers,
            r.xor_only
        );
    }

    // every block of one cluster plus nothing else: f = r+1 erasures
    let map = place_unilrc(&code)?;
    let lost = ErasurePattern::new(map.blocks_in(2));
    let plan = code.decode_plan(&lost)?;
    let recovered = plan.decode(&stripe.view(&lost))?;
    assert_eq!(recovered, data);
    println!("lost cluster 2 {lost}, decoded from {} survivors", plan.survivors.len());

    let too_many = ErasurePattern::new(map.blocks_in(2).into_iter().chain(map.blocks_in(3)));
    match code.decode_plan(&too_many) {
        Ok(_) => println!("{too_many} is still decodable"),
        Err(e) => println!("{e}"),
    }
    Ok(())
}
