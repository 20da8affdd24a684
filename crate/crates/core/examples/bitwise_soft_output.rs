//! APP LLRs of one noisy (32,26) block from every soft-output decoder.
//!
//! ```text
//! cargo run --release --example bitwise_soft_output -- [ebn0_db] [seed]
//! ```
use soscl::bcjr::{bcjr_app, SyndromeTrellis};
use soscl::soft_output::{bitwise_app_listmax, bitwise_app_listsum, bitwise_app_soscl, CodewordList};
use rand::Rng;
use soscl::{encode, transmit, trial_rng, ChannelParams, CodeSpec, FrozenRule, SclDecoder};

fn main() -> soscl::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let ebn0: f64 = args.first().and_then(|s| s.parse().ok()).unwrap_or(2.0);
    let seed: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(3);

    let spec = CodeSpec::reed_muller(32, 26, FrozenRule::StaticZero)?;
    let mut rng = trial_rng(seed, 0);
    let msg: Vec<u8> = (0..spec.k()).map(|_| rng.random_range(0..2)).collect();
    let c = encode(&msg, &spec)?;
    let frame = transmit(&c, &ChannelParams::new(ebn0, spec.rate())?, &mut rng);

    let res = SclDecoder::new(&spec, 4)?.decode(&frame)?;
    let list = CodewordList::from_result(&res);
    let so = bitwise_app_soscl(&res, &frame)?;
    let sum = bitwise_app_listsum(&list, &frame, f64::INFINITY)?;
    let max = bitwise_app_listmax(&list, &frame, f64::INFINITY)?;
    let map = bcjr_app(&SyndromeTrellis::from_spec(&spec)?, &frame)?;

    println!("unvisited mass ln φ = {:.3}", res.log_unvisited);
    println!("{:>3} {:>2} {:>8} {:>9} {:>9} {:>9} {:>9}", "i", "c", "ch", "so-scl", "list-sum", "list-max", "map");
    for i in 0..spec.n() {
        println!(
            "{i:>3} {:>2} {:>8.3} {:>9.3} {:>9.3} {:>9.3} {:>9.3}",
            c[i], frame.llr_ch[i], so[i], sum[i], max[i], map[i]
        );
    }
    Ok(())
}
