//! Iterative decoding of a degree-2 GLDPC code with (32,26) Reed-Muller
//! check nodes on a seeded random interleaver.
//!
//! ```text
//! cargo run --release --example gldpc_turbo -- [ebn0_db] [frames] [cn_pairs]
//! ```
use rand::Rng;
use soscl::concatenated::{build_gldpc, gldpc_encode, TurboConfig};
use soscl::{transmit, trial_rng, ChannelParams, CodeSpec, FrozenRule};

fn main() -> soscl::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let ebn0: f64 = args.first().and_then(|s| s.parse().ok()).unwrap_or(2.5);
    let frames: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(500);
    let pairs: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(32);

    let component = CodeSpec::reed_muller(32, 26, FrozenRule::StaticZero)?;
    let spec = build_gldpc(&component, pairs, 1)?;
    println!(
        "GLDPC n = {}, design dimension {}, actual dimension {}",
        spec.n(),
        spec.design_dimension(),
        spec.dimension()
    );
    let params = ChannelParams::new(ebn0, spec.rate())?;
    let mut list_max = TurboConfig::list_max(4);
    list_max.early_stop = true;
    for (name, cfg) in [("so-scl", TurboConfig::so_scl(4, 0.6)), ("list-max", list_max)] {
        let mut dec = spec.decoder(cfg)?;
        let mut errors = 0u64;
        for t in 0..frames {
            let mut rng = trial_rng(11, t);
            let msg: Vec<u8> = (0..spec.dimension()).map(|_| rng.random_range(0..2)).collect();
            let c = gldpc_encode(&msg, &spec)?;
            let frame = transmit(&c, &params, &mut rng);
            errors += u64::from(dec.decode(&frame.llr_ch)?.decisions != c);
        }
        println!("{name:<9} {ebn0} dB  BLER {:.3e} ({errors}/{frames})", errors as f64 / frames as f64);
    }
    Ok(())
}
