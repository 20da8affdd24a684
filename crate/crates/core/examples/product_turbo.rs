//! Iterative decoding of the (32,26)² product code with SO-SCL components
//! and with Pyndiah-weighted list-max components.
//!
//! ```text
//! cargo run --release --example product_turbo -- [ebn0_db] [frames]
//! ```
use soscl::concatenated::{product_encode, ProductCodeSpec, TurboConfig};
use soscl::{transmit, trial_rng, ChannelParams, CodeSpec, FrozenRule};

fn main() -> soscl::Result<()> {
    use rand::Rng;
    let args: Vec<String> = std::env::args().skip(1).collect();
    let ebn0: f64 = args.first().and_then(|s| s.parse().ok()).unwrap_or(2.25);
    let frames: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(500);

    let spec = ProductCodeSpec::square(CodeSpec::reed_muller(32, 26, FrozenRule::StaticZero)?);
    let params = ChannelParams::new(ebn0, spec.rate())?;
    let mut list_max = TurboConfig::list_max(4);
    list_max.early_stop = true;
    for (name, cfg) in [("so-scl", TurboConfig::so_scl(4, 0.5)), ("list-max", list_max)] {
        let mut dec = spec.decoder(cfg)?;
        let (mut errors, mut half_iterations) = (0u64, 0usize);
        for t in 0..frames {
            let mut rng = trial_rng(7, t);
            let msg: Vec<u8> = (0..spec.k()).map(|_| rng.random_range(0..2)).collect();
            let c = product_encode(&msg, &spec)?;
            let frame = transmit(&c, &params, &mut rng);
            let out = dec.decode(&frame.llr_ch)?;
            errors += u64::from(out.decisions != c);
            half_iterations += out.half_iterations;
        }
        println!(
            "{name:<9} {ebn0} dB  BLER {:.3e} ({errors}/{frames})  mean half-iterations {:.1}",
            errors as f64 / frames as f64,
            half_iterations as f64 / frames as f64
        );
    }
    Ok(())
}
