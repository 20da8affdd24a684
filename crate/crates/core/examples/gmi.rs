//! 1-GMI of the extrinsic output of each soft-output decoder on the
//! (32,26) static Reed-Muller code, with fitted post-processing.
//!
//! ```text
//! cargo run --release --example gmi -- [ebn0_db] [frames]
//! ```
use soscl::harness::{run_experiment, ExperimentConfig, ExperimentKind, ExperimentOutput, Stopping};

fn main() -> soscl::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut cfg = ExperimentConfig::preset(ExperimentKind::Gmi);
    cfg.snr_db = vec![args.first().and_then(|s| s.parse().ok()).unwrap_or(3.0)];
    cfg.stopping = Stopping::fixed(args.get(1).and_then(|s| s.parse().ok()).unwrap_or(10_000));
    let ExperimentOutput::Reports(rows) = run_experiment(&cfg, ExperimentKind::Gmi)? else { unreachable!() };
    for r in &rows {
        println!("{:<10} {:>5.2} dB  1-GMI {:.5}  BER {:.4e}", r.decoder, r.ebn0_db, r.gmi.unwrap_or(f64::NAN), r.ber);
    }
    Ok(())
}
