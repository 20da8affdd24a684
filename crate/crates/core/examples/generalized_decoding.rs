//! Accept-or-erase decoding with the SO-SCL threshold test, next to a
//! CRC-aided SCL baseline carrying the same 42 information bits.
//!
//! ```text
//! cargo run --release --example generalized_decoding -- [ebn0_db] [trials]
//! ```
use soscl::harness::{run_experiment, CodeConfig, CodeFamily, CrcKind, DecoderConfig, DecoderKind, ExperimentConfig, ExperimentKind, FrozenConfig, Stopping};
use soscl::harness::ExperimentOutput;

fn main() -> soscl::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let ebn0: f64 = args.first().and_then(|s| s.parse().ok()).unwrap_or(3.0);
    let trials: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);

    let mut cfg = ExperimentConfig::preset(ExperimentKind::Gendec);
    cfg.snr_db = vec![ebn0];
    cfg.stopping = Stopping::fixed(trials);
    cfg.epsilon = Some(0.1);
    let ExperimentOutput::Reports(ours) = run_experiment(&cfg, ExperimentKind::Gendec)? else { unreachable!() };

    cfg.code = CodeConfig {
        family: CodeFamily::FiveG,
        n: 64,
        k: 48,
        frozen: FrozenConfig::Static,
        crc: Some(CrcKind::Crc6),
    };
    cfg.decoders = vec![DecoderConfig { kind: DecoderKind::CrcScl, list_size: 4, beta: None }];
    let ExperimentOutput::Reports(crc) = run_experiment(&cfg, ExperimentKind::Gendec)? else { unreachable!() };

    println!("{:<26} {:>8} {:>10} {:>10} {:>8}", "scheme", "Eb/N0", "BLER", "UER", "MDR");
    for r in ours.iter().chain(&crc) {
        let name = format!("{} {}", r.code, r.decoder);
        println!("{name:<26} {:>8.2} {:>10.3e} {:>10.3e} {:>8.4}", r.ebn0_db, r.bler, r.uer, r.mdr);
    }
    Ok(())
}
