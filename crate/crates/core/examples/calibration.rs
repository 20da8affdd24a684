//! Bins blocks by predicted error probability `1 - Γ` and compares each bin
//! with the observed error rate, for Γ* and for Forney's list estimate.
//!
//! ```text
//! cargo run --release --example calibration -- [n] [k] [list] [ebn0_db] [trials] [static|dynamic]
//! ```
use soscl::harness::{run_experiment, ExperimentConfig, ExperimentKind, ExperimentOutput, FrozenConfig, Stopping};

fn main() -> soscl::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, d: f64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(d);
    let mut cfg = ExperimentConfig::preset(ExperimentKind::Calibrate);
    cfg.code.n = num(0, 64.0) as usize;
    cfg.code.k = num(1, 42.0) as usize;
    let list = num(2, 2.0) as usize;
    for d in &mut cfg.decoders {
        d.list_size = list;
    }
    cfg.snr_db = vec![num(3, 3.0)];
    cfg.stopping = Stopping::fixed(num(4, 100_000.0) as u64);
    if args.get(5).map(String::as_str) == Some("static") {
        cfg.code.frozen = FrozenConfig::Static;
    }

    let ExperimentOutput::Calibration(rows) = run_experiment(&cfg, ExperimentKind::Calibrate)? else { unreachable!() };
    println!("{:<8} {:>18} {:>9} {:>11} {:>11} {:>7}", "decoder", "bin", "blocks", "predicted", "empirical", "ratio");
    for r in rows.iter().filter(|r| r.count > 0) {
        println!(
            "{:<8} [{:.1e}, {:.1e}) {:>9} {:>11.4e} {:>11.4e} {:>7.3}",
            r.decoder, r.bin_high, r.bin_low, r.count, r.mean_predicted, r.empirical, r.ratio()
        );
    }
    Ok(())
}
