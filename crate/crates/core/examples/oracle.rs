//! Checks list decoding with a list holding every codeword against
//! exhaustive enumeration, and the trellis APP against both.
//!
//! ```text
//! cargo run --release --example oracle -- [frames]
//! ```
use soscl::harness::{run_experiment, ExperimentConfig, ExperimentKind, ExperimentOutput, Stopping};

fn main() -> soscl::Result<()> {
    let frames: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let mut cfg = ExperimentConfig::preset(ExperimentKind::OracleCheck);
    cfg.stopping = Stopping::fixed(frames);
    let ExperimentOutput::Oracle(rows) = run_experiment(&cfg, ExperimentKind::OracleCheck)? else { unreachable!() };
    for r in &rows {
        println!(
            "{} {:>4.1} dB  frames {}  |log Q* - log Q_U| {:.1e}  |ΣΓ - 1| {:.1e}  bcjr {:.1e}  list-sum {:.1e}  {}",
            r.code,
            r.ebn0_db,
            r.frames,
            r.max_log_q_err,
            r.max_gamma_sum_err,
            r.max_bcjr_err.unwrap_or(f64::NAN),
            r.max_list_sum_err,
            if r.pass { "ok" } else { "FAIL" }
        );
    }
    Ok(())
}
