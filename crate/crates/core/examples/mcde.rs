//! Density-evolution threshold of the degree-2 GLDPC ensemble built on a
//! (32,26) Reed-Muller component.
//!
//! ```text
//! cargo run --release --example mcde -- [bcjr|soscl|listsum|listmax] [L] [population]
//! ```
use soscl::concatenated::SisoKind;
use soscl::evaluation::{mcde_threshold, McdeConfig};
use soscl::{CodeSpec, FrozenRule};

fn main() -> soscl::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let list_size = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let siso = match args.first().map(String::as_str).unwrap_or("bcjr") {
        "soscl" => SisoKind::SoScl { list_size },
        "listsum" => SisoKind::ListSum { list_size },
        "listmax" => SisoKind::ListMax { list_size },
        _ => SisoKind::Bcjr,
    };
    let population = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(2_000);
    let component = CodeSpec::reed_muller(32, 26, FrozenRule::StaticZero)?;
    let cfg = McdeConfig {
        population,
        lo_db: 1.0,
        hi_db: 2.5,
        ..Default::default()
    };
    let start = std::time::Instant::now();
    let result = mcde_threshold(&component, siso, &cfg)?;
    for p in &result.points {
        println!(
            "{:5.2} dB  converged={:<5}  iterations={:3}  gmi={:.4}",
            p.ebn0_db, p.converged, p.iterations, p.final_gmi
        );
    }
    match result.threshold_db {
        Some(t) => println!("{} threshold: {t:.2} dB ({:.1?})", siso.label(), start.elapsed()),
        None => println!("{} does not converge below {} dB", siso.label(), cfg.hi_db),
    }
    Ok(())
}
