use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use soscl::harness::{run_experiment, ExperimentConfig, ExperimentKind, ExperimentOutput};
use soscl::Error;

/// Soft-output list decoding experiments over the binary-input AWGN channel.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Block and bit error rates of single-code decoders.
    Bler(Common),
    /// Predicted versus empirical error probability in half-decade bins.
    Calibrate(Common),
    /// Accept-or-erase decoding: BLER, UER and MDR.
    Gendec(Common),
    /// Iterative decoding of a product code.
    Product(Common),
    /// Iterative decoding of a degree-2 GLDPC code.
    Gldpc(Common),
    /// 1-GMI of bitwise soft output with optimized post-processing.
    Gmi(Common),
    /// Density-evolution thresholds of the GLDPC ensemble.
    Mcde(Common),
    /// Compare decoders against exhaustive enumeration on a small code.
    OracleCheck(Common),
}

#[derive(Args)]
struct Common {
    /// JSON experiment file; the built-in preset is used when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated values or `start:stop:step`, in dB.
    #[arg(long)]
    snr: Option<String>,
    /// Overrides the list size of every decoder.
    #[arg(long)]
    list_size: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// Print the effective configuration as JSON and exit.
    #[arg(long)]
    print_config: bool,
}

fn parse_snr(s: &str) -> Result<Vec<f64>, String> {
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    let parts: Vec<&str> = s.split(':').collect();
    if let [a, b, step] = parts[..] {
        let (a, b, step) = (num(a)?, num(b)?, num(step)?);
        if !(step > 0.0) || b < a {
            return Err("range needs start <= stop and a positive step".into());
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        // rounding keeps grid points like 0.1 + 0.2 printable
        return Ok((0..=n).map(|i| ((a + i as f64 * step) * 1e9).round() / 1e9).collect());
    }
    s.split(',').map(num).collect()
}

fn effective_config(kind: ExperimentKind, c: &Common) -> soscl::Result<ExperimentConfig> {
    let mut cfg = match &c.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::preset(kind),
    };
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(s) = &c.snr {
        cfg.snr_db = parse_snr(s).map_err(|e| Error::InvalidArgument(format!("--snr: {e}")))?;
    }
    if let Some(l) = c.list_size {
        for d in &mut cfg.decoders {
            d.list_size = l;
        }
        for t in &mut cfg.turbo {
            use soscl::concatenated::SisoKind::*;
            t.siso = match t.siso {
                SoScl { .. } => SoScl { list_size: l },
                ListMax { .. } => ListMax { list_size: l },
                ListSum { .. } => ListSum { list_size: l },
                Bcjr => Bcjr,
            };
        }
    }
    if let Some(e) = c.epsilon {
        cfg.epsilon = Some(e);
    }
    if let Some(o) = &c.out {
        cfg.out = Some(o.clone());
    }
    if let Some(w) = c.workers {
        cfg.workers = Some(w);
    }
    Ok(cfg)
}

fn run(kind: ExperimentKind, c: &Common) -> soscl::Result<bool> {
    let cfg = effective_config(kind, c)?;
    if c.print_config {
        cfg.validate(kind)?;
        println!("{}", cfg.to_json());
        return Ok(true);
    }
    let output = run_experiment(&cfg, kind)?;
    let csv = output.to_csv()?;
    match &cfg.out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    let ok = match &output {
        ExperimentOutput::Oracle(rows) => rows.iter().all(|r| r.pass),
        _ => true,
    };
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, common) = match &cli.command {
        Command::Bler(c) => (ExperimentKind::Bler, c),
        Command::Calibrate(c) => (ExperimentKind::Calibrate, c),
        Command::Gendec(c) => (ExperimentKind::Gendec, c),
        Command::Product(c) => (ExperimentKind::Product, c),
        Command::Gldpc(c) => (ExperimentKind::Gldpc, c),
        Command::Gmi(c) => (ExperimentKind::Gmi, c),
        Command::Mcde(c) => (ExperimentKind::Mcde, c),
        Command::OracleCheck(c) => (ExperimentKind::OracleCheck, c),
    };
    match run(kind, common) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("oracle check failed");
            ExitCode::FAILURE
        }
        Err(e @ (Error::Validation(_) | Error::InvalidArgument(_) | Error::Json(_))) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
