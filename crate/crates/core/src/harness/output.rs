use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::evaluation::{clopper_pearson, SimReport};

/// Column order of the main report. Rows that stopped on `max_trials`
/// rather than on the error count are recognisable by `trials`.
pub const CSV_HEADER: [&str; 18] = [
    "code",
    "decoder",
    "list_size",
    "ebn0_db",
    "trials",
    "block_errors",
    "undetected",
    "erasures",
    "list_errors",
    "bler",
    "uer",
    "mdr",
    "ler",
    "ber",
    "gmi",
    "ci_low",
    "ci_high",
    "seed",
];

/// One (code, decoder, SNR) point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CsvRow {
    pub code: String,
    pub decoder: String,
    pub list_size: Option<usize>,
    pub ebn0_db: f64,
    pub trials: u64,
    pub block_errors: u64,
    pub undetected: u64,
    pub erasures: u64,
    pub list_errors: u64,
    pub bler: f64,
    pub uer: f64,
    pub mdr: f64,
    pub ler: f64,
    pub ber: f64,
    pub gmi: Option<f64>,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl CsvRow {
    pub fn new(code: &str, decoder: &str, list_size: Option<usize>, ebn0_db: f64, r: &SimReport, seed: u64) -> Self {
        let (ci_low, ci_high) = r.bler_ci();
        Self {
            code: code.to_string(),
            decoder: decoder.to_string(),
            list_size,
            ebn0_db,
            trials: r.trials,
            block_errors: r.block_errors,
            undetected: r.undetected,
            erasures: r.erasures,
            list_errors: r.list_errors,
            bler: r.bler(),
            uer: r.uer(),
            mdr: r.mdr(),
            ler: r.ler(),
            ber: r.ber(),
            gmi: r.gmi,
            ci_low,
            ci_high,
            seed,
        }
    }

    /// Rebuilds the counters, e.g. for ordering checks on parsed output.
    pub fn report(&self) -> SimReport {
        SimReport {
            trials: self.trials,
            block_errors: self.block_errors,
            undetected: self.undetected,
            erasures: self.erasures,
            list_errors: self.list_errors,
            bit_errors: 0,
            bits: 0,
            gmi: self.gmi,
        }
    }
}

/// One half-decade bin of predicted error probability.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CalibrationRow {
    pub code: String,
    pub decoder: String,
    pub list_size: usize,
    pub ebn0_db: f64,
    /// `decision` or `list`.
    pub target: String,
    pub bin_low: f64,
    pub bin_high: f64,
    pub count: u64,
    /// Mean of `1 - Γ` over the blocks in the bin.
    pub mean_predicted: f64,
    pub errors: u64,
    pub empirical: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl CalibrationRow {
    /// Empirical over predicted rate.
    pub fn ratio(&self) -> f64 {
        self.empirical / self.mean_predicted
    }

    pub(crate) fn fill_ci(&mut self) {
        (self.ci_low, self.ci_high) = clopper_pearson(self.errors, self.count, 0.05);
    }
}

/// One evaluated SNR of a density-evolution search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McdeRow {
    pub code: String,
    pub decoder: String,
    pub list_size: Option<usize>,
    pub ebn0_db: f64,
    pub converged: bool,
    pub iterations: usize,
    pub gmi: f64,
    /// Threshold found by the search this point belongs to.
    pub threshold_db: Option<f64>,
}

/// Worst deviations from exhaustive enumeration at one SNR.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleRow {
    pub code: String,
    pub ebn0_db: f64,
    pub frames: u64,
    /// `|log Q* - log Q_U|` with a list holding every codeword.
    pub max_log_q_err: f64,
    /// `|Σ Γ* - 1|` over the full list.
    pub max_gamma_sum_err: f64,
    /// Largest APP deviation of the trellis decoder; empty when the
    /// trellis is too large.
    pub max_bcjr_err: Option<f64>,
    /// Largest APP deviation of full-list list-sum.
    pub max_list_sum_err: f64,
    pub pass: bool,
}

/// Serializes rows with a header line.
pub fn write_rows<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn rows_to_string<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut buf = Vec::new();
    write_rows(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}
