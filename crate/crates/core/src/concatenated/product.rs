use super::{GroupGraph, TurboConfig, TurboDecoder, TurboOutcome};
use crate::code::{systematic_encode, CodeSpec};
use crate::error::{invalid, Result};

/// Product code: `N_col × N_row` arrays whose rows are `row_spec` codewords
/// and whose columns are `col_spec` codewords. Stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductCodeSpec {
    pub row_spec: CodeSpec,
    pub col_spec: CodeSpec,
}

impl ProductCodeSpec {
    /// Same component in both dimensions.
    pub fn square(component: CodeSpec) -> Self {
        Self {
            row_spec: component.clone(),
            col_spec: component,
        }
    }

    pub fn n(&self) -> usize {
        self.row_spec.n() * self.col_spec.n()
    }

    pub fn k(&self) -> usize {
        self.row_spec.k() * self.col_spec.k()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    /// Rows form layer 0 and columns layer 1.
    pub fn graph(&self) -> GroupGraph {
        let (nr, nc) = (self.row_spec.n(), self.col_spec.n());
        let rows = (0..nc).map(|r| (0..nr).map(|j| r * nr + j).collect()).collect();
        let cols = (0..nr).map(|j| (0..nc).map(|r| r * nr + j).collect()).collect();
        GroupGraph::new(nr * nc, [rows, cols]).expect("rows and columns tile the array")
    }

    pub fn decoder(&self, cfg: TurboConfig) -> Result<TurboDecoder> {
        TurboDecoder::new(self.graph(), [&self.row_spec, &self.col_spec], cfg)
    }

    /// Message bits at the systematic positions, row-major `K_col × K_row`.
    pub fn message_of(&self, bits: &[u8]) -> Vec<u8> {
        let nr = self.row_spec.n();
        let mut out = Vec::with_capacity(self.k());
        for &r in self.col_spec.info_set() {
            for &j in self.row_spec.info_set() {
                out.push(bits[(r - 1) * nr + j - 1]);
            }
        }
        out
    }
}

/// Systematically encodes the `K_col` message rows, then the `N_row` columns.
/// `msg` is row-major `K_col × K_row`; the output is row-major `N_col × N_row`.
pub fn product_encode(msg: &[u8], spec: &ProductCodeSpec) -> Result<Vec<u8>> {
    let (kr, kc) = (spec.row_spec.k(), spec.col_spec.k());
    let (nr, nc) = (spec.row_spec.n(), spec.col_spec.n());
    if msg.len() != kr * kc {
        return invalid(format!("message has {} bits, expected {}", msg.len(), kr * kc));
    }
    let rows: Vec<Vec<u8>> = msg
        .chunks(kr)
        .map(|m| systematic_encode(m, &spec.row_spec))
        .collect::<Result<_>>()?;
    let mut out = vec![0u8; nr * nc];
    for j in 0..nr {
        let col: Vec<u8> = rows.iter().map(|r| r[j]).collect();
        for (r, b) in systematic_encode(&col, &spec.col_spec)?.into_iter().enumerate() {
            out[r * nr + j] = b;
        }
    }
    Ok(out)
}

/// One-shot iterative decode of a row-major array of channel LLRs.
pub fn product_turbo_decode(llr_ch: &[f64], spec: &ProductCodeSpec, cfg: &TurboConfig) -> Result<TurboOutcome> {
    spec.decoder(cfg.clone())?.decode(llr_ch)
}
