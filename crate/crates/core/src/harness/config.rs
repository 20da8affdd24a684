use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bcjr::SyndromeTrellis;
use crate::code::{CodeSpec, CrcSpec, FrozenRule};
use crate::concatenated::{build_gldpc, GldpcSpec, ProductCodeSpec, TurboConfig};
use crate::error::{Error, Result};
use crate::evaluation::McdeConfig;

/// Information-set construction of the (component) code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeFamily {
    ReedMuller,
    FiveG,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrozenConfig {
    Static,
    /// Convolutional dynamic frozen bits with the default taps.
    Dynamic,
    Taps(Vec<usize>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrcKind {
    Crc6,
    Crc11,
}

impl CrcKind {
    pub fn spec(self) -> CrcSpec {
        match self {
            CrcKind::Crc6 => CrcSpec::crc6(),
            CrcKind::Crc11 => CrcSpec::crc11(),
        }
    }
}

/// A polar-like code; `k` counts the CRC bits when `crc` is set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeConfig {
    pub family: CodeFamily,
    pub n: usize,
    pub k: usize,
    #[serde(default = "frozen_static")]
    pub frozen: FrozenConfig,
    #[serde(default)]
    pub crc: Option<CrcKind>,
}

fn frozen_static() -> FrozenConfig {
    FrozenConfig::Static
}

impl CodeConfig {
    pub fn rm(n: usize, k: usize, frozen: FrozenConfig) -> Self {
        Self { family: CodeFamily::ReedMuller, n, k, frozen, crc: None }
    }

    pub fn build(&self) -> Result<CodeSpec> {
        let rule = match &self.frozen {
            FrozenConfig::Static => FrozenRule::StaticZero,
            FrozenConfig::Dynamic => FrozenRule::dynamic(),
            FrozenConfig::Taps(t) => FrozenRule::ConvolutionalTaps(t.clone()),
        };
        match self.family {
            CodeFamily::ReedMuller => CodeSpec::reed_muller(self.n, self.k, rule),
            CodeFamily::FiveG => CodeSpec::five_g(self.n, self.k, rule),
        }
    }

    /// Payload bits per block, excluding CRC parity.
    pub fn message_len(&self) -> usize {
        self.k - self.crc.map_or(0, |c| c.spec().width())
    }

    /// Short identifier used in CSV rows, e.g. `rm_64_42_dynamic`.
    pub fn label(&self) -> String {
        let family = match self.family {
            CodeFamily::ReedMuller => "rm",
            CodeFamily::FiveG => "5g",
        };
        let frozen = match &self.frozen {
            FrozenConfig::Static => "static".to_string(),
            FrozenConfig::Dynamic => "dynamic".to_string(),
            FrozenConfig::Taps(t) => {
                let t: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                format!("taps{}", t.join("-"))
            }
        };
        let mut s = format!("{family}_{}_{}_{frozen}", self.n, self.k);
        if let Some(c) = self.crc {
            s.push_str(match c {
                CrcKind::Crc6 => "_crc6",
                CrcKind::Crc11 => "_crc11",
            });
        }
        s
    }
}

/// Decoders for single-code experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderKind {
    /// Most likely list candidate.
    Scl,
    /// First list candidate passing the outer CRC; erasure otherwise.
    CrcScl,
    /// Soft-output SCL: bitwise APP, or blockwise threshold test with `epsilon`.
    SoScl,
    ListSum,
    ListMax,
    /// Exact bitwise APP from the syndrome trellis.
    Map,
    /// Threshold test on the list-normalized soft output of plain SCL.
    Forney,
}

impl DecoderKind {
    pub fn label(self) -> &'static str {
        match self {
            DecoderKind::Scl => "scl",
            DecoderKind::CrcScl => "crc_scl",
            DecoderKind::SoScl => "so_scl",
            DecoderKind::ListSum => "list_sum",
            DecoderKind::ListMax => "list_max",
            DecoderKind::Map => "map",
            DecoderKind::Forney => "forney",
        }
    }

    pub fn uses_list(self) -> bool {
        self != DecoderKind::Map
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoderConfig {
    pub kind: DecoderKind,
    #[serde(default = "default_list_size")]
    pub list_size: usize,
    /// Saturation of unanimous bits for list-sum and list-max. Unset means
    /// infinite, leaving saturation to post-processing.
    #[serde(default)]
    pub beta: Option<f64>,
}

fn default_list_size() -> usize {
    4
}

impl DecoderConfig {
    pub fn new(kind: DecoderKind, list_size: usize) -> Self {
        Self { kind, list_size, beta: None }
    }

    pub fn beta(&self) -> f64 {
        self.beta.unwrap_or(f64::INFINITY)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stopping {
    /// Stop a point once every decoder has this many block errors.
    #[serde(default = "default_min_errors")]
    pub min_block_errors: u64,
    #[serde(default)]
    pub min_trials: u64,
    #[serde(default = "default_max_trials")]
    pub max_trials: u64,
}

fn default_min_errors() -> u64 {
    100
}

fn default_max_trials() -> u64 {
    1_000_000
}

impl Default for Stopping {
    fn default() -> Self {
        Self {
            min_block_errors: default_min_errors(),
            min_trials: 0,
            max_trials: default_max_trials(),
        }
    }
}

impl Stopping {
    /// Exactly `n` trials regardless of errors.
    pub fn fixed(n: u64) -> Self {
        Self { min_block_errors: u64::MAX, min_trials: n, max_trials: n }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GldpcConfig {
    pub num_cn_pairs: usize,
    pub interleaver_seed: u64,
}

/// What the calibration experiment compares against the empirical rate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CalibrationTarget {
    /// `1 - Γ` of the output decision against the BLER.
    #[default]
    Decision,
    /// `1 - Γ` of the whole list against the list error rate.
    List,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// The code, or the component of a product or GLDPC code.
    pub code: CodeConfig,
    #[serde(default)]
    pub decoders: Vec<DecoderConfig>,
    /// Iterative decoders for `product` and `gldpc`.
    #[serde(default)]
    pub turbo: Vec<TurboConfig>,
    pub snr_db: Vec<f64>,
    #[serde(default)]
    pub stopping: Stopping,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Target misdetection level of the threshold tests.
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub gldpc: Option<GldpcConfig>,
    #[serde(default)]
    pub mcde: Option<McdeConfig>,
    #[serde(default)]
    pub calibration: CalibrationTarget,
    /// Trials between stopping-rule checks. Fixed so results do not depend
    /// on the worker count.
    #[serde(default = "default_batch")]
    pub batch_size: u64,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_seed() -> u64 {
    1
}

fn default_batch() -> u64 {
    1024
}

/// The experiment a configuration is run as; mirrors the CLI subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Bler,
    Calibrate,
    Gendec,
    Product,
    Gldpc,
    Gmi,
    Mcde,
    OracleCheck,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config is always serializable")
    }

    pub fn product_spec(&self) -> Result<ProductCodeSpec> {
        Ok(ProductCodeSpec::square(self.code.build()?))
    }

    pub fn gldpc_spec(&self) -> Result<GldpcSpec> {
        let g = self
            .gldpc
            .ok_or_else(|| Error::InvalidArgument("gldpc section missing".into()))?;
        build_gldpc(&self.code.build()?, g.num_cn_pairs, g.interleaver_seed)
    }

    /// Checks everything that can be checked before running and lists every
    /// offending field.
    pub fn validate(&self, kind: ExperimentKind) -> Result<()> {
        let mut bad = Vec::new();
        let spec = match self.code.build() {
            Ok(s) => Some(s),
            Err(e) => {
                bad.push(format!("code: {e}"));
                None
            }
        };
        if let (Some(s), Some(c)) = (&spec, self.code.crc) {
            if c.spec().width() >= s.k() {
                bad.push("code.crc: CRC leaves no payload bits".into());
            }
        }
        if self.snr_db.is_empty() {
            bad.push("snr_db: empty".into());
        }
        if self.snr_db.iter().any(|x| !x.is_finite()) {
            bad.push("snr_db: non-finite value".into());
        }
        let st = &self.stopping;
        if st.min_block_errors < 1 {
            bad.push("stopping.min_block_errors: must be at least 1".into());
        }
        if st.max_trials < 1 || st.min_trials > st.max_trials {
            bad.push("stopping: need 1 <= max_trials and min_trials <= max_trials".into());
        }
        if self.batch_size < 1 {
            bad.push("batch_size: must be positive".into());
        }
        if self.workers == Some(0) {
            bad.push("workers: must be positive".into());
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0 && e < 1.0) {
                bad.push("epsilon: must lie in (0, 1)".into());
            }
        }

        let single_code = matches!(
            kind,
            ExperimentKind::Bler | ExperimentKind::Calibrate | ExperimentKind::Gendec | ExperimentKind::Gmi
        );
        if single_code || kind == ExperimentKind::Mcde {
            if self.decoders.is_empty() {
                bad.push("decoders: empty".into());
            }
            for (i, d) in self.decoders.iter().enumerate() {
                if d.list_size < 1 {
                    bad.push(format!("decoders[{i}].list_size: must be positive"));
                }
                if d.beta.is_some_and(|b| !(b >= 0.0)) {
                    bad.push(format!("decoders[{i}].beta: must be non-negative"));
                }
                if d.kind == DecoderKind::CrcScl && self.code.crc.is_none() {
                    bad.push(format!("decoders[{i}]: crc_scl needs code.crc"));
                }
                if d.kind == DecoderKind::Map {
                    if let Some(s) = &spec {
                        if let Err(e) = SyndromeTrellis::from_spec(s) {
                            bad.push(format!("decoders[{i}]: map decoder unavailable: {e}"));
                        }
                    }
                }
            }
        }
        match kind {
            ExperimentKind::Bler | ExperimentKind::Gendec | ExperimentKind::Gmi => {
                let thresholded = |d: &DecoderConfig| {
                    d.kind == DecoderKind::Forney || (kind == ExperimentKind::Gendec && d.kind == DecoderKind::SoScl)
                };
                if self.epsilon.is_none() && self.decoders.iter().any(thresholded) {
                    bad.push("epsilon: required by threshold decoders".into());
                }
            }
            ExperimentKind::Calibrate => {
                for (i, d) in self.decoders.iter().enumerate() {
                    if !matches!(d.kind, DecoderKind::SoScl | DecoderKind::Forney) {
                        bad.push(format!("decoders[{i}]: calibration needs so_scl or forney"));
                    }
                }
            }
            ExperimentKind::Product | ExperimentKind::Gldpc => {
                if self.turbo.is_empty() {
                    bad.push("turbo: empty".into());
                }
                for (i, t) in self.turbo.iter().enumerate() {
                    if let Err(Error::Validation(v)) = t.validate() {
                        bad.extend(v.into_iter().map(|m| format!("turbo[{i}].{m}")));
                    }
                }
                if kind == ExperimentKind::Gldpc {
                    match self.gldpc {
                        None => bad.push("gldpc: section required".into()),
                        Some(g) if g.num_cn_pairs == 0 => bad.push("gldpc.num_cn_pairs: must be positive".into()),
                        _ => {}
                    }
                }
            }
            ExperimentKind::Mcde => {
                let m = self.mcde.clone().unwrap_or_default();
                if m.population < 1000 {
                    bad.push("mcde.population: must be at least 1000".into());
                }
                if !(m.hi_db > m.lo_db) || !(m.resolution_db > 0.0) {
                    bad.push("mcde: need lo_db < hi_db and positive resolution_db".into());
                }
                if spec.as_ref().is_some_and(|s| 2 * s.k() <= s.n()) {
                    bad.push("code: component rate must exceed 1/2".into());
                }
                for (i, d) in self.decoders.iter().enumerate() {
                    if !matches!(
                        d.kind,
                        DecoderKind::SoScl | DecoderKind::ListSum | DecoderKind::ListMax | DecoderKind::Map
                    ) {
                        bad.push(format!("decoders[{i}]: not a soft-output decoder"));
                    }
                }
            }
            ExperimentKind::OracleCheck => {
                if spec.as_ref().is_some_and(|s| s.k() > crate::bcjr::MAX_BRUTE_FORCE_K) {
                    bad.push("code.k: too large for brute-force enumeration".into());
                }
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(bad))
        }
    }

    /// Full-scale default for every experiment kind.
    pub fn preset(kind: ExperimentKind) -> Self {
        use DecoderKind::*;
        let rm32 = CodeConfig::rm(32, 26, FrozenConfig::Static);
        let base = |code: CodeConfig, decoders: Vec<DecoderConfig>, snr: Vec<f64>| ExperimentConfig {
            code,
            decoders,
            turbo: Vec::new(),
            snr_db: snr,
            stopping: Stopping::default(),
            seed: default_seed(),
            epsilon: None,
            gldpc: None,
            mcde: None,
            calibration: CalibrationTarget::Decision,
            batch_size: default_batch(),
            workers: None,
            out: None,
        };
        let half_db = |lo: i32, hi: i32| (lo..=hi).map(|x| x as f64 * 0.5).collect::<Vec<_>>();
        match kind {
            ExperimentKind::Bler => base(
                rm32,
                [SoScl, ListSum, ListMax, Scl, Map].map(|k| DecoderConfig::new(k, 4)).to_vec(),
                (0..=5).map(f64::from).collect(),
            ),
            ExperimentKind::Gmi => ExperimentConfig {
                stopping: Stopping::fixed(100_000),
                ..base(
                    rm32,
                    [SoScl, ListSum, ListMax, Map].map(|k| DecoderConfig::new(k, 4)).to_vec(),
                    (0..=3).map(f64::from).collect(),
                )
            },
            ExperimentKind::Calibrate => ExperimentConfig {
                stopping: Stopping::fixed(1_000_000),
                ..base(
                    CodeConfig::rm(128, 64, FrozenConfig::Dynamic),
                    vec![DecoderConfig::new(SoScl, 4), DecoderConfig::new(Forney, 4)],
                    vec![2.0],
                )
            },
            ExperimentKind::Gendec => {
                let mut c = base(
                    CodeConfig::rm(64, 42, FrozenConfig::Dynamic),
                    vec![DecoderConfig::new(SoScl, 4)],
                    half_db(2, 8),
                );
                c.epsilon = Some(0.1);
                c
            }
            ExperimentKind::Product => {
                let mut c = base(rm32, Vec::new(), vec![2.0, 2.25, 2.5]);
                let mut lm = TurboConfig::list_max(4);
                lm.early_stop = true;
                c.turbo = vec![TurboConfig::so_scl(4, 0.5), lm];
                c.batch_size = 64;
                c
            }
            ExperimentKind::Gldpc => {
                let mut c = base(rm32, Vec::new(), vec![2.0, 2.25, 2.5, 2.75]);
                let mut lm = TurboConfig::list_max(4);
                lm.early_stop = true;
                c.turbo = vec![TurboConfig::so_scl(4, 0.6), lm];
                c.gldpc = Some(GldpcConfig { num_cn_pairs: 32, interleaver_seed: 1 });
                c.batch_size = 64;
                c
            }
            ExperimentKind::Mcde => {
                let mut c = base(
                    rm32,
                    [Map, SoScl, ListSum, ListMax].map(|k| DecoderConfig::new(k, 4)).to_vec(),
                    vec![0.0],
                );
                c.mcde = Some(McdeConfig::default());
                c
            }
            ExperimentKind::OracleCheck => ExperimentConfig {
                stopping: Stopping::fixed(1000),
                ..base(CodeConfig::rm(16, 8, FrozenConfig::Dynamic), Vec::new(), vec![0.0, 2.0, 4.0])
            },
        }
    }
}
