//! Two-layer concatenations of polar-like component codes (product and
//! degree-2 GLDPC codes) and their iterative soft-in soft-out decoder.
//!
//! Both codes are described by a [`GroupGraph`]: every position belongs to
//! exactly one component codeword ("group") in each of the two layers, and
//! a turbo iteration is one pass over layer 0 followed by one over layer 1.

mod gldpc;
mod product;
mod siso;

use serde::{Deserialize, Serialize};

pub use gldpc::{build_gldpc, gldpc_encode, gldpc_turbo_decode, GldpcSpec};
pub use product::{product_encode, product_turbo_decode, ProductCodeSpec};
pub use siso::{ComponentSiso, SisoKind, SisoOutput};

use crate::bcjr::{parity_check_matrix, ParityCheckMatrix};
use crate::channel::LlrFrame;
use crate::code::CodeSpec;
use crate::error::{invalid, Error, Result};

/// Pyndiah's weighting schedule, indexed per half-iteration.
pub const PYNDIAH_ALPHA: [f64; 7] = [0.0, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0];
/// Pyndiah's saturation schedule, indexed per half-iteration.
pub const PYNDIAH_BETA: [f64; 5] = [0.2, 0.4, 0.6, 0.8, 1.0];

/// How extrinsic LLRs become the a-priori input of the other layer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weighting {
    /// Constant factor on every half-iteration.
    Scale { factor: f64 },
    /// Per-half-iteration factors; the last entry repeats.
    Schedule { factors: Vec<f64> },
    /// `α` weights the extrinsic LLRs and `β` saturates unanimous bits.
    /// With `beta_relative`, `β` is in units of the frame's mean `|llr_ch|`;
    /// with `normalize`, each pass's extrinsic LLRs are rescaled to that
    /// mean magnitude before weighting.
    Pyndiah {
        alpha: Vec<f64>,
        beta: Vec<f64>,
        beta_relative: bool,
        #[serde(default)]
        normalize: bool,
    },
}

impl Weighting {
    pub fn pyndiah() -> Self {
        Weighting::Pyndiah {
            alpha: PYNDIAH_ALPHA.to_vec(),
            beta: PYNDIAH_BETA.to_vec(),
            beta_relative: true,
            normalize: true,
        }
    }

    fn at(v: &[f64], h: usize) -> f64 {
        v[h.min(v.len() - 1)]
    }

    fn factor(&self, h: usize) -> f64 {
        match self {
            Weighting::Scale { factor } => *factor,
            Weighting::Schedule { factors } => Self::at(factors, h),
            Weighting::Pyndiah { alpha, .. } => Self::at(alpha, h),
        }
    }
}

/// Iterative decoding parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TurboConfig {
    pub siso: SisoKind,
    pub max_iterations: usize,
    pub weighting: Weighting,
    /// Saturation of the list baselines outside the Pyndiah schedule.
    pub saturation: f64,
    pub early_stop: bool,
}

impl TurboConfig {
    /// SO-SCL component with a constant extrinsic scale.
    pub fn so_scl(list_size: usize, scale: f64) -> Self {
        Self {
            siso: SisoKind::SoScl { list_size },
            max_iterations: 20,
            weighting: Weighting::Scale { factor: scale },
            saturation: crate::soft_output::DEFAULT_BETA,
            early_stop: true,
        }
    }

    /// List-max component with Pyndiah's schedules.
    pub fn list_max(list_size: usize) -> Self {
        Self {
            siso: SisoKind::ListMax { list_size },
            max_iterations: 20,
            weighting: Weighting::pyndiah(),
            saturation: crate::soft_output::DEFAULT_BETA,
            early_stop: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if self.max_iterations == 0 {
            errs.push("max_iterations must be at least 1".to_string());
        }
        if self.siso.list_size() == Some(0) {
            errs.push("list size must be at least 1".to_string());
        }
        let bad = |v: &[f64]| v.is_empty() || v.iter().any(|x| !(*x >= 0.0));
        match &self.weighting {
            Weighting::Scale { factor } if !(*factor >= 0.0) => {
                errs.push("scale must be non-negative".to_string())
            }
            Weighting::Schedule { factors } if bad(factors) => {
                errs.push("schedule must be non-empty and non-negative".to_string())
            }
            Weighting::Pyndiah { alpha, beta, .. } if bad(alpha) || bad(beta) => {
                errs.push("alpha and beta schedules must be non-empty and non-negative".to_string())
            }
            _ => {}
        }
        if !(self.saturation >= 0.0) {
            errs.push("saturation must be non-negative".to_string());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errs))
        }
    }
}

/// Two layers of groups; each group is an ordered list of positions that
/// forms one component codeword.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupGraph {
    len: usize,
    layers: [Vec<Vec<usize>>; 2],
}

impl GroupGraph {
    pub fn new(len: usize, layers: [Vec<Vec<usize>>; 2]) -> Result<Self> {
        for layer in &layers {
            let mut seen = vec![false; len];
            for &p in layer.iter().flatten() {
                if p >= len || seen[p] {
                    return invalid("each layer must cover every position exactly once");
                }
                seen[p] = true;
            }
            if seen.iter().any(|s| !s) {
                return invalid("each layer must cover every position exactly once");
            }
        }
        Ok(Self { len, layers })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn layer(&self, l: usize) -> &[Vec<usize>] {
        &self.layers[l]
    }

    /// True iff every group of layer `l` is a codeword of `checks[l]`.
    pub fn satisfied(&self, bits: &[u8], checks: [&ParityCheckMatrix; 2]) -> bool {
        let mut buf = Vec::new();
        self.layers.iter().zip(checks).all(|(layer, h)| {
            layer.iter().all(|g| {
                buf.clear();
                buf.extend(g.iter().map(|&p| bits[p]));
                h.is_codeword(&buf)
            })
        })
    }
}

/// Result of one iterative decode.
#[derive(Clone, Debug, PartialEq)]
pub struct TurboOutcome {
    pub decisions: Vec<u8>,
    pub half_iterations: usize,
    /// Early stop fired: every component check holds.
    pub converged: bool,
    /// Hard decisions after each full iteration (when tracing).
    pub per_iteration: Option<Vec<Vec<u8>>>,
}

/// Reusable iterative decoder for one graph, component code and config.
#[derive(Clone, Debug)]
pub struct TurboDecoder {
    graph: GroupGraph,
    cfg: TurboConfig,
    siso: [ComponentSiso; 2],
    checks: [ParityCheckMatrix; 2],
    trace: bool,
}

#[inline]
fn weigh(w: f64, x: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        w * x
    }
}

impl TurboDecoder {
    /// `components[l]` is the component code of every group in layer `l`.
    pub fn new(graph: GroupGraph, components: [&CodeSpec; 2], cfg: TurboConfig) -> Result<Self> {
        cfg.validate()?;
        for (layer, spec) in graph.layers.iter().zip(components) {
            if layer.iter().any(|g| g.len() != spec.n()) {
                return invalid("every group must hold one component codeword");
            }
        }
        Ok(Self {
            siso: [
                ComponentSiso::new(components[0], cfg.siso)?,
                ComponentSiso::new(components[1], cfg.siso)?,
            ],
            checks: components.map(parity_check_matrix),
            graph,
            cfg,
            trace: false,
        })
    }

    /// Records the hard decisions after every full iteration.
    pub fn with_trace(mut self, on: bool) -> Self {
        self.trace = on;
        self
    }

    pub fn graph(&self) -> &GroupGraph {
        &self.graph
    }

    pub fn config(&self) -> &TurboConfig {
        &self.cfg
    }

    fn saturation(&self, h: usize, mean_abs_ch: f64) -> f64 {
        match &self.cfg.weighting {
            Weighting::Pyndiah {
                beta,
                beta_relative,
                ..
            } => {
                let b = Weighting::at(beta, h);
                if *beta_relative {
                    b * mean_abs_ch
                } else {
                    b
                }
            }
            _ => self.cfg.saturation,
        }
    }

    pub fn decode(&mut self, llr_ch: &[f64]) -> Result<TurboOutcome> {
        let len = self.graph.len;
        if llr_ch.len() != len {
            return invalid(format!("expected {len} channel LLRs, got {}", llr_ch.len()));
        }
        let mean_abs_ch = llr_ch.iter().map(|x| x.abs()).filter(|x| x.is_finite()).sum::<f64>() / len as f64;
        let mut ext = [vec![0.0; len], vec![0.0; len]];
        let mut app = vec![0.0; len];
        let mut decisions = vec![0u8; len];
        let mut per_iteration = self.trace.then(Vec::new);
        let total = 2 * self.cfg.max_iterations;
        let mut half = 0;
        let mut converged = false;

        while half < total {
            let layer = half % 2;
            let w = self.cfg.weighting.factor(half);
            let beta = self.saturation(half, mean_abs_ch);
            let (lo, hi) = ext.split_at_mut(1);
            let (mine, other) = if layer == 0 { (&mut lo[0], &hi[0]) } else { (&mut hi[0], &lo[0]) };
            let siso = &mut self.siso[layer];
            for g in &self.graph.layers[layer] {
                let mut frame = LlrFrame::from_channel(vec![0.0; g.len()]);
                for (t, &p) in g.iter().enumerate() {
                    frame.llr_ch[t] = llr_ch[p];
                    frame.llr_a[t] = weigh(w, other[p]);
                }
                let out = siso.decode(&frame, beta)?;
                for (t, &p) in g.iter().enumerate() {
                    mine[p] = out.llr_ext[t];
                    app[p] = out.llr_app[t];
                }
            }
            if let Weighting::Pyndiah { normalize: true, .. } = self.cfg.weighting {
                let finite = mine.iter().filter(|x| x.is_finite());
                let (sum, count) = finite.fold((0.0, 0usize), |(s, c), x| (s + x.abs(), c + 1));
                if sum > 0.0 {
                    let k = mean_abs_ch * count as f64 / sum;
                    mine.iter_mut().for_each(|x| *x *= k);
                }
            }
            for (d, a) in decisions.iter_mut().zip(&app) {
                *d = u8::from(*a < 0.0);
            }
            half += 1;
            if self.cfg.early_stop && self.graph.satisfied(&decisions, [&self.checks[0], &self.checks[1]]) {
                converged = true;
            }
            if let Some(trace) = per_iteration.as_mut() {
                if half % 2 == 0 || converged {
                    trace.push(decisions.clone());
                }
            }
            if converged {
                break;
            }
        }
        if let Some(trace) = per_iteration.as_mut() {
            while trace.len() < self.cfg.max_iterations {
                trace.push(decisions.clone());
            }
        }
        Ok(TurboOutcome {
            decisions,
            half_iterations: half,
            converged,
            per_iteration,
        })
    }
}
