use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::logmath::softplus;

/// Scaling of finite and saturation of infinite extrinsic LLRs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PostProcess {
    pub delta: f64,
    pub gamma: f64,
}

impl PostProcess {
    pub const IDENTITY_SCALE: PostProcess = PostProcess {
        delta: 1.0,
        gamma: GAMMA_MAX,
    };

    #[inline]
    pub fn apply(&self, l: f64) -> f64 {
        if l.is_infinite() {
            self.gamma * l.signum()
        } else {
            self.delta * l
        }
    }
}

const GAMMA_MAX: f64 = 30.0;

/// Scale grid `0.02, 0.04, …, 2.00`.
pub fn delta_grid() -> impl Iterator<Item = f64> {
    (1..=100).map(|i| i as f64 * 0.02)
}

/// Saturation grid `0, 0.5, …, 30`.
pub fn gamma_grid() -> impl Iterator<Item = f64> {
    (0..=60).map(|i| i as f64 * 0.5)
}

/// `log2(1 + e^{-(1-2c)ℓ})`: the per-sample GMI penalty in bits.
#[inline]
fn penalty(bit: u8, l: f64) -> f64 {
    let s = if bit & 1 == 0 { l } else { -l };
    softplus(-s) / LN_2
}

/// `1 - mean log2(1 + e^{-(1-2c)ℓ})`.
pub fn gmi_1(bits: &[u8], llrs: &[f64]) -> Result<f64> {
    if bits.is_empty() {
        return invalid("GMI needs at least one sample");
    }
    if bits.len() != llrs.len() {
        return invalid("bit and LLR counts differ");
    }
    let total: f64 = bits.iter().zip(llrs).map(|(&b, &l)| penalty(b, l)).sum();
    Ok(1.0 - total / bits.len() as f64)
}

/// One observation for post-processing: transmitted bit, channel LLR and
/// extrinsic LLR.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PpSample {
    pub bit: u8,
    pub llr_ch: f64,
    pub llr_ext: f64,
}

/// 1-GMI of `llr_ch + f_pp(llr_ext)` over the samples.
pub fn gmi_post_processed(samples: &[PpSample], pp: PostProcess) -> Result<f64> {
    if samples.is_empty() {
        return invalid("GMI needs at least one sample");
    }
    let total: f64 = samples
        .iter()
        .map(|s| penalty(s.bit, s.llr_ch + pp.apply(s.llr_ext)))
        .sum();
    Ok(1.0 - total / samples.len() as f64)
}

/// Grid search for the post-processing that maximizes 1-GMI.
///
/// Finite extrinsic values only see `δ` and infinite ones only see `γ`, so
/// the two grids are searched independently. The summed penalty is convex
/// in either parameter, so each scan stops at the first strict increase.
/// Ties keep the smallest value.
pub fn optimize_pp(samples: &[PpSample]) -> Result<(PostProcess, f64)> {
    if samples.is_empty() {
        return invalid("post-processing needs at least one sample");
    }
    let (inf, fin): (Vec<&PpSample>, Vec<&PpSample>) =
        samples.iter().partition(|s| s.llr_ext.is_infinite());
    let best = |grid: &mut dyn Iterator<Item = f64>, part: &[&PpSample], f: &dyn Fn(f64, &PpSample) -> f64| {
        let mut arg = f64::NAN;
        let mut low = f64::INFINITY;
        for x in grid {
            let cost: f64 = part.iter().map(|s| f(x, s)).sum();
            if cost < low {
                low = cost;
                arg = x;
            } else if cost > low {
                break;
            }
        }
        (arg, low)
    };
    let (delta, cost_fin) = best(&mut delta_grid(), &fin, &|d, s| {
        penalty(s.bit, s.llr_ch + d * s.llr_ext)
    });
    let (gamma, cost_inf) = best(&mut gamma_grid(), &inf, &|g, s| {
        penalty(s.bit, s.llr_ch + g * s.llr_ext.signum())
    });
    let gmi = 1.0 - (cost_fin + cost_inf) / samples.len() as f64;
    Ok((PostProcess { delta, gamma }, gmi))
}

/// Streaming form of [`optimize_pp`]: keeps the summed penalty at every grid
/// point, so arbitrarily many samples fit in constant memory. Merging is
/// plain addition and the maximizer matches the batch search.
#[derive(Clone, Debug, PartialEq)]
pub struct PpAccumulator {
    delta_cost: Vec<f64>,
    gamma_cost: Vec<f64>,
    count: u64,
}

impl Default for PpAccumulator {
    fn default() -> Self {
        Self {
            delta_cost: vec![0.0; delta_grid().count()],
            gamma_cost: vec![0.0; gamma_grid().count()],
            count: 0,
        }
    }
}

impl PpAccumulator {
    pub fn push(&mut self, s: &PpSample) {
        self.count += 1;
        if s.llr_ext.is_infinite() {
            let sign = s.llr_ext.signum();
            for (c, g) in self.gamma_cost.iter_mut().zip(gamma_grid()) {
                *c += penalty(s.bit, s.llr_ch + g * sign);
            }
        } else {
            for (c, d) in self.delta_cost.iter_mut().zip(delta_grid()) {
                *c += penalty(s.bit, s.llr_ch + d * s.llr_ext);
            }
        }
    }

    pub fn merge(&mut self, other: &PpAccumulator) {
        self.count += other.count;
        for (a, b) in self.delta_cost.iter_mut().zip(&other.delta_cost) {
            *a += b;
        }
        for (a, b) in self.gamma_cost.iter_mut().zip(&other.gamma_cost) {
            *a += b;
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Maximizing post-processing and its 1-GMI.
    pub fn best(&self) -> Result<(PostProcess, f64)> {
        if self.count == 0 {
            return invalid("post-processing needs at least one sample");
        }
        let argmin = |costs: &[f64], grid: &mut dyn Iterator<Item = f64>| {
            let mut out = (f64::NAN, f64::INFINITY);
            for (&c, x) in costs.iter().zip(grid) {
                if c < out.1 {
                    out = (x, c);
                }
            }
            out
        };
        let (delta, cd) = argmin(&self.delta_cost, &mut delta_grid());
        let (gamma, cg) = argmin(&self.gamma_cost, &mut gamma_grid());
        Ok((PostProcess { delta, gamma }, 1.0 - (cd + cg) / self.count as f64))
    }
}
