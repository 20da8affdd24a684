use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gmi::{optimize_pp, PpSample};
use crate::channel::{channel_llrs, derive_sigma, trial_rng, LlrFrame};
use crate::code::CodeSpec;
use crate::concatenated::{ComponentSiso, SisoKind};
use crate::error::{invalid, Result};

/// Knobs of the Monte-Carlo density evolution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McdeConfig {
    /// Check nodes per layer of the simulated graph.
    pub population: usize,
    pub max_iterations: usize,
    /// Give up once 1-GMI has not improved for this many iterations.
    pub stall_window: usize,
    pub lo_db: f64,
    pub hi_db: f64,
    pub resolution_db: f64,
    pub seed: u64,
}

impl Default for McdeConfig {
    fn default() -> Self {
        Self {
            population: 10_000,
            max_iterations: 100,
            stall_window: 10,
            lo_db: 0.5,
            hi_db: 4.0,
            resolution_db: 0.01,
            seed: 1,
        }
    }
}

/// One simulated operating point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McdePoint {
    pub ebn0_db: f64,
    pub converged: bool,
    pub iterations: usize,
    pub final_gmi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McdeResult {
    /// Smallest converging grid point, `None` if even `hi_db` fails.
    pub threshold_db: Option<f64>,
    /// Every evaluated point, in evaluation order.
    pub points: Vec<McdePoint>,
    /// No converging point lies below a failing one.
    pub monotone: bool,
}

/// Ensemble rate `(2K - N) / N` of the degree-2 GLDPC ensemble.
pub fn ensemble_rate(component: &CodeSpec) -> f64 {
    (2.0 * component.k() as f64 - component.n() as f64) / component.n() as f64
}

/// Decodes a long degree-2 GLDPC graph at one `E_b/N_0` under the all-zero
/// codeword and reports whether every post-processed message turns positive.
///
/// The graph has `population` check nodes per layer. Layer 0 covers the
/// variable nodes in contiguous blocks of `N`; layer 1 covers them in blocks
/// of a seeded random interleaving. Each half-iteration decodes one layer
/// with the other layer's messages as a-priori input, fits the
/// post-processing to that layer's extrinsic output and passes the result on.
pub fn mcde_point(component: &CodeSpec, siso: SisoKind, cfg: &McdeConfig, ebn0_db: f64) -> Result<McdePoint> {
    let rate = ensemble_rate(component);
    if rate <= 0.0 {
        return invalid("component rate must exceed 1/2 for a positive ensemble rate");
    }
    let n = component.n();
    let size = cfg.population * n;
    let sigma = derive_sigma(ebn0_db, rate)?;
    let mut rng = trial_rng(cfg.seed, 0);
    let ch = channel_llrs(&vec![0u8; size], sigma, &mut rng);
    let mut interleaver: Vec<usize> = (0..size).collect();
    interleaver.shuffle(&mut rng);
    let identity: Vec<usize> = (0..size).collect();
    let positions = [&identity, &interleaver];
    // messages arriving at each layer, indexed by variable node
    let mut apriori = [vec![0.0; size], vec![0.0; size]];
    let mut samples = vec![PpSample { bit: 0, llr_ch: 0.0, llr_ext: 0.0 }; size];
    let proto = ComponentSiso::new(component, siso)?;
    let mut best_gmi = f64::NEG_INFINITY;
    let mut since_best = 0;
    let mut last_gmi = f64::NEG_INFINITY;

    for it in 1..=cfg.max_iterations {
        for layer in 0..2 {
            let pos = positions[layer];
            let a = &apriori[layer];
            // blocks are independent and RNG-free, so the split across
            // threads cannot change the result
            pos.par_chunks(n).zip(samples.par_chunks_mut(n)).try_for_each_init(
                || (proto.clone(), LlrFrame::from_channel(vec![0.0; n])),
                |(dec, frame), (idx, out)| -> Result<()> {
                    for (t, &v) in idx.iter().enumerate() {
                        frame.llr_ch[t] = ch[v];
                        frame.llr_a[t] = a[v];
                    }
                    // list baselines leave unanimous bits unsaturated; γ takes over
                    let ext = dec.decode(frame, f64::INFINITY)?.llr_ext;
                    for ((s, &c), e) in out.iter_mut().zip(&frame.llr_ch).zip(ext) {
                        *s = PpSample { bit: 0, llr_ch: c, llr_ext: e };
                    }
                    Ok(())
                },
            )?;
            let (pp, gmi) = optimize_pp(&samples)?;
            let next = &mut apriori[1 - layer];
            let mut min_msg = f64::INFINITY;
            for (&v, s) in pos.iter().zip(&samples) {
                next[v] = pp.apply(s.llr_ext);
                min_msg = min_msg.min(next[v]);
            }
            last_gmi = gmi;
            if min_msg > 0.0 {
                return Ok(McdePoint { ebn0_db, converged: true, iterations: it, final_gmi: gmi });
            }
        }
        if last_gmi > best_gmi + 1e-7 {
            best_gmi = last_gmi;
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= cfg.stall_window {
                return Ok(McdePoint { ebn0_db, converged: false, iterations: it, final_gmi: last_gmi });
            }
        }
    }
    Ok(McdePoint { ebn0_db, converged: false, iterations: cfg.max_iterations, final_gmi: last_gmi })
}

/// Bisection over the `resolution_db` grid between `lo_db` and `hi_db`.
pub fn mcde_threshold(component: &CodeSpec, siso: SisoKind, cfg: &McdeConfig) -> Result<McdeResult> {
    if cfg.population < 1 || cfg.max_iterations < 1 {
        return invalid("population and iteration cap must be positive");
    }
    if !(cfg.resolution_db > 0.0) || !(cfg.hi_db > cfg.lo_db) {
        return invalid("need lo_db < hi_db and a positive resolution");
    }
    let steps = ((cfg.hi_db - cfg.lo_db) / cfg.resolution_db).round() as i64;
    let at = |i: i64| cfg.lo_db + i as f64 * cfg.resolution_db;
    let mut points = Vec::new();
    let eval = |i: i64, points: &mut Vec<McdePoint>| -> Result<bool> {
        let p = mcde_point(component, siso, cfg, at(i))?;
        let ok = p.converged;
        points.push(p);
        Ok(ok)
    };

    let threshold = if !eval(steps, &mut points)? {
        None
    } else if eval(0, &mut points)? {
        Some(at(0))
    } else {
        let (mut lo, mut hi) = (0i64, steps);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if eval(mid, &mut points)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(at(hi))
    };
    let monotone = points.iter().all(|p| {
        !p.converged || points.iter().all(|q| q.converged || q.ebn0_db < p.ebn0_db)
    });
    Ok(McdeResult {
        threshold_db: threshold.map(|t| (t * 100.0).round() / 100.0),
        points,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::FrozenRule;

    #[test]
    fn small_population_brackets() {
        let comp = CodeSpec::reed_muller(8, 7, FrozenRule::StaticZero).unwrap();
        let cfg = McdeConfig {
            population: 200,
            max_iterations: 30,
            lo_db: 0.0,
            hi_db: 8.0,
            resolution_db: 0.5,
            ..Default::default()
        };
        let r = mcde_threshold(&comp, SisoKind::Bcjr, &cfg).unwrap();
        let t = r.threshold_db.unwrap();
        assert!(t > 0.0 && t < 8.0, "{t}");
        assert!(r.monotone);
    }

    #[test]
    fn low_rate_components_rejected() {
        let comp = CodeSpec::reed_muller(8, 4, FrozenRule::StaticZero).unwrap();
        assert!(mcde_point(&comp, SisoKind::Bcjr, &McdeConfig::default(), 1.0).is_err());
    }
}
