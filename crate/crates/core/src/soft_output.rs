//! Blockwise and bitwise soft output derived from a decoded list.

use crate::channel::LlrFrame;
use crate::error::{invalid, Result};
use crate::logmath::{log_sigmoid, log_sum_exp};
use crate::scl::DecodeResult;

/// Saturation used by the list baselines when none is given.
pub const DEFAULT_BETA: f64 = 1.5;

/// Γ* of one candidate: `Q(candidate) / Q*`.
pub fn blockwise_gamma(result: &DecodeResult, index: usize) -> f64 {
    (result.candidates[index].log_q - result.log_q_star).exp().min(1.0)
}

/// Γ* of the whole list: `Σ_list Q / Q*`.
pub fn blockwise_gamma_list(result: &DecodeResult) -> f64 {
    (result.log_list_mass() - result.log_q_star).exp().min(1.0)
}

/// Forney's estimate: best candidate mass over list mass only.
pub fn forney_gamma(result: &DecodeResult) -> f64 {
    (result.best().log_q - result.log_list_mass()).exp().min(1.0)
}

/// Accepts iff `gamma > 1 - epsilon`.
pub fn threshold_accept(gamma: f64, epsilon: f64) -> bool {
    gamma > 1.0 - epsilon
}

/// Candidate codewords with their log-probabilities.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CodewordList {
    pub codewords: Vec<Vec<u8>>,
    pub log_q: Vec<f64>,
}

impl CodewordList {
    pub fn new(codewords: Vec<Vec<u8>>, log_q: Vec<f64>) -> Result<Self> {
        if codewords.len() != log_q.len() {
            return invalid("codeword and metric counts differ");
        }
        if let Some(n) = codewords.first().map(Vec::len) {
            if codewords.iter().any(|c| c.len() != n) {
                return invalid("codewords differ in length");
            }
        }
        Ok(Self { codewords, log_q })
    }

    pub fn from_result(result: &DecodeResult) -> Self {
        Self {
            codewords: result.codewords(),
            log_q: result.candidates.iter().map(|c| c.log_q).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    /// Per bit value, the metrics of candidates carrying it at position `i`.
    fn split(&self, i: usize) -> [Vec<f64>; 2] {
        let mut sides = [Vec::new(), Vec::new()];
        for (c, &q) in self.codewords.iter().zip(&self.log_q) {
            sides[usize::from(c[i] & 1)].push(q);
        }
        sides
    }
}

fn check_len(list: &CodewordList, frame: &LlrFrame) -> Result<()> {
    if list.is_empty() {
        return invalid("candidate list is empty");
    }
    if list.codewords[0].len() != frame.len() {
        return invalid(format!(
            "codeword length {} does not match frame length {}",
            list.codewords[0].len(),
            frame.len()
        ));
    }
    Ok(())
}

fn finite_or_zero(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x
    }
}

fn list_app(list: &CodewordList, frame: &LlrFrame, beta: f64, combine: fn(&[f64]) -> f64) -> Result<Vec<f64>> {
    check_len(list, frame)?;
    Ok((0..frame.len())
        .map(|i| {
            let [zero, one] = list.split(i);
            match (zero.is_empty(), one.is_empty()) {
                (false, false) => finite_or_zero(combine(&zero) - combine(&one)),
                (false, true) => finite_or_zero(frame.total(i) + beta),
                _ => finite_or_zero(frame.total(i) - beta),
            }
        })
        .collect())
}

fn lse(v: &[f64]) -> f64 {
    log_sum_exp(v.iter().copied())
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// List-sum APP: candidate masses split by bit value; unanimous bits get
/// the decoder input pushed by `beta` towards the list's value.
pub fn bitwise_app_listsum(list: &CodewordList, frame: &LlrFrame, beta: f64) -> Result<Vec<f64>> {
    list_app(list, frame, beta, lse)
}

/// List-max APP: as [`bitwise_app_listsum`] with max in place of sum.
pub fn bitwise_app_listmax(list: &CodewordList, frame: &LlrFrame, beta: f64) -> Result<Vec<f64>> {
    list_app(list, frame, beta, max)
}

/// SO-SCL APP: list masses per bit value plus the unvisited mass φ spread
/// according to the bit's own posterior `σ(±λ_i)`.
pub fn bitwise_app_soscl(result: &DecodeResult, frame: &LlrFrame) -> Result<Vec<f64>> {
    let list = CodewordList::from_result(result);
    check_len(&list, frame)?;
    // the accumulator holds φ itself, so no subtraction of nearly equal masses
    let log_phi = result.log_unvisited;
    Ok((0..frame.len())
        .map(|i| {
            let lam = frame.total(i);
            let [mut zero, mut one] = list.split(i);
            zero.push(log_phi + log_sigmoid(lam));
            one.push(log_phi + log_sigmoid(-lam));
            finite_or_zero(lse(&zero) - lse(&one))
        })
        .collect())
}

/// `ℓ_E = ℓ_APP - ℓ_A - ℓ_ch`; infinite APP values pass through.
pub fn extrinsic(llr_app: &[f64], frame: &LlrFrame) -> Vec<f64> {
    llr_app
        .iter()
        .enumerate()
        .map(|(i, &app)| {
            if app.is_infinite() {
                app
            } else {
                finite_or_zero(app - frame.llr_a[i] - frame.llr_ch[i])
            }
        })
        .collect()
}

/// Blockwise and bitwise soft output of one decoded block.
#[derive(Clone, Debug, PartialEq)]
pub struct SoftDecision {
    pub chosen: usize,
    pub gamma_block: f64,
    pub gamma_list: f64,
    pub llr_app: Vec<f64>,
    pub llr_ext: Vec<f64>,
    pub accepted: bool,
}

/// SO-SCL soft output of the most likely candidate, with threshold `epsilon`.
pub fn soft_decision(result: &DecodeResult, frame: &LlrFrame, epsilon: f64) -> Result<SoftDecision> {
    if !(0.0..=1.0).contains(&epsilon) {
        return invalid(format!("epsilon {epsilon} outside [0, 1]"));
    }
    let llr_app = bitwise_app_soscl(result, frame)?;
    let llr_ext = extrinsic(&llr_app, frame);
    let gamma_block = blockwise_gamma(result, 0);
    Ok(SoftDecision {
        chosen: 0,
        gamma_block,
        gamma_list: blockwise_gamma_list(result),
        llr_app,
        llr_ext,
        accepted: threshold_accept(gamma_block, epsilon),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bcjr::{bcjr_app, brute_force_reference, SyndromeTrellis};
    use crate::channel::{transmit, trial_rng, ChannelParams};
    use crate::code::{encode, CodeSpec, FrozenRule};
    use crate::scl::{Candidate, SclDecoder};

    fn result_of(log_qs: &[f64], us: &[Vec<u8>], log_q_star: f64, log_unvisited: f64) -> DecodeResult {
        DecodeResult {
            candidates: us
                .iter()
                .zip(log_qs)
                .map(|(u, &log_q)| Candidate { u: u.clone(), log_q })
                .collect(),
            log_q_star,
            log_unvisited,
            list_size_used: us.len(),
        }
    }

    #[test]
    fn threshold_is_strict() {
        assert!(threshold_accept(0.95, 0.1));
        assert!(!threshold_accept(0.9, 0.1));
        assert!(!threshold_accept(0.5, 0.0));
    }

    #[test]
    fn forney_examples() {
        let r = result_of(&[-0.7, -0.7], &[vec![0, 0], vec![1, 1]], -0.1, -1.0);
        assert!((forney_gamma(&r) - 0.5).abs() < 1e-15);
        let single = result_of(&[-2.0], &[vec![0, 0]], -1.0, -1.5);
        assert_eq!(forney_gamma(&single), 1.0);
        assert!((blockwise_gamma_list(&single) - blockwise_gamma(&single, 0)).abs() < 1e-15);
    }

    #[test]
    fn list_baselines_on_unanimous_bits() {
        let frame = LlrFrame::with_apriori(vec![0.5, -1.0, 2.0, 0.1], vec![0.2, 0.0, 0.0, -0.3]).unwrap();
        let list = CodewordList::new(vec![vec![1, 1, 0, 0]], vec![-1.0]).unwrap();
        let app = bitwise_app_listsum(&list, &frame, 0.0).unwrap();
        for (x, y) in app.iter().zip(frame.totals()) {
            assert!((x - y).abs() < 1e-15);
        }
        let app = bitwise_app_listmax(&list, &frame, 1.5).unwrap();
        let expect = [0.7 - 1.5, -1.0 - 1.5, 2.0 + 1.5, -0.2 + 1.5];
        for (x, y) in app.iter().zip(expect) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn listmax_and_listsum_agree_on_singleton_sides() {
        let frame = LlrFrame::from_channel(vec![0.3; 3]);
        let list = CodewordList::new(vec![vec![0, 1, 1], vec![1, 1, 0], vec![1, 1, 1]], vec![-0.5, -1.0, -2.0]).unwrap();
        let s = bitwise_app_listsum(&list, &frame, 1.0).unwrap();
        let m = bitwise_app_listmax(&list, &frame, 1.0).unwrap();
        // bit 0: {0} vs {1,1}; bit 2: {1} vs {0,1}
        assert!((s[1] - m[1]).abs() < 1e-15);
        assert!((s[0] - m[0]).abs() > 1e-3);
        // the sum and the max of at most L terms differ by at most ln L
        let l2 = 2f64.ln();
        for i in 0..3 {
            assert!((s[i] - m[i]).abs() <= l2 + 1e-12);
        }
    }

    #[test]
    fn extrinsic_identities() {
        let frame = LlrFrame::with_apriori(vec![1.0, -2.0, 0.5], vec![0.5, 0.0, -1.0]).unwrap();
        assert_eq!(extrinsic(&frame.totals(), &frame), vec![0.0; 3]);
        let app = vec![3.0, f64::NEG_INFINITY, 0.0];
        let ext = extrinsic(&app, &frame);
        assert_eq!(ext, vec![1.5, f64::NEG_INFINITY, 0.5]);
        for i in [0, 2] {
            assert!((ext[i] + frame.llr_a[i] + frame.llr_ch[i] - app[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn full_list_reduces_to_listsum_and_bcjr() {
        let spec = CodeSpec::reed_muller(8, 4, FrozenRule::StaticZero).unwrap();
        let trellis = SyndromeTrellis::from_spec(&spec).unwrap();
        let params = ChannelParams::new(2.0, 0.5).unwrap();
        let mut dec = SclDecoder::new(&spec, 16).unwrap();
        for t in 0..200 {
            let c = encode(&[1, 0, (t % 2) as u8, 1], &spec).unwrap();
            let frame = transmit(&c, &params, &mut trial_rng(21, t));
            let res = dec.decode(&frame).unwrap();
            assert_eq!(res.log_unvisited, f64::NEG_INFINITY);
            let so = bitwise_app_soscl(&res, &frame).unwrap();
            let ls = bitwise_app_listsum(&CodewordList::from_result(&res), &frame, DEFAULT_BETA).unwrap();
            let map = bcjr_app(&trellis, &frame).unwrap();
            let bf = brute_force_reference(&spec, &frame).unwrap();
            for i in 0..8 {
                assert_eq!(so[i], ls[i]);
                assert!((so[i] - map[i]).abs() < 1e-8);
                assert!((so[i] - bf.app[i]).abs() < 1e-8);
            }
            let total: f64 = (0..16).map(|j| blockwise_gamma(&res, j)).sum();
            assert!((total - 1.0).abs() < 1e-9);
            assert!((blockwise_gamma_list(&res) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn unanimous_bits_stay_finite_with_unvisited_mass() {
        let spec = CodeSpec::reed_muller(16, 11, FrozenRule::StaticZero).unwrap();
        let params = ChannelParams::new(1.0, 11.0 / 16.0).unwrap();
        let c = vec![0u8; 16];
        let frame = transmit(&c, &params, &mut trial_rng(4, 0));
        let res = SclDecoder::new(&spec, 1).unwrap().decode(&frame).unwrap();
        assert!(res.log_unvisited.is_finite());
        let app = bitwise_app_soscl(&res, &frame).unwrap();
        assert!(app.iter().all(|x| x.is_finite()));
        let sd = soft_decision(&res, &frame, 0.1).unwrap();
        assert!(sd.gamma_block <= sd.gamma_list && sd.gamma_list <= 1.0);
        assert_eq!(sd.accepted, sd.gamma_block > 0.9);
    }
}
