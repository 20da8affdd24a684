//! Successive-cancellation list decoding in the LLR domain, with exact path
//! probabilities and the accumulator for unvisited codebook mass.

use std::f64::consts::LN_2;

use crate::channel::LlrFrame;
use crate::code::{crc_check, polar_transform_in_place, CodeSpec, CrcSpec};
use crate::error::{invalid, Result};
use crate::logmath::{log_add, log_sigmoid, log_sum_exp};

/// `log_q + log σ((1 - 2·bit)·λ)`.
#[inline]
pub fn leaf_metric_update(log_q: f64, leaf_llr: f64, bit: u8) -> f64 {
    let s = if bit & 1 == 0 { leaf_llr } else { -leaf_llr };
    log_q + log_sigmoid(s)
}

/// Check-node update `2 atanh(tanh(a/2) tanh(b/2))`.
#[inline]
pub fn check_node(a: f64, b: f64) -> f64 {
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    let m = a.abs().min(b.abs());
    if a.is_infinite() || b.is_infinite() || m == 0.0 {
        return if m == 0.0 { 0.0 } else { sign * m };
    }
    sign * m + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

/// Min-sum approximation of [`check_node`].
#[inline]
pub fn check_node_min_sum(a: f64, b: f64) -> f64 {
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    sign * a.abs().min(b.abs())
}

/// Variable-node update `b + (1 - 2u)·a`; opposite infinities give 0.
#[inline]
pub fn variable_node(a: f64, b: f64, u: u8) -> f64 {
    let s = if u & 1 == 0 { b + a } else { b - a };
    if s.is_nan() {
        0.0
    } else {
        s
    }
}

/// One surviving decoding path.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    /// Input vector `u^N`, natural order.
    pub u: Vec<u8>,
    /// `log Q(u^N | y^N)`.
    pub log_q: f64,
}

impl Candidate {
    /// Codeword `u · F^{⊗m}`.
    pub fn codeword(&self) -> Vec<u8> {
        let mut c = self.u.clone();
        polar_transform_in_place(&mut c);
        c
    }
}

/// Output of one list decode.
#[derive(Clone, Debug)]
pub struct DecodeResult {
    /// Surviving leaves, most likely first.
    pub candidates: Vec<Candidate>,
    /// Approximate log codebook probability: list mass plus unvisited mass.
    pub log_q_star: f64,
    /// Log of the mass credited to pruned subtrees.
    pub log_unvisited: f64,
    pub list_size_used: usize,
}

impl DecodeResult {
    /// `logsumexp` of the candidates' `log_q`.
    pub fn log_list_mass(&self) -> f64 {
        log_sum_exp(self.candidates.iter().map(|c| c.log_q))
    }

    pub fn best(&self) -> &Candidate {
        &self.candidates[0]
    }

    pub fn codewords(&self) -> Vec<Vec<u8>> {
        self.candidates.iter().map(Candidate::codeword).collect()
    }
}

/// A pruned child recorded during decoding (for inspection and tests).
#[derive(Clone, Debug, PartialEq)]
pub struct PrunedEvent {
    /// 1-based phase at which the child was pruned.
    pub phase: usize,
    pub prefix: Vec<u8>,
    pub log_q: f64,
    /// Frozen positions from this phase to the end.
    pub frozen_after: usize,
}

/// Reusable SCL decoder for one code and list size.
#[derive(Clone, Debug)]
pub struct SclDecoder {
    spec: CodeSpec,
    list_size: usize,
    min_sum: bool,
    n: usize,
    // per-slot state, `2n` floats / bits per slot
    alpha: Vec<f64>,
    beta: Vec<u8>,
    u: Vec<u8>,
    log_q: Vec<f64>,
    active: Vec<usize>,
    free: Vec<usize>,
    log_unvisited: f64,
    trace: Option<Vec<PrunedEvent>>,
    scratch: Vec<(f64, usize)>,
}

impl SclDecoder {
    pub fn new(spec: &CodeSpec, list_size: usize) -> Result<Self> {
        if list_size == 0 {
            return invalid("list size must be at least 1");
        }
        let n = spec.n();
        // a list can never exceed the number of codewords
        let cap = list_size.min(1usize.checked_shl(spec.k() as u32).unwrap_or(usize::MAX));
        Ok(Self {
            spec: spec.clone(),
            list_size,
            min_sum: false,
            n,
            alpha: vec![0.0; cap * 2 * n],
            beta: vec![0; cap * 2 * n],
            u: vec![0; cap * n],
            log_q: vec![0.0; cap],
            active: Vec::with_capacity(cap),
            free: Vec::with_capacity(cap),
            log_unvisited: f64::NEG_INFINITY,
            trace: None,
            scratch: Vec::with_capacity(2 * cap),
        })
    }

    /// Uses the min-sum check-node rule; path metrics are then approximate.
    pub fn with_min_sum(mut self, on: bool) -> Self {
        self.min_sum = on;
        self
    }

    /// Records every pruned child in the next decodes.
    pub fn with_trace(mut self, on: bool) -> Self {
        self.trace = on.then(Vec::new);
        self
    }

    /// Events of the last decode when tracing is on.
    pub fn trace(&self) -> Option<&[PrunedEvent]> {
        self.trace.as_deref()
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    fn capacity(&self) -> usize {
        self.log_q.len()
    }

    /// Decodes `llr_ch + llr_a`.
    pub fn decode(&mut self, frame: &LlrFrame) -> Result<DecodeResult> {
        self.decode_llrs(&frame.totals())
    }

    pub fn decode_llrs(&mut self, llr: &[f64]) -> Result<DecodeResult> {
        let n = self.n;
        if llr.len() != n {
            return invalid(format!("expected {n} LLRs, got {}", llr.len()));
        }
        if llr.iter().any(|x| x.is_nan()) {
            return invalid("LLR input contains NaN");
        }
        self.active.clear();
        self.free.clear();
        self.free.extend((1..self.capacity()).rev());
        self.active.push(0);
        self.alpha[..n].copy_from_slice(llr);
        self.log_q[0] = 0.0;
        self.log_unvisited = f64::NEG_INFINITY;
        if let Some(t) = self.trace.as_mut() {
            t.clear();
        }

        self.descend(n, 0);

        let mut candidates: Vec<Candidate> = self
            .active
            .iter()
            .map(|&p| Candidate {
                u: self.u[p * n..(p + 1) * n].to_vec(),
                log_q: self.log_q[p],
            })
            .collect();
        candidates.sort_by(|a, b| b.log_q.total_cmp(&a.log_q));
        let list_mass = log_sum_exp(candidates.iter().map(|c| c.log_q));
        Ok(DecodeResult {
            log_q_star: log_add(self.log_unvisited, list_mass),
            log_unvisited: self.log_unvisited,
            list_size_used: candidates.len(),
            candidates,
        })
    }

    #[inline]
    fn level(&self, size: usize) -> usize {
        2 * self.n - 2 * size
    }

    /// Decodes the subtree of `size` leaves starting at phase `first`.
    fn descend(&mut self, size: usize, first: usize) {
        if size == 1 {
            self.leaf(first);
            return;
        }
        let n2 = 2 * self.n;
        let half = size / 2;
        let (src, dst) = (self.level(size), self.level(half));
        for k in 0..self.active.len() {
            let base = self.active[k] * n2;
            let a = &mut self.alpha[base..base + n2];
            for j in 0..half {
                let (x, y) = (a[src + j], a[src + half + j]);
                a[dst + j] = if self.min_sum {
                    check_node_min_sum(x, y)
                } else {
                    check_node(x, y)
                };
            }
        }
        self.descend(half, first);

        for k in 0..self.active.len() {
            let base = self.active[k] * n2;
            let a = &mut self.alpha[base..base + n2];
            let b = &mut self.beta[base..base + n2];
            for j in 0..half {
                a[dst + j] = variable_node(a[src + j], a[src + half + j], b[dst + j]);
                b[src + j] = b[dst + j];
            }
        }
        self.descend(half, first + half);

        for k in 0..self.active.len() {
            let base = self.active[k] * n2;
            let b = &mut self.beta[base..base + n2];
            for j in 0..half {
                let r = b[dst + j];
                b[src + j] ^= r;
                b[src + half + j] = r;
            }
        }
    }

    fn set_bit(&mut self, slot: usize, phase: usize, bit: u8) {
        let n = self.n;
        self.u[slot * n + phase] = bit;
        self.beta[slot * 2 * n + 2 * n - 2] = bit;
    }

    fn clone_slot(&mut self, from: usize) -> usize {
        let to = self.free.pop().expect("path pool exhausted");
        let n2 = 2 * self.n;
        self.alpha.copy_within(from * n2..(from + 1) * n2, to * n2);
        self.beta.copy_within(from * n2..(from + 1) * n2, to * n2);
        self.u.copy_within(from * self.n..(from + 1) * self.n, to * self.n);
        self.log_q[to] = self.log_q[from];
        to
    }

    fn leaf(&mut self, phase: usize) {
        let n = self.n;
        let leaf = 2 * n - 2;
        if !self.spec.is_info(phase) {
            for k in 0..self.active.len() {
                let p = self.active[k];
                let v = self.spec.frozen_value(phase, &self.u[p * n..p * n + phase]);
                let lambda = self.alpha[p * 2 * n + leaf];
                self.log_q[p] = leaf_metric_update(self.log_q[p], lambda, v);
                self.set_bit(p, phase, v);
            }
            return;
        }

        // children in order 2j + b over the active list
        self.scratch.clear();
        for k in 0..self.active.len() {
            let p = self.active[k];
            let lambda = self.alpha[p * 2 * n + leaf];
            for b in 0..2u8 {
                let m = leaf_metric_update(self.log_q[p], lambda, b);
                self.scratch.push((m, 2 * k + b as usize));
            }
        }
        let mut keep = vec![false; self.scratch.len()];
        if self.scratch.len() <= self.list_size {
            keep.fill(true);
        } else {
            let mut order = self.scratch.clone();
            order.sort_by(|a, b| b.0.total_cmp(&a.0));
            for &(_, idx) in &order[..self.list_size] {
                keep[idx] = true;
            }
            let penalty = self.spec.frozen_from(phase) as f64 * LN_2;
            for &(m, idx) in &order[self.list_size..] {
                self.log_unvisited = log_add(self.log_unvisited, m - penalty);
                if let Some(trace) = self.trace.as_mut() {
                    let p = self.active[idx / 2];
                    let mut prefix = self.u[p * n..p * n + phase].to_vec();
                    prefix.push((idx % 2) as u8);
                    trace.push(PrunedEvent {
                        phase: phase + 1,
                        prefix,
                        log_q: m,
                        frozen_after: self.spec.frozen_from(phase),
                    });
                }
            }
        }

        let parents = std::mem::take(&mut self.active);
        // release dropped parents first so clones find free slots
        for (k, &p) in parents.iter().enumerate() {
            if !keep[2 * k] && !keep[2 * k + 1] {
                self.free.push(p);
            }
        }
        let mut next = Vec::with_capacity(self.capacity());
        for (k, &p) in parents.iter().enumerate() {
            match (keep[2 * k], keep[2 * k + 1]) {
                (true, true) => {
                    let q = self.clone_slot(p);
                    self.log_q[p] = self.scratch[2 * k].0;
                    self.set_bit(p, phase, 0);
                    self.log_q[q] = self.scratch[2 * k + 1].0;
                    self.set_bit(q, phase, 1);
                    next.push(p);
                    next.push(q);
                }
                (true, false) | (false, true) => {
                    let b = u8::from(keep[2 * k + 1]);
                    self.log_q[p] = self.scratch[2 * k + b as usize].0;
                    self.set_bit(p, phase, b);
                    next.push(p);
                }
                (false, false) => {}
            }
        }
        self.active = next;
    }
}

/// One-shot list decode of a frame.
pub fn scl_decode(frame: &LlrFrame, spec: &CodeSpec, list_size: usize) -> Result<DecodeResult> {
    if frame.len() != spec.n() {
        return invalid(format!("frame has {} LLRs, code length is {}", frame.len(), spec.n()));
    }
    SclDecoder::new(spec, list_size)?.decode(frame)
}

/// Rule for picking the decoder output from the list.
#[derive(Clone, Debug, PartialEq)]
pub enum SelectMode {
    MostLikely,
    /// The message field of `u_A` is followed by the CRC parity bits.
    CrcAided(CrcSpec),
}

/// Selected candidate, or an erasure when no candidate is acceptable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    Candidate(usize),
    Erasure,
}

/// Picks the output candidate; indices refer to `result.candidates`.
pub fn select_output(result: &DecodeResult, spec: &CodeSpec, mode: &SelectMode) -> Selection {
    match mode {
        SelectMode::MostLikely => {
            if result.candidates.is_empty() {
                Selection::Erasure
            } else {
                Selection::Candidate(0)
            }
        }
        SelectMode::CrcAided(crc) => result
            .candidates
            .iter()
            .position(|c| crc_check(&spec.message_of(&c.u), crc).unwrap_or(false))
            .map_or(Selection::Erasure, Selection::Candidate),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{encode, expand_message, FrozenRule};

    fn fig1() -> CodeSpec {
        CodeSpec::new(4, &[2, 4], FrozenRule::StaticZero).unwrap()
    }

    #[test]
    fn leaf_metric_examples() {
        assert_eq!(leaf_metric_update(0.0, f64::INFINITY, 0), 0.0);
        assert!((leaf_metric_update(0.0, 0.0, 1) + LN_2).abs() < 1e-15);
        assert!((leaf_metric_update(-1.0, 2.0, 1) - (-1.0 - 2.126_928_011_042_972_5)).abs() < 1e-12);
        assert_eq!(leaf_metric_update(0.0, f64::INFINITY, 1), f64::NEG_INFINITY);
    }

    #[test]
    fn check_node_matches_tanh_rule() {
        for &(a, b) in &[(1.3, -0.7), (4.0, 2.5), (-0.1, -9.0), (20.0, 0.3), (-3.0, 3.0)] {
            let exact: f64 = 2.0 * ((a / 2.0_f64).tanh() * (b / 2.0_f64).tanh()).atanh();
            assert!((check_node(a, b) - exact).abs() < 1e-12, "{a} {b}");
        }
        assert_eq!(check_node(1.7, f64::INFINITY), 1.7);
        assert_eq!(check_node(-1.7, f64::INFINITY), -1.7);
        assert_eq!(check_node(1.7, f64::NEG_INFINITY), -1.7);
        assert_eq!(check_node(1.7, 0.0), 0.0);
        assert_eq!(check_node(0.0, f64::INFINITY), 0.0);
        assert_eq!(check_node(f64::INFINITY, f64::NEG_INFINITY), f64::NEG_INFINITY);
        // large magnitudes do not overflow
        assert!((check_node(800.0, 900.0) - 800.0).abs() < 1e-9);
    }

    #[test]
    fn variable_node_examples() {
        assert_eq!(variable_node(1.5, -0.5, 1), -2.0);
        assert_eq!(variable_node(1.5, -0.5, 0), 1.0);
        assert_eq!(variable_node(f64::INFINITY, f64::INFINITY, 1), 0.0);
        assert_eq!(variable_node(f64::INFINITY, 2.0, 0), f64::INFINITY);
    }

    #[test]
    fn fig1_accumulator_structure() {
        let spec = fig1();
        let frame = LlrFrame::from_channel(vec![-1.2, -0.4, 0.9, 0.3]);
        let mut dec = SclDecoder::new(&spec, 1).unwrap().with_trace(true);
        let res = dec.decode(&frame).unwrap();
        let trace = dec.trace().unwrap().to_vec();
        assert_eq!(res.candidates.len(), 1);
        assert_eq!(res.best().u, vec![0, 1, 0, 0]);
        assert_eq!(trace.len(), 2);
        assert_eq!(trace[0].phase, 2);
        assert_eq!(trace[0].prefix, vec![0, 0]);
        assert_eq!(trace[0].frozen_after, 1);
        assert_eq!(trace[1].phase, 4);
        assert_eq!(trace[1].prefix, vec![0, 1, 0, 1]);
        assert_eq!(trace[1].frozen_after, 0);

        // Q* = Q(0100) + Q(00)/2 + Q(0101), each Q from the bitwise channel law
        let q = |c: &[u8]| -> f64 {
            c.iter()
                .zip(&frame.llr_ch)
                .map(|(&b, &l)| log_sigmoid(if b == 0 { l } else { -l }))
                .sum::<f64>()
                .exp()
        };
        // Q(u^i | y) sums the codeword posteriors over every tail u_{i+1}^N
        let q_prefix = |prefix: &[u8]| -> f64 {
            let rest = 4 - prefix.len();
            let mut total = 0.0;
            for tail in 0..(1u32 << rest) {
                let mut u = prefix.to_vec();
                u.extend((0..rest).map(|j| ((tail >> j) & 1) as u8));
                let mut c = u.clone();
                polar_transform_in_place(&mut c);
                total += q(&c);
            }
            total
        };
        let expected = q_prefix(&[0, 1, 0, 0]) + 0.5 * q_prefix(&[0, 0]) + q_prefix(&[0, 1, 0, 1]);
        assert!((res.log_q_star - expected.ln()).abs() < 1e-12);
        assert!((res.best().log_q - q_prefix(&[0, 1, 0, 0]).ln()).abs() < 1e-12);
    }

    #[test]
    fn noiseless_input_is_certain() {
        let spec = CodeSpec::reed_muller(32, 26, FrozenRule::dynamic()).unwrap();
        let msg: Vec<u8> = (0..26).map(|i| (i % 3 == 0) as u8).collect();
        let c = encode(&msg, &spec).unwrap();
        let llr: Vec<f64> = c
            .iter()
            .map(|&b| if b == 0 { f64::INFINITY } else { f64::NEG_INFINITY })
            .collect();
        for l in [1, 4] {
            let res = scl_decode(&LlrFrame::from_channel(llr.clone()), &spec, l).unwrap();
            assert_eq!(res.best().u, expand_message(&msg, &spec).unwrap());
            assert_eq!(res.best().log_q, 0.0);
            assert_eq!(res.log_q_star, 0.0);
        }
    }

    #[test]
    fn candidates_respect_frozen_rule() {
        let spec = CodeSpec::reed_muller(16, 8, FrozenRule::ConvolutionalTaps(vec![1, 2])).unwrap();
        let llr: Vec<f64> = (0..16).map(|i| ((i * 37 % 11) as f64 - 5.0) / 2.0).collect();
        let res = SclDecoder::new(&spec, 8).unwrap().decode_llrs(&llr).unwrap();
        assert_eq!(res.candidates.len(), 8);
        for c in &res.candidates {
            assert_eq!(expand_message(&spec.message_of(&c.u), &spec).unwrap(), c.u);
            assert!(c.log_q <= 0.0);
        }
        assert!(res.candidates.windows(2).all(|w| w[0].log_q >= w[1].log_q));
        assert!(res.log_q_star >= res.log_list_mass());
    }

    #[test]
    fn rejects_bad_input() {
        let spec = fig1();
        assert!(SclDecoder::new(&spec, 0).is_err());
        let mut dec = SclDecoder::new(&spec, 2).unwrap();
        assert!(dec.decode_llrs(&[0.0; 3]).is_err());
        assert!(dec.decode_llrs(&[0.0, f64::NAN, 0.0, 0.0]).is_err());
    }

    #[test]
    fn crc_aided_selection() {
        let crc = CrcSpec::crc6();
        let spec = CodeSpec::five_g(16, 8, FrozenRule::StaticZero).unwrap();
        let block = crc_attach_msg(&[1, 0], &crc);
        let c = encode(&block, &spec).unwrap();
        let llr: Vec<f64> = c.iter().map(|&b| if b == 0 { 3.0 } else { -3.0 }).collect();
        let res = SclDecoder::new(&spec, 4).unwrap().decode_llrs(&llr).unwrap();
        assert_eq!(select_output(&res, &spec, &SelectMode::MostLikely), Selection::Candidate(0));
        let sel = select_output(&res, &spec, &SelectMode::CrcAided(crc.clone()));
        assert_eq!(sel, Selection::Candidate(0));

        // no candidate can pass a CRC over a list that excludes every valid block
        let wrong = DecodeResult {
            candidates: vec![Candidate { u: expand_message(&[1, 0, 0, 0, 0, 0, 0, 0], &spec).unwrap(), log_q: -1.0 }],
            log_q_star: -1.0,
            log_unvisited: f64::NEG_INFINITY,
            list_size_used: 1,
        };
        assert_eq!(select_output(&wrong, &spec, &SelectMode::CrcAided(crc)), Selection::Erasure);
    }

    fn crc_attach_msg(msg: &[u8], crc: &CrcSpec) -> Vec<u8> {
        crate::code::crc_attach(msg, crc)
    }
}
