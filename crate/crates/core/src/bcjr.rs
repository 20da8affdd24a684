//! Exact soft-in soft-out references: syndrome-trellis BCJR and exhaustive
//! codebook enumeration.

use std::collections::HashMap;

use crate::channel::LlrFrame;
use crate::code::{encode, expand_message, CodeSpec, FrozenRule};
use crate::error::{invalid, Error, Result};
use crate::gf2::BitMatrix;
use crate::logmath::{log_add, log_sigmoid, log_sum_exp};

/// Largest number of trellis states allowed at any stage.
pub const MAX_TRELLIS_STATES: usize = 1 << 20;

/// Largest dimension accepted by [`brute_force_reference`].
pub const MAX_BRUTE_FORCE_K: usize = 20;

/// `(N - K) × N` parity-check matrix of a polar-like code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    h: BitMatrix,
}

impl ParityCheckMatrix {
    pub fn matrix(&self) -> &BitMatrix {
        &self.h
    }

    pub fn rows(&self) -> usize {
        self.h.rows()
    }

    pub fn cols(&self) -> usize {
        self.h.cols()
    }

    /// `H · c^T`.
    pub fn syndrome(&self, c: &[u8]) -> Vec<u8> {
        self.h.mul_vec(c)
    }

    pub fn is_codeword(&self, c: &[u8]) -> bool {
        self.syndrome(c).iter().all(|&s| s == 0)
    }
}

/// Each frozen constraint `u_i ⊕ f_i(u^{i-1}) = 0` is linear in `c` because
/// `u = c · F^{⊗m}`; column `i` of `F^{⊗m}` has ones at rows `j ⊇ i` (bitwise).
pub fn parity_check_matrix(spec: &CodeSpec) -> ParityCheckMatrix {
    let n = spec.n();
    let column = |i: usize| -> Vec<u8> { (0..n).map(|j| u8::from(j & i == i)).collect() };
    let mut h = BitMatrix::zeros(0, n);
    for pos in (0..n).filter(|&p| !spec.is_info(p)) {
        let mut row = column(pos);
        if let FrozenRule::ConvolutionalTaps(taps) = spec.frozen_rule() {
            let max_tap = taps.iter().copied().max().unwrap_or(0);
            if pos >= max_tap {
                for &t in taps {
                    for (r, x) in row.iter_mut().zip(column(pos - t)) {
                        *r ^= x;
                    }
                }
            }
        }
        h.push_row(&row);
    }
    assert_eq!(h.rank(), n - spec.k(), "frozen constraints must be independent");
    ParityCheckMatrix { h }
}

const NO_EDGE: u32 = u32::MAX;

/// Syndrome trellis restricted to states on some zero-to-zero path.
#[derive(Clone, Debug)]
pub struct SyndromeTrellis {
    n: usize,
    /// `states[i]`: syndromes alive before position `i` (`n + 1` stages).
    states: Vec<Vec<u64>>,
    /// `next[i][2 s + b]`: index in stage `i + 1` reached from state `s` with bit `b`.
    next: Vec<Vec<u32>>,
}

impl SyndromeTrellis {
    pub fn new(h: &ParityCheckMatrix) -> Result<Self> {
        let (r, n) = (h.rows(), h.cols());
        if r > 64 {
            return Err(Error::Capacity(format!("{r} parity checks exceed 64-bit syndromes")));
        }
        let cols: Vec<u64> = (0..n)
            .map(|i| (0..r).fold(0u64, |acc, row| acc | (u64::from(h.h.get(row, i)) << row)))
            .collect();

        let grow = |set: &Vec<u64>, col: u64| -> Result<Vec<u64>> {
            let mut out = set.clone();
            if col != 0 {
                let seen: std::collections::HashSet<u64> = set.iter().copied().collect();
                out.extend(set.iter().map(|s| s ^ col).filter(|s| !seen.contains(s)));
            }
            if out.len() > MAX_TRELLIS_STATES {
                return Err(Error::Capacity(format!(
                    "trellis needs more than {MAX_TRELLIS_STATES} states"
                )));
            }
            Ok(out)
        };

        let mut forward = vec![vec![0u64]];
        for &c in &cols {
            let next = grow(forward.last().expect("non-empty"), c)?;
            forward.push(next);
        }
        let mut backward = vec![vec![0u64]; n + 1];
        for i in (0..n).rev() {
            backward[i] = grow(&backward[i + 1], cols[i])?;
        }

        let states: Vec<Vec<u64>> = forward
            .iter()
            .zip(&backward)
            .map(|(f, b)| {
                let keep: std::collections::HashSet<u64> = b.iter().copied().collect();
                let mut s: Vec<u64> = f.iter().copied().filter(|x| keep.contains(x)).collect();
                s.sort_unstable();
                s
            })
            .collect();

        let next = (0..n)
            .map(|i| {
                let index: HashMap<u64, u32> = states[i + 1]
                    .iter()
                    .enumerate()
                    .map(|(k, &s)| (s, k as u32))
                    .collect();
                states[i]
                    .iter()
                    .flat_map(|&s| {
                        [s, s ^ cols[i]]
                            .map(|t| index.get(&t).copied().unwrap_or(NO_EDGE))
                    })
                    .collect()
            })
            .collect();
        Ok(Self { n, states, next })
    }

    pub fn from_spec(spec: &CodeSpec) -> Result<Self> {
        Self::new(&parity_check_matrix(spec))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Largest stage size.
    pub fn max_states(&self) -> usize {
        self.states.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Zero-to-zero path count, equal to the number of codewords.
    pub fn path_count(&self) -> u128 {
        let mut count = vec![1u128];
        for i in 0..self.n {
            let mut next = vec![0u128; self.states[i + 1].len()];
            for (s, &c) in count.iter().enumerate() {
                for b in 0..2 {
                    let t = self.next[i][2 * s + b];
                    if t != NO_EDGE {
                        next[t as usize] += c;
                    }
                }
            }
            count = next;
        }
        count[0]
    }
}

/// Exact APP LLRs of `llr_ch + llr_a` by forward-backward recursion.
pub fn bcjr_app(trellis: &SyndromeTrellis, frame: &LlrFrame) -> Result<Vec<f64>> {
    let n = trellis.n;
    if frame.len() != n {
        return invalid(format!("frame has {} LLRs, trellis length is {n}", frame.len()));
    }
    let lam = frame.totals();
    let gamma = |i: usize, b: usize| log_sigmoid(if b == 0 { lam[i] } else { -lam[i] });
    let normalize = |v: &mut [f64]| {
        let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if m.is_finite() {
            v.iter_mut().for_each(|x| *x -= m);
        }
    };

    let mut alpha: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    alpha.push(vec![0.0]);
    for i in 0..n {
        let mut next = vec![f64::NEG_INFINITY; trellis.states[i + 1].len()];
        for (s, &a) in alpha[i].iter().enumerate() {
            for b in 0..2 {
                let t = trellis.next[i][2 * s + b];
                if t != NO_EDGE {
                    next[t as usize] = log_add(next[t as usize], a + gamma(i, b));
                }
            }
        }
        normalize(&mut next);
        alpha.push(next);
    }

    let mut beta = vec![0.0];
    let mut app = vec![0.0; n];
    for i in (0..n).rev() {
        let mut prev = vec![f64::NEG_INFINITY; trellis.states[i].len()];
        let mut side = [f64::NEG_INFINITY; 2];
        for (s, a) in alpha[i].iter().enumerate() {
            for (b, acc) in side.iter_mut().enumerate() {
                let t = trellis.next[i][2 * s + b];
                if t != NO_EDGE {
                    let tail = gamma(i, b) + beta[t as usize];
                    prev[s] = log_add(prev[s], tail);
                    *acc = log_add(*acc, a + tail);
                }
            }
        }
        let d = side[0] - side[1];
        app[i] = if d.is_nan() { 0.0 } else { d };
        normalize(&mut prev);
        beta = prev;
    }
    Ok(app)
}

/// One codeword of an enumeration.
#[derive(Clone, Debug, PartialEq)]
pub struct Enumerated {
    pub u: Vec<u8>,
    pub c: Vec<u8>,
    /// `log Q(c | y)`.
    pub log_q: f64,
}

/// Exhaustive enumeration of a small code.
#[derive(Clone, Debug)]
pub struct BruteForce {
    /// `log Σ_{c ∈ C} Q(c | y)`.
    pub log_q_u: f64,
    pub codewords: Vec<Enumerated>,
    /// Exact APP LLRs.
    pub app: Vec<f64>,
}

impl BruteForce {
    /// Blockwise posteriors `Q(c | y) / Q_U(y)`, in enumeration order.
    pub fn posteriors(&self) -> Vec<f64> {
        self.codewords.iter().map(|e| (e.log_q - self.log_q_u).exp()).collect()
    }
}

/// `log Q(c | y)` with `Q` the product of bitwise posteriors.
pub fn log_q_codeword(c: &[u8], llr: &[f64]) -> f64 {
    c.iter()
        .zip(llr)
        .map(|(&b, &l)| log_sigmoid(if b == 0 { l } else { -l }))
        .sum()
}

/// Enumerates all `2^K` codewords; `K ≤ 20`.
pub fn brute_force_reference(spec: &CodeSpec, frame: &LlrFrame) -> Result<BruteForce> {
    let (n, k) = (spec.n(), spec.k());
    if k > MAX_BRUTE_FORCE_K {
        return Err(Error::Capacity(format!("K = {k} exceeds enumeration limit {MAX_BRUTE_FORCE_K}")));
    }
    if frame.len() != n {
        return invalid(format!("frame has {} LLRs, code length is {n}", frame.len()));
    }
    let lam = frame.totals();
    let mut codewords = Vec::with_capacity(1 << k);
    for x in 0..(1u32 << k) {
        let msg: Vec<u8> = (0..k).map(|j| ((x >> j) & 1) as u8).collect();
        let u = expand_message(&msg, spec)?;
        let c = encode(&msg, spec)?;
        let log_q = log_q_codeword(&c, &lam);
        codewords.push(Enumerated { u, c, log_q });
    }
    let log_q_u = log_sum_exp(codewords.iter().map(|e| e.log_q));
    let app = (0..n)
        .map(|i| {
            let side = |b: u8| {
                log_sum_exp(codewords.iter().filter(|e| e.c[i] == b).map(|e| e.log_q))
            };
            let d = side(0) - side(1);
            if d.is_nan() {
                0.0
            } else {
                d
            }
        })
        .collect();
    Ok(BruteForce {
        log_q_u,
        codewords,
        app,
    })
}
