//! Polar-like code construction: information sets, frozen-bit rules,
//! non-systematic and systematic encoding, and the outer CRC.
//!
//! Indices are 1-based wherever they appear in an API (`info_set`), while
//! vectors are stored in natural order with `u_1` at position 0.

mod crc;
mod polar;

use std::fmt;
use std::sync::OnceLock;

pub use crc::{crc_attach, crc_check, CrcSpec};
pub use polar::{polar_transform, polar_transform_in_place};

use crate::error::{invalid, Result};
use crate::gf2::BitMatrix;

/// Default backward offsets of the convolutional dynamic frozen rule:
/// `u_i = u_{i-2} ⊕ u_{i-3} ⊕ u_{i-5} ⊕ u_{i-6}`.
pub const DEFAULT_TAPS: [usize; 4] = [2, 3, 5, 6];

const NR_RELIABILITY: &str = include_str!("../../data/nr_reliability.txt");

/// How the frozen inputs `u_i, i ∈ F` are evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrozenRule {
    StaticZero,
    /// `u_i` is the XOR of `u_{i-t}` over the taps `t`, for frozen
    /// positions beyond the largest tap; earlier frozen positions are zero.
    ConvolutionalTaps(Vec<usize>),
}

impl FrozenRule {
    pub fn dynamic() -> Self {
        FrozenRule::ConvolutionalTaps(DEFAULT_TAPS.to_vec())
    }

    pub fn is_static(&self) -> bool {
        matches!(self, FrozenRule::StaticZero)
    }
}

/// Rule for picking the information set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InfoSetKind {
    /// Largest row weights of the Hadamard matrix (Reed-Muller style).
    ReedMuller,
    /// Most reliable positions of the 3GPP NR reliability sequence.
    FiveG,
}

/// One polar-like code: block length, information set and frozen rule.
#[derive(Clone, Debug)]
pub struct CodeSpec {
    n: usize,
    info_set: Vec<usize>,
    frozen_rule: FrozenRule,
    is_info: Vec<bool>,
    /// `frozen_from[i]`: frozen positions `j ≥ i` (0-based), length `n + 1`.
    frozen_from: Vec<usize>,
    systematic: OnceLock<SystematicRoute>,
}

#[derive(Clone, Debug)]
enum SystematicRoute {
    TwoPass,
    Matrix(BitMatrix),
    Unavailable,
}

impl PartialEq for CodeSpec {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.info_set == other.info_set && self.frozen_rule == other.frozen_rule
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.k())
    }
}

impl CodeSpec {
    /// `info_set` holds 1-based indices; it is sorted and deduplicated-checked.
    pub fn new(n: usize, info_set: &[usize], frozen_rule: FrozenRule) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return invalid(format!("block length {n} must be a power of two ≥ 2"));
        }
        let mut sorted = info_set.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return invalid("information set contains duplicate indices");
        }
        if sorted.first().is_some_and(|&i| i == 0) || sorted.last().is_some_and(|&i| i > n) {
            return invalid(format!("information set indices must lie in 1..={n}"));
        }
        if let FrozenRule::ConvolutionalTaps(taps) = &frozen_rule {
            if taps.is_empty() || taps.contains(&0) {
                return invalid("convolutional taps must be non-empty and strictly positive");
            }
        }
        let mut is_info = vec![false; n];
        for &i in &sorted {
            is_info[i - 1] = true;
        }
        let mut frozen_from = vec![0; n + 1];
        for i in (0..n).rev() {
            frozen_from[i] = frozen_from[i + 1] + usize::from(!is_info[i]);
        }
        Ok(Self {
            n,
            info_set: sorted,
            frozen_rule,
            is_info,
            frozen_from,
            systematic: OnceLock::new(),
        })
    }

    /// Reed-Muller information set (row-weight selection).
    pub fn reed_muller(n: usize, k: usize, frozen_rule: FrozenRule) -> Result<Self> {
        Self::new(n, &build_info_set(n, k, InfoSetKind::ReedMuller)?, frozen_rule)
    }

    /// 5G NR information set (reliability sequence).
    pub fn five_g(n: usize, k: usize, frozen_rule: FrozenRule) -> Result<Self> {
        Self::new(n, &build_info_set(n, k, InfoSetKind::FiveG)?, frozen_rule)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.info_set.len()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n as f64
    }

    /// Sorted, 1-based information indices.
    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn frozen_rule(&self) -> &FrozenRule {
        &self.frozen_rule
    }

    /// 0-based position test.
    #[inline]
    pub fn is_info(&self, pos: usize) -> bool {
        self.is_info[pos]
    }

    /// Number of frozen positions at or after 0-based position `pos`.
    #[inline]
    pub fn frozen_from(&self, pos: usize) -> usize {
        self.frozen_from[pos]
    }

    /// Value of the frozen input at 0-based `pos` given the decided prefix.
    #[inline]
    pub fn frozen_value(&self, pos: usize, prefix: &[u8]) -> u8 {
        match &self.frozen_rule {
            FrozenRule::StaticZero => 0,
            FrozenRule::ConvolutionalTaps(taps) => {
                let max_tap = taps.iter().copied().max().unwrap_or(0);
                if pos < max_tap {
                    0
                } else {
                    taps.iter().fold(0, |acc, &t| acc ^ prefix[pos - t])
                }
            }
        }
    }

    /// Message bits `u_A` of an input vector.
    pub fn message_of(&self, u: &[u8]) -> Vec<u8> {
        self.info_set.iter().map(|&i| u[i - 1]).collect()
    }

    /// Codeword bits at the information positions (systematic message).
    pub fn systematic_message_of(&self, c: &[u8]) -> Vec<u8> {
        self.message_of(c)
    }

    /// Rows are the encodings of the unit messages.
    pub fn generator_matrix(&self) -> BitMatrix {
        let k = self.k();
        let rows: Vec<Vec<u8>> = (0..k)
            .map(|j| {
                let mut msg = vec![0u8; k];
                msg[j] = 1;
                encode(&msg, self).expect("unit message has length K")
            })
            .collect();
        BitMatrix::from_rows(self.n, &rows)
    }

    fn systematic_route(&self) -> &SystematicRoute {
        self.systematic.get_or_init(|| {
            let k = self.k();
            if self.frozen_rule.is_static() {
                let two_pass_ok = (0..k).all(|j| {
                    let mut msg = vec![0u8; k];
                    msg[j] = 1;
                    self.message_of(&two_pass(&msg, self)) == msg
                });
                if two_pass_ok {
                    return SystematicRoute::TwoPass;
                }
            }
            let g = self.generator_matrix();
            let mut sub = BitMatrix::zeros(k, k);
            for r in 0..k {
                for (c, &i) in self.info_set.iter().enumerate() {
                    if g.get(r, i - 1) {
                        sub.set(r, c, true);
                    }
                }
            }
            match sub.inverse() {
                Some(inv) => SystematicRoute::Matrix(inv),
                None => SystematicRoute::Unavailable,
            }
        })
    }
}

/// Information set of size `k` for block length `n`, sorted ascending (1-based).
///
/// Reed-Muller selection ranks rows of `F^{⊗m}` by weight
/// `2^{popcount(i-1)}` and breaks ties towards the larger index.
pub fn build_info_set(n: usize, k: usize, kind: InfoSetKind) -> Result<Vec<usize>> {
    if n < 2 || !n.is_power_of_two() {
        return invalid(format!("block length {n} must be a power of two ≥ 2"));
    }
    if k < 1 || k > n {
        return invalid(format!("dimension {k} out of range 1..={n}"));
    }
    let mut set: Vec<usize> = match kind {
        InfoSetKind::ReedMuller => {
            let mut idx: Vec<usize> = (1..=n).collect();
            idx.sort_by(|&a, &b| {
                ((b - 1).count_ones(), b).cmp(&((a - 1).count_ones(), a))
            });
            idx.truncate(k);
            idx
        }
        InfoSetKind::FiveG => {
            if n > 1024 {
                return invalid("5G reliability sequence covers N ≤ 1024");
            }
            let restricted: Vec<usize> = reliability_sequence()
                .iter()
                .copied()
                .filter(|&i| i <= n)
                .collect();
            restricted[n - k..].to_vec()
        }
    };
    set.sort_unstable();
    Ok(set)
}

/// The bundled NR reliability sequence: 1-based indices, least reliable first.
pub fn reliability_sequence() -> &'static [usize] {
    static SEQ: OnceLock<Vec<usize>> = OnceLock::new();
    SEQ.get_or_init(|| {
        NR_RELIABILITY
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.trim().parse().expect("reliability file holds integers"))
            .collect()
    })
}

/// Places the message on `A` and evaluates every frozen input.
pub fn expand_message(msg: &[u8], spec: &CodeSpec) -> Result<Vec<u8>> {
    if msg.len() != spec.k() {
        return invalid(format!("message has {} bits, expected {}", msg.len(), spec.k()));
    }
    let mut u = vec![0u8; spec.n];
    let mut next = msg.iter();
    for pos in 0..spec.n {
        u[pos] = if spec.is_info[pos] {
            next.next().copied().unwrap_or(0) & 1
        } else {
            spec.frozen_value(pos, &u[..pos])
        };
    }
    Ok(u)
}

/// Non-systematic encoding `c = u · F^{⊗m}`.
pub fn encode(msg: &[u8], spec: &CodeSpec) -> Result<Vec<u8>> {
    let mut u = expand_message(msg, spec)?;
    polar_transform_in_place(&mut u);
    Ok(u)
}

fn two_pass(msg: &[u8], spec: &CodeSpec) -> Vec<u8> {
    let mut x = vec![0u8; spec.n];
    for (&i, &b) in spec.info_set.iter().zip(msg) {
        x[i - 1] = b & 1;
    }
    polar_transform_in_place(&mut x);
    for (pos, v) in x.iter_mut().enumerate() {
        if !spec.is_info[pos] {
            *v = 0;
        }
    }
    polar_transform_in_place(&mut x);
    x
}

/// Systematic encoding: a codeword whose bits on `A` equal the message.
///
/// Static-frozen codes use the two-pass transform when it is valid for the
/// information set; otherwise the message is pre-multiplied by the inverse
/// of the generator restricted to `A`.
pub fn systematic_encode(msg: &[u8], spec: &CodeSpec) -> Result<Vec<u8>> {
    if msg.len() != spec.k() {
        return invalid(format!("message has {} bits, expected {}", msg.len(), spec.k()));
    }
    match spec.systematic_route() {
        SystematicRoute::TwoPass => Ok(two_pass(msg, spec)),
        SystematicRoute::Matrix(inv) => encode(&inv.left_mul(msg), spec),
        SystematicRoute::Unavailable => {
            invalid("generator restricted to the information set is singular")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn popcount_set(n: usize, min_weight: u32) -> Vec<usize> {
        (1..=n).filter(|i| (i - 1).count_ones() >= min_weight).collect()
    }

    #[test]
    fn rm_info_sets_match_weight_census() {
        assert_eq!(build_info_set(4, 1, InfoSetKind::ReedMuller).unwrap(), vec![4]);
        let s = build_info_set(32, 26, InfoSetKind::ReedMuller).unwrap();
        assert_eq!(s, popcount_set(32, 2));
        let s = build_info_set(64, 42, InfoSetKind::ReedMuller).unwrap();
        assert_eq!(s, popcount_set(64, 3));
    }

    #[test]
    fn rm_reference_sizes_have_no_boundary_ties() {
        for (n, k) in [(32usize, 26usize), (64, 42), (64, 57), (128, 64)] {
            let set = build_info_set(n, k, InfoSetKind::ReedMuller).unwrap();
            let min_w = set.iter().map(|i| (i - 1).count_ones()).min().unwrap();
            let class = (1..=n).filter(|i| (i - 1).count_ones() == min_w).count();
            let included = set.iter().filter(|i| (*i - 1).count_ones() == min_w).count();
            assert_eq!(class, included, "({n},{k}) splits a weight class");
        }
    }

    #[test]
    fn rm_tie_break_prefers_larger_index() {
        let s = build_info_set(16, 8, InfoSetKind::ReedMuller).unwrap();
        assert_eq!(s, vec![8, 10, 11, 12, 13, 14, 15, 16]);
    }

    #[test]
    fn five_g_sets() {
        let seq = reliability_sequence();
        assert_eq!(seq.len(), 1024);
        assert_eq!(&seq[..8], &[1, 2, 3, 5, 9, 17, 33, 4]);
        let s = build_info_set(1024, 1, InfoSetKind::FiveG).unwrap();
        assert_eq!(s, vec![1024]);
        let s = build_info_set(16, 8, InfoSetKind::FiveG).unwrap();
        assert_eq!(s, vec![7, 8, 11, 12, 13, 14, 15, 16]);
        assert!(build_info_set(2048, 8, InfoSetKind::FiveG).is_err());
        assert!(build_info_set(16, 0, InfoSetKind::FiveG).is_err());
        assert!(build_info_set(16, 17, InfoSetKind::ReedMuller).is_err());
    }

    fn fig1_spec() -> CodeSpec {
        CodeSpec::new(4, &[2, 4], FrozenRule::StaticZero).unwrap()
    }

    #[test]
    fn expand_message_examples() {
        let spec = fig1_spec();
        assert_eq!(expand_message(&[1, 0], &spec).unwrap(), vec![0, 1, 0, 0]);
        assert_eq!(expand_message(&[0, 0], &spec).unwrap(), vec![0; 4]);
        assert!(expand_message(&[1], &spec).is_err());

        let spec = CodeSpec::new(8, &[4, 6, 7, 8], FrozenRule::dynamic()).unwrap();
        assert_eq!(
            expand_message(&[1, 1, 1, 1], &spec).unwrap(),
            vec![0, 0, 0, 1, 0, 1, 1, 1]
        );
    }

    #[test]
    fn dynamic_rule_uses_taps_beyond_constraint_length() {
        // frozen position 8 (1-based): u8 = u6 ^ u5 ^ u3 ^ u2
        let spec = CodeSpec::new(8, &[2, 3, 5, 7], FrozenRule::dynamic()).unwrap();
        let u = expand_message(&[1, 0, 0, 0], &spec).unwrap();
        assert_eq!(u, vec![0, 1, 0, 0, 0, 0, 0, 1]);
        let u = expand_message(&[1, 0, 1, 0], &spec).unwrap();
        assert_eq!(u, vec![0, 1, 0, 0, 1, 0, 0, 0]);
    }

    #[test]
    fn encode_fig1() {
        assert_eq!(encode(&[1, 0], &fig1_spec()).unwrap(), vec![1, 1, 0, 0]);
    }

    #[test]
    fn bad_specs_rejected() {
        assert!(CodeSpec::new(6, &[1], FrozenRule::StaticZero).is_err());
        assert!(CodeSpec::new(4, &[1, 1], FrozenRule::StaticZero).is_err());
        assert!(CodeSpec::new(4, &[5], FrozenRule::StaticZero).is_err());
        assert!(CodeSpec::new(4, &[0], FrozenRule::StaticZero).is_err());
        assert!(CodeSpec::new(4, &[2], FrozenRule::ConvolutionalTaps(vec![0])).is_err());
    }

    #[test]
    fn systematic_encoding_places_message_on_info_set() {
        for rule in [FrozenRule::StaticZero, FrozenRule::dynamic()] {
            let spec = CodeSpec::reed_muller(32, 26, rule.clone()).unwrap();
            let msg: Vec<u8> = (0..26).map(|i| ((i * 7 + 3) % 5 % 2) as u8).collect();
            let c = systematic_encode(&msg, &spec).unwrap();
            assert_eq!(spec.systematic_message_of(&c), msg);
            assert!(systematic_encode(&[0; 25], &spec).is_err());
        }
        let spec = CodeSpec::reed_muller(32, 26, FrozenRule::StaticZero).unwrap();
        assert!(matches!(spec.systematic_route(), SystematicRoute::TwoPass));
    }
}
