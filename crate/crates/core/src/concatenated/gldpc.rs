use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GroupGraph, TurboConfig, TurboDecoder, TurboOutcome};
use crate::bcjr::parity_check_matrix;
use crate::code::CodeSpec;
use crate::error::{invalid, Result};
use crate::gf2::BitMatrix;

/// Regular GLDPC code with variable-node degree 2: `2M` component check
/// nodes over `M·N` positions.
#[derive(Clone, Debug)]
pub struct GldpcSpec {
    component: CodeSpec,
    m: usize,
    interleaver: Vec<usize>,
    graph: GroupGraph,
    /// Reduced row echelon form of the stacked component constraints.
    rref: BitMatrix,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl GldpcSpec {
    pub fn component(&self) -> &CodeSpec {
        &self.component
    }

    pub fn num_cn_pairs(&self) -> usize {
        self.m
    }

    pub fn interleaver(&self) -> &[usize] {
        &self.interleaver
    }

    pub fn graph(&self) -> &GroupGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.m * self.component.n()
    }

    /// `M(2K - N)`, reached when all constraints are independent.
    pub fn design_dimension(&self) -> isize {
        self.m as isize * (2 * self.component.k() as isize - self.component.n() as isize)
    }

    /// Rank of the stacked constraints.
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Actual dimension `MN - rank`.
    pub fn dimension(&self) -> usize {
        self.n() - self.rank()
    }

    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.n() as f64
    }

    pub fn decoder(&self, cfg: TurboConfig) -> Result<TurboDecoder> {
        TurboDecoder::new(self.graph.clone(), [&self.component, &self.component], cfg)
    }

    /// Positions carrying the message in [`gldpc_encode`].
    pub fn message_positions(&self) -> &[usize] {
        &self.free
    }
}

/// Layer 1 check node `j` covers the contiguous block `jN..(j+1)N`; layer 2
/// node `j` covers the image of that block under a seeded uniform permutation.
pub fn build_gldpc(component: &CodeSpec, m: usize, seed: u64) -> Result<GldpcSpec> {
    if m == 0 {
        return invalid("GLDPC needs at least one check-node pair");
    }
    let n = component.n();
    let len = m * n;
    let mut interleaver: Vec<usize> = (0..len).collect();
    interleaver.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let blocks: Vec<Vec<usize>> = (0..m).map(|j| (j * n..(j + 1) * n).collect()).collect();
    let permuted: Vec<Vec<usize>> = blocks
        .iter()
        .map(|b| b.iter().map(|&p| interleaver[p]).collect())
        .collect();
    let graph = GroupGraph::new(len, [blocks, permuted])?;

    let h = parity_check_matrix(component);
    let mut stacked = BitMatrix::zeros(0, len);
    for layer in 0..2 {
        for g in graph.layer(layer) {
            for r in 0..h.rows() {
                let mut row = vec![0u8; len];
                for (t, &p) in g.iter().enumerate() {
                    row[p] = u8::from(h.matrix().get(r, t));
                }
                stacked.push_row(&row);
            }
        }
    }
    let pivots = stacked.rref();
    let mut is_pivot = vec![false; len];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free = (0..len).filter(|&p| !is_pivot[p]).collect();
    Ok(GldpcSpec {
        component: component.clone(),
        m,
        interleaver,
        graph,
        rref: stacked,
        pivots,
        free,
    })
}

/// Systematic encoding from the echelon form: the message fills the free
/// columns and each pivot bit is fixed by its row.
pub fn gldpc_encode(msg: &[u8], spec: &GldpcSpec) -> Result<Vec<u8>> {
    if msg.len() != spec.dimension() {
        return invalid(format!("message has {} bits, expected {}", msg.len(), spec.dimension()));
    }
    let mut c = vec![0u8; spec.n()];
    for (&p, &b) in spec.free.iter().zip(msg) {
        c[p] = b & 1;
    }
    // pivot columns of the row are zero in `c` so far, so H·c gives the pivots
    let parity = spec.rref.mul_vec(&c);
    for (r, &p) in spec.pivots.iter().enumerate() {
        c[p] = parity[r];
    }
    Ok(c)
}

pub fn gldpc_turbo_decode(llr_ch: &[f64], spec: &GldpcSpec, cfg: &TurboConfig) -> Result<TurboOutcome> {
    spec.decoder(cfg.clone())?.decode(llr_ch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::FrozenRule;

    #[test]
    fn reference_size_and_degree_census() {
        let comp = CodeSpec::reed_muller(32, 26, FrozenRule::StaticZero).unwrap();
        let g = build_gldpc(&comp, 32, 1).unwrap();
        assert_eq!(g.n(), 1024);
        assert_eq!(g.design_dimension(), 640);
        assert!(g.rank() <= 2 * 32 * 6);
        assert_eq!(g.dimension(), 1024 - g.rank());
        let mut degree = vec![0; 1024];
        for l in 0..2 {
            for grp in g.graph().layer(l) {
                assert_eq!(grp.len(), 32);
                for &p in grp {
                    degree[p] += 1;
                }
            }
        }
        assert!(degree.iter().all(|&d| d == 2));
    }

    #[test]
    fn encoded_words_satisfy_every_check() {
        let comp = CodeSpec::reed_muller(8, 4, FrozenRule::StaticZero).unwrap();
        let g = build_gldpc(&comp, 6, 3).unwrap();
        let h = parity_check_matrix(&comp);
        assert_eq!(gldpc_encode(&vec![0; g.dimension()], &g).unwrap(), vec![0; 48]);
        for x in 0..100u64 {
            let msg: Vec<u8> = (0..g.dimension()).map(|i| ((x * 7 + i as u64 * 13) % 5 % 2) as u8).collect();
            let c = gldpc_encode(&msg, &g).unwrap();
            assert!(g.graph().satisfied(&c, [&h, &h]));
            let back: Vec<u8> = g.message_positions().iter().map(|&p| c[p]).collect();
            assert_eq!(back, msg);
        }
        assert!(gldpc_encode(&[0], &g).is_err());
    }

    #[test]
    fn seeded_construction_is_reproducible() {
        let comp = CodeSpec::reed_muller(8, 4, FrozenRule::StaticZero).unwrap();
        assert_eq!(build_gldpc(&comp, 4, 9).unwrap().interleaver(), build_gldpc(&comp, 4, 9).unwrap().interleaver());
        assert!(build_gldpc(&comp, 0, 9).is_err());
    }
}
