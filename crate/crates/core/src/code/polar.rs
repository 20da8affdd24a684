use crate::error::{invalid, Result};

/// `v · F^{⊗m}` over GF(2) with `F = [[1,0],[1,1]]`.
///
/// Returns an error unless `v.len()` is a power of two.
pub fn polar_transform(v: &[u8]) -> Result<Vec<u8>> {
    if !v.len().is_power_of_two() {
        return invalid(format!("length {} is not a power of two", v.len()));
    }
    let mut out = v.to_vec();
    polar_transform_in_place(&mut out);
    Ok(out)
}

/// Butterfly form of [`polar_transform`]; the length must be a power of two.
pub fn polar_transform_in_place(v: &mut [u8]) {
    let n = v.len();
    debug_assert!(n.is_power_of_two());
    let mut half = 1;
    while half < n {
        for block in v.chunks_exact_mut(2 * half) {
            let (left, right) = block.split_at_mut(half);
            for (l, r) in left.iter_mut().zip(right.iter()) {
                *l ^= *r;
            }
        }
        half *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dense Kronecker power, built independently of the butterfly.
    fn kron_power(m: usize) -> Vec<Vec<u8>> {
        let mut g = vec![vec![1u8]];
        for _ in 0..m {
            let n = g.len();
            let mut next = vec![vec![0u8; 2 * n]; 2 * n];
            for r in 0..n {
                for c in 0..n {
                    next[r][c] = g[r][c];
                    next[r + n][c] = g[r][c];
                    next[r + n][c + n] = g[r][c];
                }
            }
            g = next;
        }
        g
    }

    fn dense_mul(v: &[u8], g: &[Vec<u8>]) -> Vec<u8> {
        (0..v.len())
            .map(|c| v.iter().zip(g).fold(0, |acc, (b, row)| acc ^ (b & row[c])))
            .collect()
    }

    #[test]
    fn small_cases() {
        assert_eq!(polar_transform(&[0, 0, 0, 0]).unwrap(), vec![0, 0, 0, 0]);
        assert_eq!(polar_transform(&[0, 1]).unwrap(), vec![1, 1]);
        assert_eq!(polar_transform(&[1, 0]).unwrap(), vec![1, 0]);
        assert_eq!(polar_transform(&[0, 1, 0, 0]).unwrap(), vec![1, 1, 0, 0]);
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(polar_transform(&[0, 1, 1]).is_err());
        assert!(polar_transform(&[]).is_err());
    }

    #[test]
    fn matches_dense_kronecker_for_all_n8_inputs() {
        let g = kron_power(3);
        for x in 0..256u32 {
            let v: Vec<u8> = (0..8).map(|i| ((x >> i) & 1) as u8).collect();
            let fast = polar_transform(&v).unwrap();
            assert_eq!(fast, dense_mul(&v, &g));
            assert_eq!(polar_transform(&fast).unwrap(), v);
        }
    }
}
