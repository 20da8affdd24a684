//! biAWGN channel with BPSK mapping and per-trial random streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};

/// Channel and a-priori LLRs of one block. Positive values favour bit 0.
#[derive(Clone, Debug, PartialEq)]
pub struct LlrFrame {
    pub llr_ch: Vec<f64>,
    pub llr_a: Vec<f64>,
}

impl LlrFrame {
    /// Frame without a-priori information.
    pub fn from_channel(llr_ch: Vec<f64>) -> Self {
        let llr_a = vec![0.0; llr_ch.len()];
        Self { llr_ch, llr_a }
    }

    pub fn with_apriori(llr_ch: Vec<f64>, llr_a: Vec<f64>) -> Result<Self> {
        if llr_ch.len() != llr_a.len() {
            return invalid(format!(
                "channel ({}) and a-priori ({}) LLR lengths differ",
                llr_ch.len(),
                llr_a.len()
            ));
        }
        Ok(Self { llr_ch, llr_a })
    }

    pub fn len(&self) -> usize {
        self.llr_ch.len()
    }

    pub fn is_empty(&self) -> bool {
        self.llr_ch.is_empty()
    }

    /// `llr_ch + llr_a` at one position; opposing certainties cancel to 0.
    #[inline]
    pub fn total(&self, i: usize) -> f64 {
        let s = self.llr_ch[i] + self.llr_a[i];
        if s.is_nan() {
            0.0
        } else {
            s
        }
    }

    /// Decoder input `llr_ch + llr_a`.
    pub fn totals(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.total(i)).collect()
    }
}

/// Operating point of the channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    pub ebn0_db: f64,
    pub rate: f64,
    pub noise_sigma: f64,
}

impl ChannelParams {
    pub fn new(ebn0_db: f64, rate: f64) -> Result<Self> {
        Ok(Self {
            ebn0_db,
            rate,
            noise_sigma: derive_sigma(ebn0_db, rate)?,
        })
    }

    /// Mean channel LLR magnitude for a transmitted 0, `2/σ²`.
    pub fn llr_mean(&self) -> f64 {
        2.0 / (self.noise_sigma * self.noise_sigma)
    }
}

/// `σ = 1/sqrt(2 R 10^{Eb/N0/10})`.
pub fn derive_sigma(ebn0_db: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return invalid(format!("rate {rate} must lie in (0, 1]"));
    }
    if !ebn0_db.is_finite() {
        return invalid("Eb/N0 must be finite");
    }
    Ok(1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0)).sqrt())
}

/// Random stream for one Monte-Carlo trial, independent of scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Channel LLRs `2y/σ²` of `y = (1 - 2c) + σ·G`.
pub fn channel_llrs<R: Rng + ?Sized>(c: &[u8], sigma: f64, rng: &mut R) -> Vec<f64> {
    let scale = 2.0 / (sigma * sigma);
    c.iter()
        .map(|&b| {
            let x = 1.0 - 2.0 * f64::from(b & 1);
            let g: f64 = rng.sample(StandardNormal);
            scale * (x + sigma * g)
        })
        .collect()
}

/// BPSK over biAWGN; the returned frame has zero a-priori LLRs.
pub fn transmit<R: Rng + ?Sized>(c: &[u8], params: &ChannelParams, rng: &mut R) -> LlrFrame {
    LlrFrame::from_channel(channel_llrs(c, params.noise_sigma, rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_examples() {
        assert!((derive_sigma(0.0, 1.0).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((derive_sigma(3.0, 26.0 / 32.0).unwrap() - 0.555_358_364_483_149).abs() < 1e-9);
        assert!((derive_sigma(2.0, 0.5).unwrap() - 0.794_328_234_724_281_5).abs() < 1e-9);
        assert!(derive_sigma(1.0, 0.0).is_err());
        assert!(derive_sigma(1.0, -0.5).is_err());
        assert!(derive_sigma(1.0, 1.5).is_err());
    }

    #[test]
    fn low_noise_signs_follow_codeword() {
        let c = [0u8, 1, 1, 0, 1, 0, 0, 1];
        let params = ChannelParams::new(60.0, 0.5).unwrap();
        let frame = transmit(&c, &params, &mut trial_rng(1, 0));
        for (b, l) in c.iter().zip(&frame.llr_ch) {
            assert_eq!(*l > 0.0, *b == 0);
        }
        assert!(frame.llr_a.iter().all(|&a| a == 0.0));
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let c = [0u8; 16];
        let params = ChannelParams::new(1.0, 0.5).unwrap();
        let a = transmit(&c, &params, &mut trial_rng(42, 3));
        let b = transmit(&c, &params, &mut trial_rng(42, 3));
        let other = transmit(&c, &params, &mut trial_rng(42, 4));
        assert_eq!(a, b);
        assert_ne!(a, other);
    }

    #[test]
    fn llr_moments() {
        let params = ChannelParams::new(1.5, 0.5).unwrap();
        let sigma = params.noise_sigma;
        let mut rng = trial_rng(5, 0);
        let samples = channel_llrs(&vec![0u8; 1_000_000], sigma, &mut rng);
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let m_ref = 2.0 / (sigma * sigma);
        assert!((mean / m_ref - 1.0).abs() < 0.02, "mean {mean} vs {m_ref}");
        assert!((var / (2.0 * m_ref) - 1.0).abs() < 0.02, "var {var} vs {}", 2.0 * m_ref);
    }

    #[test]
    fn llr_density_is_consistent() {
        // p(l) = e^l p(-l): the mass ratio of mirrored bins must equal the
        // ratio implied by the Gaussian LLR law, which itself obeys symmetry
        use statrs::distribution::{ContinuousCDF, Normal};
        let params = ChannelParams::new(0.0, 0.5).unwrap();
        let m = params.llr_mean();
        let law = Normal::new(m, (2.0 * m).sqrt()).unwrap();
        let mut rng = trial_rng(9, 0);
        let samples = channel_llrs(&vec![0u8; 2_000_000], params.noise_sigma, &mut rng);
        let width = 0.5;
        for k in 0..6 {
            let lo = k as f64 * width;
            let hi = lo + width;
            let pos = samples.iter().filter(|&&x| x >= lo && x < hi).count() as f64;
            let neg = samples.iter().filter(|&&x| x > -hi && x <= -lo).count() as f64;
            let ratio = pos / neg;
            let expected = (law.cdf(hi) - law.cdf(lo)) / (law.cdf(-lo) - law.cdf(-hi));
            // symmetry bounds: e^lo <= ratio <= e^hi
            assert!(expected >= lo.exp() * 0.999 && expected <= hi.exp() * 1.001);
            let stderr = ratio * (1.0 / pos + 1.0 / neg).sqrt();
            assert!(
                (ratio - expected).abs() < 4.0 * stderr,
                "bin {k}: ratio {ratio} expected {expected}"
            );
        }
    }
}
