use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

/// Result of one Monte-Carlo trial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TrialOutcome {
    /// The decoder returned an erasure.
    pub erased: bool,
    /// An accepted decision differs from the transmitted block.
    pub wrong: bool,
    /// The transmitted block is absent from the decoder's list.
    pub list_error: bool,
    pub bit_errors: u64,
    pub bits: u64,
}

/// Counters for one (code, decoder, SNR) point.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub trials: u64,
    pub block_errors: u64,
    pub undetected: u64,
    pub erasures: u64,
    pub list_errors: u64,
    pub bit_errors: u64,
    pub bits: u64,
    /// 1-GMI of the decoder output, when measured.
    pub gmi: Option<f64>,
}

impl SimReport {
    /// Classifies one trial; erasures take precedence over wrong decisions.
    pub fn tally(&mut self, o: &TrialOutcome) {
        self.trials += 1;
        if o.erased {
            self.erasures += 1;
            self.block_errors += 1;
        } else if o.wrong {
            self.undetected += 1;
            self.block_errors += 1;
        }
        self.list_errors += u64::from(o.list_error);
        self.bit_errors += o.bit_errors;
        self.bits += o.bits;
    }

    /// Counter-wise sum. `gmi` is kept only when a single side has it.
    pub fn merge(&mut self, other: &SimReport) {
        self.trials += other.trials;
        self.block_errors += other.block_errors;
        self.undetected += other.undetected;
        self.erasures += other.erasures;
        self.list_errors += other.list_errors;
        self.bit_errors += other.bit_errors;
        self.bits += other.bits;
        self.gmi = match (self.gmi, other.gmi) {
            (Some(a), None) => Some(a),
            (None, b) => b,
            (Some(_), Some(_)) => None,
        };
    }

    pub fn correct(&self) -> u64 {
        self.trials - self.block_errors
    }

    pub fn accepted(&self) -> u64 {
        self.trials - self.erasures
    }

    fn ratio(a: u64, b: u64) -> f64 {
        if b == 0 {
            0.0
        } else {
            a as f64 / b as f64
        }
    }

    pub fn bler(&self) -> f64 {
        Self::ratio(self.block_errors, self.trials)
    }

    pub fn uer(&self) -> f64 {
        Self::ratio(self.undetected, self.trials)
    }

    /// Misdetection rate `UER / BLER`.
    pub fn mdr(&self) -> f64 {
        Self::ratio(self.undetected, self.block_errors)
    }

    /// Wrong decisions among accepted ones.
    pub fn mdr_accepted(&self) -> f64 {
        Self::ratio(self.undetected, self.accepted())
    }

    pub fn ler(&self) -> f64 {
        Self::ratio(self.list_errors, self.trials)
    }

    pub fn ber(&self) -> f64 {
        Self::ratio(self.bit_errors, self.bits)
    }

    /// 95% Clopper-Pearson interval of the BLER.
    pub fn bler_ci(&self) -> (f64, f64) {
        clopper_pearson(self.block_errors, self.trials, 0.05)
    }
}

/// Exact binomial confidence interval at level `1 - alpha`.
pub fn clopper_pearson(k: u64, n: u64, alpha: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (kf, nf) = (k as f64, n as f64);
    let lo = if k == 0 {
        0.0
    } else {
        Beta::new(kf, nf - kf + 1.0)
            .expect("positive shape parameters")
            .inverse_cdf(alpha / 2.0)
    };
    let hi = if k == n {
        1.0
    } else {
        Beta::new(kf + 1.0, nf - kf)
            .expect("positive shape parameters")
            .inverse_cdf(1.0 - alpha / 2.0)
    };
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conservation_and_rates() {
        let mut r = SimReport::default();
        let outcomes = [
            TrialOutcome { erased: true, ..Default::default() },
            TrialOutcome { wrong: true, list_error: true, bit_errors: 3, bits: 10, ..Default::default() },
            TrialOutcome { bits: 10, ..Default::default() },
            TrialOutcome { erased: true, wrong: true, ..Default::default() },
        ];
        for o in &outcomes {
            r.tally(o);
        }
        assert_eq!(r.correct() + r.undetected + r.erasures, r.trials);
        assert_eq!((r.block_errors, r.undetected, r.erasures), (3, 1, 2));
        assert!((r.mdr() - 1.0 / 3.0).abs() < 1e-15);
        assert!((r.mdr_accepted() - 0.5).abs() < 1e-15);
        assert!((r.ber() - 0.15).abs() < 1e-15);
        assert!((r.ler() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn erasure_only_errors_have_zero_mdr() {
        let mut r = SimReport::default();
        r.tally(&TrialOutcome { erased: true, ..Default::default() });
        r.tally(&TrialOutcome::default());
        assert_eq!(r.uer(), 0.0);
        assert_eq!(r.mdr(), 0.0);
    }

    #[test]
    fn mdr_recheck_from_rates() {
        // UER 6.0e-8 over BLER 6.7e-7
        let r = SimReport { trials: 1_000_000_000, block_errors: 670, undetected: 60, erasures: 610, ..Default::default() };
        assert!((r.mdr() - 0.0896).abs() < 1e-4);
    }

    #[test]
    fn clopper_pearson_values() {
        let (lo, hi) = clopper_pearson(0, 100, 0.05);
        assert_eq!(lo, 0.0);
        // closed form for k = 0: 1 - (alpha/2)^(1/n)
        assert!((hi - (1.0 - 0.025f64.powf(0.01))).abs() < 1e-9);
        let (lo, hi) = clopper_pearson(100, 100, 0.05);
        assert!((lo - 0.025f64.powf(0.01)).abs() < 1e-9);
        assert_eq!(hi, 1.0);
        let (lo, hi) = clopper_pearson(10, 100, 0.05);
        assert!(lo < 0.1 && 0.1 < hi);
        // reference values of the exact interval for 10/100
        assert!((lo - 0.049_004_689_221_485).abs() < 1e-6);
        assert!((hi - 0.176_222_597_740_022).abs() < 1e-6);
    }

    #[test]
    fn merge_is_additive() {
        let mut a = SimReport { trials: 5, block_errors: 2, undetected: 1, erasures: 1, ..Default::default() };
        let b = SimReport { trials: 7, block_errors: 3, undetected: 3, bits: 70, bit_errors: 4, ..Default::default() };
        a.merge(&b);
        assert_eq!((a.trials, a.block_errors, a.undetected, a.erasures, a.bits), (12, 5, 4, 1, 70));
    }
}
