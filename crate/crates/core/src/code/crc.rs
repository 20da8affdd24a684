use crate::error::{invalid, Result};

/// Outer CRC code given by an explicit generator polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrcSpec {
    width: usize,
    /// Coefficients of `x^width` down to `x^0`.
    generator: Vec<u8>,
}

impl CrcSpec {
    pub fn new(generator: Vec<u8>) -> Result<Self> {
        if generator.len() < 2 {
            return invalid("CRC generator needs degree at least 1");
        }
        if generator.iter().any(|&b| b > 1) {
            return invalid("CRC generator coefficients must be 0 or 1");
        }
        if generator[0] != 1 || generator[generator.len() - 1] != 1 {
            return invalid("CRC generator must have leading and trailing coefficient 1");
        }
        Ok(Self {
            width: generator.len() - 1,
            generator,
        })
    }

    /// Converts Koopman notation: the hex value lists the coefficients of
    /// `x^width .. x^1`, with the `+1` term implicit.
    pub fn from_koopman(width: usize, koopman: u64) -> Result<Self> {
        if width == 0 || width > 63 || koopman >> (width - 1) != 1 {
            return invalid(format!("0x{koopman:x} is not a degree-{width} Koopman polynomial"));
        }
        let mut generator: Vec<u8> = (0..width)
            .rev()
            .map(|i| ((koopman >> i) & 1) as u8)
            .collect();
        generator.push(1);
        Self::new(generator)
    }

    /// CRC-6 `0x30`: `x^6 + x^5 + 1`.
    pub fn crc6() -> Self {
        Self::from_koopman(6, 0x30).expect("valid polynomial")
    }

    /// CRC-11 `0x710`: `x^11 + x^10 + x^9 + x^5 + 1`.
    pub fn crc11() -> Self {
        Self::from_koopman(11, 0x710).expect("valid polynomial")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn generator(&self) -> &[u8] {
        &self.generator
    }

    /// Remainder of `bits(x) · x^width` divided by the generator, MSB first.
    fn remainder(&self, bits: &[u8], shifted: bool) -> Vec<u8> {
        let w = self.width;
        let mut reg = vec![0u8; w];
        let tail = if shifted { w } else { 0 };
        for &b in bits.iter().chain(std::iter::repeat_n(&0u8, tail)) {
            let top = reg[0];
            reg.rotate_left(1);
            reg[w - 1] = b & 1;
            if top == 1 {
                for (r, g) in reg.iter_mut().zip(&self.generator[1..]) {
                    *r ^= g;
                }
            }
        }
        reg
    }
}

/// Appends `width` parity bits so the block is divisible by the generator.
pub fn crc_attach(msg: &[u8], crc: &CrcSpec) -> Vec<u8> {
    let mut out = msg.to_vec();
    out.extend(crc.remainder(msg, true));
    out
}

/// True iff the block (message followed by parity) has zero remainder.
pub fn crc_check(block: &[u8], crc: &CrcSpec) -> Result<bool> {
    if block.len() < crc.width {
        return invalid(format!(
            "block of {} bits is shorter than CRC width {}",
            block.len(),
            crc.width
        ));
    }
    Ok(crc.remainder(block, false).iter().all(|&b| b == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn koopman_conversion() {
        assert_eq!(CrcSpec::crc6().generator(), &[1, 1, 0, 0, 0, 0, 1]);
        assert_eq!(
            CrcSpec::crc11().generator(),
            &[1, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1]
        );
        assert!(CrcSpec::from_koopman(6, 0x10).is_err());
        assert!(CrcSpec::new(vec![0, 1, 1]).is_err());
        assert!(CrcSpec::new(vec![1, 1, 0]).is_err());
    }

    #[test]
    fn zero_message_has_zero_parity() {
        let crc = CrcSpec::crc11();
        assert!(crc_attach(&[0; 42], &crc)[42..].iter().all(|&b| b == 0));
    }

    #[test]
    fn known_remainder() {
        // x^6 mod (x^6 + x^5 + 1) = x^5 + 1 for message "1" shifted by 6
        let crc = CrcSpec::crc6();
        assert_eq!(crc_attach(&[1], &crc), vec![1, 1, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn roundtrip_random_messages() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for crc in [CrcSpec::crc6(), CrcSpec::crc11()] {
            for _ in 0..10_000 {
                let msg: Vec<u8> = (0..42).map(|_| rng.random_range(0..2)).collect();
                assert!(crc_check(&crc_attach(&msg, &crc), &crc).unwrap());
            }
        }
    }

    #[test]
    fn every_single_flip_detected() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for crc in [CrcSpec::crc6(), CrcSpec::crc11()] {
            let msg: Vec<u8> = (0..42).map(|_| rng.random_range(0..2)).collect();
            let block = crc_attach(&msg, &crc);
            for i in 0..block.len() {
                let mut flipped = block.clone();
                flipped[i] ^= 1;
                assert!(!crc_check(&flipped, &crc).unwrap(), "flip at {i}");
            }
        }
    }

    #[test]
    fn short_block_rejected() {
        assert!(crc_check(&[1, 0], &CrcSpec::crc6()).is_err());
    }
}
