//! Builds a few polar-like codes and encodes a message with each.
//!
//! ```text
//! cargo run --example encode
//! ```
use soscl::code::{crc_attach, crc_check, expand_message};
use soscl::{encode, systematic_encode, CodeSpec, CrcSpec, FrozenRule};

fn bits(v: &[u8]) -> String {
    v.iter().map(|b| char::from(b'0' + b)).collect()
}

fn main() -> soscl::Result<()> {
    // the four-bit code with u_1 = u_3 = 0
    let toy = CodeSpec::new(4, &[2, 4], FrozenRule::StaticZero)?;
    let msg = [1, 0];
    println!("toy {toy}: u = {}  c = {}", bits(&expand_message(&msg, &toy)?), bits(&encode(&msg, &toy)?));

    let rm = CodeSpec::reed_muller(32, 26, FrozenRule::StaticZero)?;
    let dyn_rm = CodeSpec::reed_muller(64, 42, FrozenRule::dynamic())?;
    let nr = CodeSpec::five_g(64, 48, FrozenRule::StaticZero)?;
    for spec in [&rm, &dyn_rm, &nr] {
        println!("{spec} rate {:.3} info set {:?}", spec.rate(), &spec.info_set()[..8]);
    }

    let msg: Vec<u8> = (0..26).map(|i| (i * 7 % 3 == 0) as u8).collect();
    let c = systematic_encode(&msg, &rm)?;
    println!("systematic {}: {}", rm, bits(&c));
    println!("message recovered: {}", rm.systematic_message_of(&c) == msg);

    let crc = CrcSpec::crc6();
    let payload: Vec<u8> = (0..42).map(|i| (i % 5 == 1) as u8).collect();
    let mut block = crc_attach(&payload, &crc);
    let c = encode(&block, &nr)?;
    println!("crc-6 block of {} bits, codeword weight {}", block.len(), c.iter().filter(|&&b| b == 1).count());
    block[3] ^= 1;
    println!("single flip detected: {}", !crc_check(&block, &crc)?);
    Ok(())
}
