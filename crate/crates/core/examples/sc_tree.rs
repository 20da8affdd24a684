//! Walks the four-bit example tree: a single SC pass, the subtrees it
//! prunes, and the codebook-probability estimate they add up to.
//!
//! ```text
//! cargo run --example sc_tree
//! ```
use soscl::bcjr::brute_force_reference;
use soscl::soft_output::{blockwise_gamma, blockwise_gamma_list};
use soscl::{CodeSpec, FrozenRule, LlrFrame, SclDecoder};

fn main() -> soscl::Result<()> {
    let spec = CodeSpec::new(4, &[2, 4], FrozenRule::StaticZero)?;
    let frame = LlrFrame::from_channel(vec![0.9, -1.4, 0.3, 2.1]);

    let mut sc = SclDecoder::new(&spec, 1)?.with_trace(true);
    let res = sc.decode(&frame)?;
    let best = res.best();
    println!("SC leaf u = {:?}  log Q = {:.4}", best.u, best.log_q);
    for ev in sc.trace().unwrap_or_default() {
        println!(
            "  pruned at phase {}: prefix {:?}  log Q = {:.4}  frozen below = {}",
            ev.phase, ev.prefix, ev.log_q, ev.frozen_after
        );
    }
    let exact = brute_force_reference(&spec, &frame)?;
    println!("log Q*   = {:.4}", res.log_q_star);
    println!("log Q_U  = {:.4} (exhaustive)", exact.log_q_u);
    println!("Γ* of the SC leaf = {:.4}", blockwise_gamma(&res, 0));

    let full = SclDecoder::new(&spec, 4)?.decode(&frame)?;
    println!("full list: log Q* = {:.4}, Γ*(list) = {:.6}", full.log_q_star, blockwise_gamma_list(&full));
    Ok(())
}
