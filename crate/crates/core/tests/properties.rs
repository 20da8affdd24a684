use std::collections::BTreeSet;

use proptest::prelude::*;
use soscl::code::{crc_attach, crc_check, polar_transform};
use soscl::evaluation::{SimReport, TrialOutcome};
use soscl::scl::leaf_metric_update;
use soscl::soft_output::{bitwise_app_listsum, bitwise_app_soscl, blockwise_gamma, blockwise_gamma_list, CodewordList};
use soscl::{encode, systematic_encode, CodeSpec, CrcSpec, FrozenRule, LlrFrame, SclDecoder};

fn bits(n: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..2, n)
}

fn llrs(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-8.0f64..8.0, n)
}

fn all_messages(k: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..1u32 << k).map(move |m| (0..k).map(|i| (m >> i & 1) as u8).collect())
}

proptest! {
    #[test]
    fn polar_transform_is_an_involution(v in (1u32..8).prop_flat_map(|m| bits(1 << m))) {
        prop_assert_eq!(polar_transform(&polar_transform(&v).unwrap()).unwrap(), v);
    }

    #[test]
    fn crc_round_trip_and_single_flip(msg in bits(42), flip in 0usize..48, wide in any::<bool>()) {
        let crc = if wide { CrcSpec::crc11() } else { CrcSpec::crc6() };
        let mut block = crc_attach(&msg, &crc);
        prop_assert_eq!(&block[..42], &msg[..]);
        prop_assert!(crc_check(&block, &crc).unwrap());
        let i = flip % block.len();
        block[i] ^= 1;
        prop_assert!(!crc_check(&block, &crc).unwrap());
    }

    #[test]
    fn path_metric_never_increases(lq in -50.0f64..0.0, llr in -30.0f64..30.0, bit in 0u8..2) {
        prop_assert!(leaf_metric_update(lq, llr, bit) <= lq);
    }

    #[test]
    fn list_gamma_dominates_every_candidate(y in llrs(32), l in 1usize..9) {
        let spec = CodeSpec::reed_muller(32, 21, FrozenRule::dynamic()).unwrap();
        let res = SclDecoder::new(&spec, l).unwrap().decode_llrs(&y).unwrap();
        let list = blockwise_gamma_list(&res);
        prop_assert!(list <= 1.0 + 1e-12);
        let mut prev = f64::INFINITY;
        for i in 0..res.candidates.len() {
            let g = blockwise_gamma(&res, i);
            prop_assert!(g > 0.0 && g <= list + 1e-12);
            // the list is sorted, so single-candidate Γ falls along it
            prop_assert!(g <= prev + 1e-12);
            prev = g;
        }
    }

    #[test]
    fn soft_output_is_list_sum_when_nothing_is_pruned(y in llrs(8), a in llrs(8)) {
        let spec = CodeSpec::reed_muller(8, 4, FrozenRule::ConvolutionalTaps(vec![1, 2])).unwrap();
        let frame = LlrFrame::with_apriori(y, a).unwrap();
        let res = SclDecoder::new(&spec, 16).unwrap().decode(&frame).unwrap();
        prop_assert_eq!(res.log_unvisited, f64::NEG_INFINITY);
        let so = bitwise_app_soscl(&res, &frame).unwrap();
        let ls = bitwise_app_listsum(&CodewordList::from_result(&res), &frame, f64::INFINITY).unwrap();
        for (s, l) in so.iter().zip(&ls) {
            prop_assert!((s - l).abs() < 1e-9, "{} vs {}", s, l);
        }
    }

    #[test]
    fn tally_conserves_trials(outcomes in prop::collection::vec((any::<bool>(), any::<bool>(), any::<bool>(), 0u64..5), 0..200)) {
        let mut r = SimReport::default();
        let mut parts = [SimReport::default(), SimReport::default()];
        for (i, &(erased, wrong, list_error, bit_errors)) in outcomes.iter().enumerate() {
            let o = TrialOutcome { erased, wrong: wrong && !erased, list_error, bit_errors, bits: 8 };
            r.tally(&o);
            parts[i % 2].tally(&o);
        }
        prop_assert_eq!(r.correct() + r.undetected + r.erasures, r.trials);
        prop_assert_eq!(r.block_errors, r.undetected + r.erasures);
        let mut merged = parts[0].clone();
        merged.merge(&parts[1]);
        prop_assert_eq!(merged, r);
    }
}

#[test]
fn systematic_encoding_spans_the_same_codebook() {
    for spec in [
        CodeSpec::reed_muller(16, 11, FrozenRule::StaticZero).unwrap(),
        CodeSpec::reed_muller(16, 8, FrozenRule::dynamic()).unwrap(),
        CodeSpec::five_g(16, 10, FrozenRule::StaticZero).unwrap(),
    ] {
        let plain: BTreeSet<Vec<u8>> = all_messages(spec.k()).map(|m| encode(&m, &spec).unwrap()).collect();
        let sys: BTreeSet<Vec<u8>> = all_messages(spec.k())
            .map(|m| {
                let c = systematic_encode(&m, &spec).unwrap();
                assert_eq!(spec.systematic_message_of(&c), m);
                c
            })
            .collect();
        assert_eq!(plain.len(), 1 << spec.k());
        assert_eq!(plain, sys, "{spec}");
    }
}
