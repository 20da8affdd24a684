use soscl::bcjr::{bcjr_app, brute_force_reference, SyndromeTrellis};
use soscl::harness::{run_experiment, CodeConfig, CodeFamily, ExperimentConfig, ExperimentKind, ExperimentOutput, FrozenConfig, Stopping};
use soscl::soft_output::{bitwise_app_listsum, CodewordList};
use soscl::{encode, transmit, trial_rng, ChannelParams, CodeSpec, FrozenRule, LlrFrame, SclDecoder};
use rand::Rng;

fn toy(n: usize, k: usize, frozen: FrozenConfig) -> CodeConfig {
    CodeConfig { family: CodeFamily::ReedMuller, n, k, frozen, crc: None }
}

#[test]
fn full_list_matches_enumeration_on_dynamic_toys() {
    for code in [toy(8, 4, FrozenConfig::Taps(vec![1, 2])), toy(16, 8, FrozenConfig::Dynamic)] {
        let mut cfg = ExperimentConfig::preset(ExperimentKind::OracleCheck);
        cfg.code = code;
        cfg.snr_db = vec![0.0, 1.0, 2.0, 3.0, 4.0];
        cfg.stopping = Stopping::fixed(1000);
        let ExperimentOutput::Oracle(rows) = run_experiment(&cfg, ExperimentKind::OracleCheck).unwrap() else {
            panic!("oracle output expected")
        };
        assert_eq!(rows.len(), 5);
        for r in rows {
            assert!(r.max_log_q_err < 1e-9, "{r:?}");
            assert!(r.max_gamma_sum_err < 1e-9, "{r:?}");
            assert!(r.max_bcjr_err.unwrap() < 1e-8, "{r:?}");
            assert!(r.max_list_sum_err < 1e-8, "{r:?}");
            assert!(r.pass);
        }
    }
}

#[test]
fn trellis_app_matches_enumeration_with_apriori_input() {
    let specs = [
        CodeSpec::reed_muller(16, 11, FrozenRule::StaticZero).unwrap(),
        CodeSpec::five_g(16, 7, FrozenRule::dynamic()).unwrap(),
        CodeSpec::reed_muller(8, 4, FrozenRule::ConvolutionalTaps(vec![1, 2])).unwrap(),
    ];
    for spec in &specs {
        let trellis = SyndromeTrellis::from_spec(spec).unwrap();
        let mut full = SclDecoder::new(spec, 1 << spec.k()).unwrap();
        let params = ChannelParams::new(1.0, spec.rate()).unwrap();
        for t in 0..300 {
            let mut rng = trial_rng(5, t);
            let msg: Vec<u8> = (0..spec.k()).map(|_| rng.random_range(0..2)).collect();
            let c = encode(&msg, spec).unwrap();
            let ch = transmit(&c, &params, &mut rng).llr_ch;
            let a: Vec<f64> = (0..spec.n()).map(|_| rng.random_range(-3.0..3.0)).collect();
            let frame = LlrFrame::with_apriori(ch, a).unwrap();

            let exact = brute_force_reference(spec, &frame).unwrap();
            let map = bcjr_app(&trellis, &frame).unwrap();
            let res = full.decode(&frame).unwrap();
            let sum = bitwise_app_listsum(&CodewordList::from_result(&res), &frame, f64::INFINITY).unwrap();
            for i in 0..spec.n() {
                assert!((map[i] - exact.app[i]).abs() < 1e-8, "{spec} bit {i}: {} vs {}", map[i], exact.app[i]);
                assert!((sum[i] - exact.app[i]).abs() < 1e-8, "{spec} bit {i}: {} vs {}", sum[i], exact.app[i]);
            }
        }
    }
}

#[derive(serde::Deserialize)]
struct PrunedReference {
    n: usize,
    info: Vec<usize>,
    taps: Option<Vec<usize>>,
    list_size: usize,
    llr: Vec<f64>,
    log_q_star: f64,
    log_q_best: f64,
}

/// Pruned-mass accounting against a brute-force SCL whose marginals come from enumeration.
#[test]
fn pruned_list_q_star_matches_enumerated_reference() {
    let cases: Vec<PrunedReference> =
        serde_json::from_str(include_str!("data/qstar_reference.json")).unwrap();
    assert!(cases.iter().any(|c| c.list_size < 1 << c.info.len()));
    for (i, c) in cases.iter().enumerate() {
        let rule = c.taps.clone().map_or(FrozenRule::StaticZero, FrozenRule::ConvolutionalTaps);
        let spec = CodeSpec::new(c.n, &c.info, rule).unwrap();
        let res = SclDecoder::new(&spec, c.list_size).unwrap().decode_llrs(&c.llr).unwrap();
        assert!((res.log_q_star - c.log_q_star).abs() < 1e-9, "case {i}: {} vs {}", res.log_q_star, c.log_q_star);
        assert!((res.best().log_q - c.log_q_best).abs() < 1e-9, "case {i}: {} vs {}", res.best().log_q, c.log_q_best);
    }
}
