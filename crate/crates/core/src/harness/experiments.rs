use std::collections::BTreeMap;

use rand::Rng;

use super::config::{CalibrationTarget, DecoderConfig, DecoderKind, ExperimentConfig, ExperimentKind};
use super::output::{CalibrationRow, CsvRow, McdeRow, OracleRow};
use super::runner::{run_trials, with_workers, Accumulate};
use crate::bcjr::{bcjr_app, brute_force_reference, SyndromeTrellis};
use crate::channel::{transmit, trial_rng, ChannelParams, LlrFrame};
use crate::code::{crc_attach, expand_message, polar_transform, CodeSpec};
use crate::concatenated::{gldpc_encode, product_encode, SisoKind, TurboDecoder};
use crate::error::{invalid, Result};
use crate::evaluation::{mcde_threshold, PpAccumulator, PpSample, SimReport, TrialOutcome};
use crate::scl::{select_output, scl_decode, DecodeResult, SclDecoder, SelectMode, Selection};
use crate::soft_output::{
    bitwise_app_listmax, bitwise_app_listsum, bitwise_app_soscl, extrinsic, CodewordList,
};

/// Results of one CLI experiment, one variant per output schema.
#[derive(Clone, Debug, PartialEq)]
pub enum ExperimentOutput {
    Reports(Vec<CsvRow>),
    Calibration(Vec<CalibrationRow>),
    Mcde(Vec<McdeRow>),
    Oracle(Vec<OracleRow>),
}

impl ExperimentOutput {
    pub fn to_csv(&self) -> Result<String> {
        use super::output::rows_to_string;
        match self {
            ExperimentOutput::Reports(r) => rows_to_string(r),
            ExperimentOutput::Calibration(r) => rows_to_string(r),
            ExperimentOutput::Mcde(r) => rows_to_string(r),
            ExperimentOutput::Oracle(r) => rows_to_string(r),
        }
    }
}

/// Validates `cfg` and runs it as `kind` on the configured worker pool.
pub fn run_experiment(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<ExperimentOutput> {
    cfg.validate(kind)?;
    with_workers(cfg.workers, || match kind {
        ExperimentKind::Bler | ExperimentKind::Gendec | ExperimentKind::Gmi => {
            single_code(cfg, kind).map(ExperimentOutput::Reports)
        }
        ExperimentKind::Calibrate => calibration(cfg).map(ExperimentOutput::Calibration),
        ExperimentKind::Product | ExperimentKind::Gldpc => turbo(cfg, kind).map(ExperimentOutput::Reports),
        ExperimentKind::Mcde => mcde(cfg).map(ExperimentOutput::Mcde),
        ExperimentKind::OracleCheck => oracle_check(cfg).map(ExperimentOutput::Oracle),
    })?
}

/// A transmitted block of a single polar-like code.
struct Block {
    u: Vec<u8>,
    c: Vec<u8>,
    frame: LlrFrame,
}

fn random_block(spec: &CodeSpec, cfg: &ExperimentConfig, params: &ChannelParams, trial: u64) -> Result<Block> {
    let mut rng = trial_rng(cfg.seed, trial);
    let msg: Vec<u8> = (0..cfg.code.message_len()).map(|_| rng.random_range(0..2u8)).collect();
    let payload = match cfg.code.crc {
        Some(c) => crc_attach(&msg, &c.spec()),
        None => msg,
    };
    let u = expand_message(&payload, spec)?;
    let c = polar_transform(&u)?;
    let frame = transmit(&c, params, &mut rng);
    Ok(Block { u, c, frame })
}

fn bit_errors(a: &[u8], b: &[u8]) -> u64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}

fn hard(app: &[f64]) -> Vec<u8> {
    app.iter().map(|&l| u8::from(l < 0.0)).collect()
}

/// Per-decoder counters of a single-code point.
struct SingleAcc {
    reports: Vec<SimReport>,
    pp: Vec<Option<PpAccumulator>>,
}

impl Accumulate for SingleAcc {
    fn merge(&mut self, other: Self) {
        for (a, b) in self.reports.iter_mut().zip(&other.reports) {
            a.merge(b);
        }
        for (a, b) in self.pp.iter_mut().zip(&other.pp) {
            if let (Some(a), Some(b)) = (a, b) {
                a.merge(b);
            }
        }
    }
}

struct Scratch {
    scl: BTreeMap<usize, SclDecoder>,
}

impl Scratch {
    fn new(spec: &CodeSpec, decoders: &[DecoderConfig]) -> Result<Self> {
        let mut scl = BTreeMap::new();
        for d in decoders.iter().filter(|d| d.kind.uses_list()) {
            if !scl.contains_key(&d.list_size) {
                scl.insert(d.list_size, SclDecoder::new(spec, d.list_size)?);
            }
        }
        Ok(Self { scl })
    }

    fn decode_all(&mut self, frame: &LlrFrame) -> Result<BTreeMap<usize, DecodeResult>> {
        self.scl
            .iter_mut()
            .map(|(&l, dec)| Ok((l, dec.decode(frame)?)))
            .collect()
    }
}

/// Classifies one decoder on one block. Returns the outcome and, for the
/// bitwise decoders, the APP LLRs.
fn classify(
    d: &DecoderConfig,
    kind: ExperimentKind,
    cfg: &ExperimentConfig,
    spec: &CodeSpec,
    trellis: Option<&SyndromeTrellis>,
    block: &Block,
    lists: &BTreeMap<usize, DecodeResult>,
) -> Result<(TrialOutcome, Option<Vec<f64>>)> {
    let n = block.c.len() as u64;
    let mut o = TrialOutcome { bits: n, ..Default::default() };
    let res = lists.get(&d.list_size);
    if let Some(r) = res {
        o.list_error = !r.candidates.iter().any(|c| c.u == block.u);
    }
    // decision-level outcome from a chosen candidate
    let decide = |o: &mut TrialOutcome, r: &DecodeResult, pick: Selection| {
        let idx = match pick {
            Selection::Candidate(i) => i,
            Selection::Erasure => {
                o.erased = true;
                0
            }
        };
        let cand = &r.candidates[idx];
        o.wrong = cand.u != block.u;
        o.bit_errors = bit_errors(&cand.codeword(), &block.c);
    };
    let threshold = |gamma: f64| {
        if gamma > 1.0 - cfg.epsilon.expect("validated") {
            Selection::Candidate(0)
        } else {
            Selection::Erasure
        }
    };
    let res_or = || res.ok_or_else(|| crate::error::Error::InvalidArgument("missing list".into()));
    let app = match (d.kind, kind) {
        (DecoderKind::Scl, _) => {
            decide(&mut o, res_or()?, Selection::Candidate(0));
            None
        }
        (DecoderKind::CrcScl, _) => {
            let r = res_or()?;
            let crc = cfg.code.crc.expect("validated").spec();
            decide(&mut o, r, select_output(r, spec, &SelectMode::CrcAided(crc)));
            None
        }
        (DecoderKind::Forney, _) => {
            let r = res_or()?;
            decide(&mut o, r, threshold(crate::soft_output::forney_gamma(r)));
            None
        }
        (DecoderKind::SoScl, ExperimentKind::Gendec) => {
            let r = res_or()?;
            decide(&mut o, r, threshold(crate::soft_output::blockwise_gamma(r, 0)));
            None
        }
        (DecoderKind::Map, _) => Some(bcjr_app(trellis.expect("validated"), &block.frame)?),
        (DecoderKind::SoScl, _) => Some(bitwise_app_soscl(res_or()?, &block.frame)?),
        (DecoderKind::ListSum, _) => Some(bitwise_app_listsum(
            &CodewordList::from_result(res_or()?),
            &block.frame,
            d.beta(),
        )?),
        (DecoderKind::ListMax, _) => Some(bitwise_app_listmax(
            &CodewordList::from_result(res_or()?),
            &block.frame,
            d.beta(),
        )?),
    };
    if let Some(app) = &app {
        let h = hard(app);
        o.bit_errors = bit_errors(&h, &block.c);
        o.wrong = o.bit_errors > 0;
    }
    Ok((o, app))
}

fn single_code(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<Vec<CsvRow>> {
    let spec = cfg.code.build()?;
    let trellis = if cfg.decoders.iter().any(|d| d.kind == DecoderKind::Map) {
        Some(SyndromeTrellis::from_spec(&spec)?)
    } else {
        None
    };
    let rate = cfg.code.message_len() as f64 / spec.n() as f64;
    let measure_gmi = kind == ExperimentKind::Gmi;
    let label = cfg.code.label();
    let mut rows = Vec::new();
    for &snr in &cfg.snr_db {
        let params = ChannelParams::new(snr, rate)?;
        let fresh = || -> Result<(SingleAcc, Scratch)> {
            let acc = SingleAcc {
                reports: vec![SimReport::default(); cfg.decoders.len()],
                pp: cfg
                    .decoders
                    .iter()
                    .map(|d| {
                        (measure_gmi && !matches!(d.kind, DecoderKind::Scl | DecoderKind::CrcScl | DecoderKind::Forney))
                            .then(PpAccumulator::default)
                    })
                    .collect(),
            };
            Ok((acc, Scratch::new(&spec, &cfg.decoders)?))
        };
        let trial = |i: u64, scratch: &mut Scratch, acc: &mut SingleAcc| -> Result<()> {
            let block = random_block(&spec, cfg, &params, i)?;
            let lists = scratch.decode_all(&block.frame)?;
            for (k, d) in cfg.decoders.iter().enumerate() {
                let (o, app) = classify(d, kind, cfg, &spec, trellis.as_ref(), &block, &lists)?;
                acc.reports[k].tally(&o);
                if let (Some(pp), Some(app)) = (acc.pp[k].as_mut(), app) {
                    for ((&b, &ch), e) in block.c.iter().zip(&block.frame.llr_ch).zip(extrinsic(&app, &block.frame)) {
                        pp.push(&PpSample { bit: b, llr_ch: ch, llr_ext: e });
                    }
                }
            }
            Ok(())
        };
        let min = cfg.stopping.min_block_errors;
        let (acc, _) = run_trials(&cfg.stopping, cfg.batch_size, fresh, trial, |a: &SingleAcc| {
            a.reports.iter().all(|r| r.block_errors >= min)
        })?;
        for (k, d) in cfg.decoders.iter().enumerate() {
            let mut r = acc.reports[k].clone();
            if let Some(pp) = &acc.pp[k] {
                r.gmi = Some(pp.best()?.1);
            }
            let l = d.kind.uses_list().then_some(d.list_size);
            rows.push(CsvRow::new(&label, d.kind.label(), l, snr, &r, cfg.seed));
        }
    }
    Ok(rows)
}

/// Bin `k` covers `[10^{-(k+1)/2}, 10^{-k/2})`.
pub const CALIBRATION_BINS: usize = 10;

pub fn calibration_bin(p: f64) -> Option<usize> {
    if !(p > 0.0 && p < 1.0) {
        return None;
    }
    let k = (-2.0 * p.log10()).floor();
    (k < CALIBRATION_BINS as f64).then_some(k as usize)
}

#[derive(Clone, Default)]
struct BinAcc {
    count: u64,
    sum: f64,
    errors: u64,
}

struct CalAcc(Vec<Vec<BinAcc>>);

impl Accumulate for CalAcc {
    fn merge(&mut self, other: Self) {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            for (x, y) in a.iter_mut().zip(b) {
                x.count += y.count;
                x.sum += y.sum;
                x.errors += y.errors;
            }
        }
    }
}

fn calibration(cfg: &ExperimentConfig) -> Result<Vec<CalibrationRow>> {
    let spec = cfg.code.build()?;
    let rate = cfg.code.message_len() as f64 / spec.n() as f64;
    let label = cfg.code.label();
    let list_target = cfg.calibration == CalibrationTarget::List;
    if list_target && cfg.decoders.iter().any(|d| d.kind == DecoderKind::Forney) {
        return invalid("list calibration is defined for so_scl only");
    }
    let mut rows = Vec::new();
    for &snr in &cfg.snr_db {
        let params = ChannelParams::new(snr, rate)?;
        let fresh = || -> Result<(CalAcc, Scratch)> {
            Ok((
                CalAcc(vec![vec![BinAcc::default(); CALIBRATION_BINS]; cfg.decoders.len()]),
                Scratch::new(&spec, &cfg.decoders)?,
            ))
        };
        let trial = |i: u64, scratch: &mut Scratch, acc: &mut CalAcc| -> Result<()> {
            let block = random_block(&spec, cfg, &params, i)?;
            let lists = scratch.decode_all(&block.frame)?;
            for (k, d) in cfg.decoders.iter().enumerate() {
                let r = &lists[&d.list_size];
                // 1 - Γ via expm1 keeps the small tail bins accurate
                let (log_gamma, error) = match (d.kind, list_target) {
                    (DecoderKind::Forney, _) => (r.best().log_q - r.log_list_mass(), r.best().u != block.u),
                    (_, false) => (r.best().log_q - r.log_q_star, r.best().u != block.u),
                    (_, true) => (
                        r.log_list_mass() - r.log_q_star,
                        !r.candidates.iter().any(|c| c.u == block.u),
                    ),
                };
                let p = -log_gamma.min(0.0).exp_m1();
                if let Some(b) = calibration_bin(p) {
                    let bin = &mut acc.0[k][b];
                    bin.count += 1;
                    bin.sum += p;
                    bin.errors += u64::from(error);
                }
            }
            Ok(())
        };
        let (acc, _) = run_trials(&cfg.stopping, cfg.batch_size, fresh, trial, |_| false)?;
        for (k, d) in cfg.decoders.iter().enumerate() {
            for (b, bin) in acc.0[k].iter().enumerate() {
                if bin.count == 0 {
                    continue;
                }
                let mut row = CalibrationRow {
                    code: label.clone(),
                    decoder: d.kind.label().to_string(),
                    list_size: d.list_size,
                    ebn0_db: snr,
                    target: if list_target { "list" } else { "decision" }.to_string(),
                    bin_low: 10f64.powf(-((b + 1) as f64) / 2.0),
                    bin_high: 10f64.powf(-(b as f64) / 2.0),
                    count: bin.count,
                    mean_predicted: bin.sum / bin.count as f64,
                    errors: bin.errors,
                    empirical: bin.errors as f64 / bin.count as f64,
                    ci_low: 0.0,
                    ci_high: 0.0,
                };
                row.fill_ci();
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

struct TurboAcc(Vec<SimReport>);

impl Accumulate for TurboAcc {
    fn merge(&mut self, other: Self) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            a.merge(b);
        }
    }
}

fn turbo(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<Vec<CsvRow>> {
    enum Code {
        Product(crate::concatenated::ProductCodeSpec),
        Gldpc(crate::concatenated::GldpcSpec),
    }
    let code = if kind == ExperimentKind::Product {
        Code::Product(cfg.product_spec()?)
    } else {
        Code::Gldpc(cfg.gldpc_spec()?)
    };
    let (k, rate, label) = match &code {
        Code::Product(p) => (p.k(), p.rate(), format!("product_{}", cfg.code.label())),
        Code::Gldpc(g) => (
            g.dimension(),
            g.rate(),
            format!("gldpc_m{}_{}", g.num_cn_pairs(), cfg.code.label()),
        ),
    };
    let decoders = || -> Result<Vec<TurboDecoder>> {
        cfg.turbo
            .iter()
            .map(|t| match &code {
                Code::Product(p) => p.decoder(t.clone()),
                Code::Gldpc(g) => g.decoder(t.clone()),
            })
            .collect()
    };
    let mut rows = Vec::new();
    for &snr in &cfg.snr_db {
        let params = ChannelParams::new(snr, rate)?;
        let fresh = || Ok((TurboAcc(vec![SimReport::default(); cfg.turbo.len()]), decoders()?));
        let trial = |i: u64, decs: &mut Vec<TurboDecoder>, acc: &mut TurboAcc| -> Result<()> {
            let mut rng = trial_rng(cfg.seed, i);
            let msg: Vec<u8> = (0..k).map(|_| rng.random_range(0..2u8)).collect();
            let c = match &code {
                Code::Product(p) => product_encode(&msg, p)?,
                Code::Gldpc(g) => gldpc_encode(&msg, g)?,
            };
            let frame = transmit(&c, &params, &mut rng);
            for (r, dec) in acc.0.iter_mut().zip(decs.iter_mut()) {
                let out = dec.decode(&frame.llr_ch)?;
                let errs = bit_errors(&out.decisions, &c);
                r.tally(&TrialOutcome {
                    wrong: errs > 0,
                    bit_errors: errs,
                    bits: c.len() as u64,
                    ..Default::default()
                });
            }
            Ok(())
        };
        let min = cfg.stopping.min_block_errors;
        let (acc, _) = run_trials(&cfg.stopping, cfg.batch_size, fresh, trial, |a: &TurboAcc| {
            a.0.iter().all(|r| r.block_errors >= min)
        })?;
        for (t, r) in cfg.turbo.iter().zip(&acc.0) {
            rows.push(CsvRow::new(&label, t.siso.label(), t.siso.list_size(), snr, r, cfg.seed));
        }
    }
    Ok(rows)
}

fn siso_of(d: &DecoderConfig) -> SisoKind {
    let list_size = d.list_size;
    match d.kind {
        DecoderKind::SoScl => SisoKind::SoScl { list_size },
        DecoderKind::ListSum => SisoKind::ListSum { list_size },
        DecoderKind::ListMax => SisoKind::ListMax { list_size },
        _ => SisoKind::Bcjr,
    }
}

fn mcde(cfg: &ExperimentConfig) -> Result<Vec<McdeRow>> {
    let spec = cfg.code.build()?;
    let mut m = cfg.mcde.clone().unwrap_or_default();
    m.seed = cfg.seed;
    let mut rows = Vec::new();
    for d in &cfg.decoders {
        let siso = siso_of(d);
        let res = mcde_threshold(&spec, siso, &m)?;
        for p in &res.points {
            rows.push(McdeRow {
                code: cfg.code.label(),
                decoder: siso.label().to_string(),
                list_size: siso.list_size(),
                ebn0_db: p.ebn0_db,
                converged: p.converged,
                iterations: p.iterations,
                gmi: p.final_gmi,
                threshold_db: res.threshold_db,
            });
        }
    }
    Ok(rows)
}

/// Tolerance on codebook masses and blockwise soft output.
pub const ORACLE_TOL_LOG_Q: f64 = 1e-9;
/// Tolerance on bitwise APP LLRs.
pub const ORACLE_TOL_APP: f64 = 1e-8;

struct OracleAcc {
    log_q: f64,
    gamma: f64,
    bcjr: Option<f64>,
    list_sum: f64,
}

impl Accumulate for OracleAcc {
    fn merge(&mut self, o: Self) {
        self.log_q = self.log_q.max(o.log_q);
        self.gamma = self.gamma.max(o.gamma);
        self.bcjr = match (self.bcjr, o.bcjr) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        self.list_sum = self.list_sum.max(o.list_sum);
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| if x == y { 0.0 } else { (x - y).abs() }).fold(0.0, f64::max)
}

/// Checks the list decoder, its soft output and the trellis decoder against
/// exhaustive enumeration with a list large enough to hold every codeword.
fn oracle_check(cfg: &ExperimentConfig) -> Result<Vec<OracleRow>> {
    let spec = cfg.code.build()?;
    let trellis = SyndromeTrellis::from_spec(&spec).ok();
    let rate = spec.rate();
    let full = 1usize << spec.k();
    let mut rows = Vec::new();
    for &snr in &cfg.snr_db {
        let params = ChannelParams::new(snr, rate)?;
        let fresh = || {
            Ok((
                OracleAcc { log_q: 0.0, gamma: 0.0, bcjr: None, list_sum: 0.0 },
                (),
            ))
        };
        let trial = |i: u64, _: &mut (), acc: &mut OracleAcc| -> Result<()> {
            let mut rng = trial_rng(cfg.seed, i);
            let msg: Vec<u8> = (0..spec.k()).map(|_| rng.random_range(0..2u8)).collect();
            let c = crate::code::encode(&msg, &spec)?;
            let frame = transmit(&c, &params, &mut rng);
            let bf = brute_force_reference(&spec, &frame)?;
            let r = scl_decode(&frame, &spec, full)?;
            acc.log_q = acc.log_q.max((r.log_q_star - bf.log_q_u).abs());
            let sum: f64 = r.candidates.iter().map(|c| (c.log_q - r.log_q_star).exp()).sum();
            acc.gamma = acc.gamma.max((sum - 1.0).abs());
            let ls = bitwise_app_listsum(&CodewordList::from_result(&r), &frame, f64::INFINITY)?;
            acc.list_sum = acc.list_sum.max(max_abs_diff(&ls, &bf.app));
            if let Some(t) = &trellis {
                let d = max_abs_diff(&bcjr_app(t, &frame)?, &bf.app);
                acc.bcjr = Some(acc.bcjr.map_or(d, |b: f64| b.max(d)));
            }
            Ok(())
        };
        let (acc, frames) = run_trials(&cfg.stopping, cfg.batch_size, fresh, trial, |_| false)?;
        let pass = acc.log_q < ORACLE_TOL_LOG_Q
            && acc.gamma < ORACLE_TOL_LOG_Q
            && acc.list_sum < ORACLE_TOL_APP
            && acc.bcjr.is_none_or(|b| b < ORACLE_TOL_APP);
        rows.push(OracleRow {
            code: cfg.code.label(),
            ebn0_db: snr,
            frames,
            max_log_q_err: acc.log_q,
            max_gamma_sum_err: acc.gamma,
            max_bcjr_err: acc.bcjr,
            max_list_sum_err: acc.list_sum,
            pass,
        });
    }
    Ok(rows)
}
