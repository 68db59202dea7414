//! Acceptance report: one PASS/FAIL line per headline criterion.
//!
//! Scores are checked against values frozen from the reference binaries. When
//! `PESQ_REF_BIN` (and optionally `PESQ_REF_C2_BIN`) point at compiled
//! reference binaries, the corpus is also scored live with them.

mod common;

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use common::{corpus_with_oracle, same_input, FrozenPair, ORACLE_TOL};
use pesq_core::mapping::{default_grid, MOS_CEILING, MOS_FLOOR};
use pesq_core::testsignal::{speech_like, CorpusPair, Degradation};
use pesq_core::{
    compare_scores, compute_pesq, map_nb_lqo, map_wb_lqo, mapping_curve, score_multichannel, write_wav, MappingKind,
    Mode, Signal, StereoStrategy, WavEncoding,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rayon::prelude::*;

const RUNTIME_LIMIT_SECS: f64 = 1.0;
const ROBUSTNESS_TOL: f64 = 0.1;
const PROPERTY_CASES: u32 = 1000;

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, ok: bool, name: &str, detail: String) {
        if !ok {
            self.failed += 1;
        }
        println!("[{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn score(pair: &CorpusPair, mode: Mode) -> f64 {
    let cfg = mode.config(pair.reference.rate()).expect("valid mode");
    compute_pesq(&pair.reference, &pair.degraded, &cfg)
        .expect("scorable pair")
        .value()
}

fn modes_for(rate: u32) -> &'static [Mode] {
    if rate == 16000 {
        &Mode::ALL
    } else {
        &[Mode::NbRaw, Mode::NbLqo]
    }
}

/// Largest |ours - frozen| per mode over the mono pairs, plus items checked.
fn frozen_deviation(corpus: &[(CorpusPair, FrozenPair)], modes: &[Mode]) -> (f64, usize, bool) {
    let rows: Vec<(f64, usize)> = corpus
        .par_iter()
        .filter(|(p, _)| p.reference.channel_count() == 1)
        .map(|(pair, frozen)| {
            let mut worst = 0.0f64;
            let mut n = 0;
            for &mode in modes_for(frozen.rate).iter().filter(|m| modes.contains(m)) {
                let expected = frozen.score(mode).expect("frozen score");
                worst = worst.max((score(pair, mode) - expected).abs());
                n += 1;
            }
            (worst, n)
        })
        .collect();
    let inputs_ok = corpus.iter().all(|(p, f)| same_input(p, f));
    let worst = rows.iter().fold(0.0f64, |m, r| m.max(r.0));
    (worst, rows.iter().map(|r| r.1).sum(), inputs_ok)
}

fn parse_oracle(out: &str, key: &str) -> Option<f64> {
    out.lines().find_map(|l| l.strip_prefix(key)?.trim().parse().ok())
}

/// Scores the mono corpus with live reference binaries; returns the largest
/// deviation and the number of scores compared.
fn live_deviation(corpus: &[(CorpusPair, FrozenPair)], bin: &str, modes: &[Mode]) -> Result<(f64, usize), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut n = 0;
    for (pair, frozen) in corpus.iter().filter(|(p, _)| p.reference.channel_count() == 1) {
        let r = dir.path().join(format!("{}_ref.wav", pair.name));
        let d = dir.path().join(format!("{}_deg.wav", pair.name));
        write_wav(&r, &pair.reference, WavEncoding::Pcm16).map_err(|e| e.to_string())?;
        write_wav(&d, &pair.degraded, WavEncoding::Pcm16).map_err(|e| e.to_string())?;
        for &mode in modes_for(frozen.rate).iter().filter(|m| modes.contains(m)) {
            let mut cmd = Command::new(bin);
            cmd.arg(format!("+{}", frozen.rate));
            if matches!(mode, Mode::Wb | Mode::WbC2) {
                cmd.arg("+wb");
            }
            let out = cmd.arg(&r).arg(&d).output().map_err(|e| format!("{bin}: {e}"))?;
            let text = String::from_utf8_lossy(&out.stdout);
            let key = if mode == Mode::NbRaw { "raw" } else { "mos_lqo" };
            let expected = parse_oracle(&text, key).ok_or_else(|| format!("{bin}: no {key} for {}", pair.name))?;
            worst = worst.max((score(pair, mode) - expected).abs());
            n += 1;
        }
    }
    Ok((worst, n))
}

fn live_check(report: &mut Report, corpus: &[(CorpusPair, FrozenPair)], var: &str, modes: &[Mode], name: &str) {
    let Ok(bin) = std::env::var(var) else {
        println!("[SKIP] {name} (live): {var} not set, frozen reference values used");
        return;
    };
    if !Path::new(&bin).exists() {
        report.line(false, &format!("{name} (live)"), format!("{var}={bin} does not exist"));
        return;
    }
    match live_deviation(corpus, &bin, modes) {
        Ok((worst, n)) => report.line(
            worst <= ORACLE_TOL,
            &format!("{name} (live)"),
            format!("{n} scores, max |ours - {bin}| = {worst:.2e} (limit {ORACLE_TOL})"),
        ),
        Err(e) => report.line(false, &format!("{name} (live)"), e),
    }
}

/// Slowest wall-clock time for one 10 s pair over the narrowband and
/// wideband paths.
fn slowest_ten_second_pair() -> f64 {
    let mut slowest = 0.0f64;
    for (rate, mode) in [(8000, Mode::NbLqo), (16000, Mode::Wb)] {
        let reference = speech_like(rate, 10.0, 77);
        let degraded = Degradation::Chain(vec![
            Degradation::Delay { ms: 50.0 },
            Degradation::Noise { snr_db: 15.0 },
        ])
        .apply(&reference, rate, 77);
        let r = Signal::mono(rate, reference);
        let d = Signal::mono(rate, degraded);
        let cfg = mode.config(rate).unwrap();
        let start = Instant::now();
        compute_pesq(&r, &d, &cfg).expect("scorable pair");
        slowest = slowest.max(start.elapsed().as_secs_f64());
    }
    slowest
}

fn oracle_conformance(report: &mut Report, corpus: &[(CorpusPair, FrozenPair)]) {
    let modes = [Mode::NbRaw, Mode::NbLqo, Mode::Wb];
    let (worst, n, inputs_ok) = frozen_deviation(corpus, &modes);
    let pairs = corpus.iter().filter(|(p, _)| p.reference.channel_count() == 1).count();
    let secs = slowest_ten_second_pair();
    report.line(
        inputs_ok && pairs >= 20 && worst <= ORACLE_TOL && secs <= RUNTIME_LIMIT_SECS,
        "oracle conformance",
        format!(
            "{pairs} pairs, {n} nb-raw/nb-lqo/wb scores, max |diff| = {worst:.2e} (limit {ORACLE_TOL}); \
             10 s pair in {secs:.3} s (limit {RUNTIME_LIMIT_SECS} s)"
        ),
    );
    live_check(report, corpus, "PESQ_REF_BIN", &modes, "oracle conformance");
}

fn wideband_pairs(corpus: &[(CorpusPair, FrozenPair)]) -> Vec<&CorpusPair> {
    corpus
        .iter()
        .map(|(p, _)| p)
        .filter(|p| p.reference.rate() == 16000 && p.reference.channel_count() == 1)
        .collect()
}

fn corrigendum2(report: &mut Report, corpus: &[(CorpusPair, FrozenPair)]) -> (Vec<f64>, Vec<f64>) {
    let (worst, n, inputs_ok) = frozen_deviation(corpus, &[Mode::WbC2]);
    let pairs = wideband_pairs(corpus);
    let wb: Vec<f64> = pairs.par_iter().map(|p| score(p, Mode::Wb)).collect();
    let c2: Vec<f64> = pairs.par_iter().map(|p| score(p, Mode::WbC2)).collect();
    let mean_shift = c2.iter().zip(&wb).map(|(c, w)| c - w).sum::<f64>() / wb.len() as f64;
    report.line(
        inputs_ok && worst <= ORACLE_TOL && mean_shift > 0.0,
        "Corrigendum 2",
        format!(
            "{n} wb-c2 scores, max |diff| = {worst:.2e} (limit {ORACLE_TOL}); mean(wb-c2 - wb) = {mean_shift:+.3} (> 0)"
        ),
    );
    live_check(report, corpus, "PESQ_REF_C2_BIN", &[Mode::WbC2], "Corrigendum 2");
    (wb, c2)
}

fn version_difference(report: &mut Report, wb: &[f64], c2: &[f64]) {
    match compare_scores(wb, c2) {
        Ok(s) => {
            let rho = s.pearson_rho.unwrap_or(f64::NAN);
            report.line(
                s.max_abs_diff > 0.2 && rho > 0.95,
                "version difference",
                format!(
                    "compare(wb, wb-c2) over {} pairs: max_abs_diff = {:.3} (> 0.2), rho = {rho:.4} (> 0.95), rmse = {:.3}",
                    s.n, s.max_abs_diff, s.rmse
                ),
            );
        }
        Err(e) => report.line(false, "version difference", e.to_string()),
    }
}

fn prepend_silence(signal: &Signal, ms: f64) -> Signal {
    let n = (ms * signal.rate() as f64 / 1000.0).round() as usize;
    let mut samples = vec![0.0; n];
    samples.extend_from_slice(signal.channel(0));
    Signal::mono(signal.rate(), samples)
}

fn property_failures(cases: u32) -> Vec<String> {
    let mut failures = Vec::new();
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    let monotone = runner.run(&(-2.0f64..6.0, 1e-6f64..2.0), |(x, step)| {
        let y = x + step;
        for kind in [MappingKind::Narrowband, MappingKind::Wideband] {
            let (mx, my) = (kind.map(x), kind.map(y));
            prop_assert!(mx < my, "{kind:?} not increasing at {x}, {y}");
            prop_assert!(mx > MOS_FLOOR && my < MOS_CEILING);
        }
        Ok(())
    });
    if let Err(e) = monotone {
        failures.push(format!("mapping monotonicity: {e}"));
    }
    let vectors = (2usize..40).prop_flat_map(|n| {
        (
            proptest::collection::vec(-1.0f64..5.0, n),
            proptest::collection::vec(-1.0f64..5.0, n),
        )
    });
    let symmetric = runner.run(&vectors, |(a, b)| {
        let ab = compare_scores(&a, &b).unwrap();
        let ba = compare_scores(&b, &a).unwrap();
        prop_assert_eq!(ab.n, ba.n);
        prop_assert!((ab.rmse - ba.rmse).abs() <= 1e-12);
        prop_assert!((ab.mean_diff + ba.mean_diff).abs() <= 1e-12);
        prop_assert_eq!(ab.max_abs_diff, ba.max_abs_diff);
        match (ab.pearson_rho, ba.pearson_rho) {
            (Some(x), Some(y)) => prop_assert!((x - y).abs() <= 1e-12),
            (x, y) => prop_assert_eq!(x, y),
        }
        let aa = compare_scores(&a, &a).unwrap();
        prop_assert_eq!((aa.rmse, aa.mean_diff, aa.max_abs_diff), (0.0, 0.0, 0.0));
        Ok(())
    });
    if let Err(e) = symmetric {
        failures.push(format!("compare symmetry: {e}"));
    }
    failures
}

fn identity_suite(report: &mut Report, corpus: &[(CorpusPair, FrozenPair)]) {
    let mono: Vec<&CorpusPair> = corpus
        .iter()
        .map(|(p, _)| p)
        .filter(|p| p.reference.channel_count() == 1)
        .collect();
    let not_exact: Vec<String> = mono
        .par_iter()
        .filter_map(|p| {
            let cfg = Mode::NbRaw.config(p.reference.rate()).unwrap();
            let v = compute_pesq(&p.reference, &p.reference, &cfg).unwrap().value();
            (v != 4.5).then(|| format!("{} gives {v}", p.name))
        })
        .collect();

    let probes: Vec<(&CorpusPair, Mode)> = mono
        .iter()
        .filter(|p| p.name.contains("_01_") || p.name.contains("_04_") || p.name.contains("_08_"))
        .map(|&p| {
            (
                p,
                if p.reference.rate() == 16000 {
                    Mode::Wb
                } else {
                    Mode::NbLqo
                },
            )
        })
        .collect();
    let shift = |variants: &(dyn Fn(&Signal) -> Vec<Signal> + Sync)| -> f64 {
        probes
            .par_iter()
            .map(|(p, mode)| {
                let cfg = mode.config(p.reference.rate()).unwrap();
                let base = compute_pesq(&p.reference, &p.degraded, &cfg).unwrap().value();
                variants(&p.degraded)
                    .iter()
                    .map(|d| (compute_pesq(&p.reference, d, &cfg).unwrap().value() - base).abs())
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    };
    let delay_shift = shift(&|d| {
        [20.0, 40.0, 60.0, 80.0, 100.0]
            .iter()
            .map(|&ms| prepend_silence(d, ms))
            .collect()
    });
    let gain_shift = shift(&|d| [0.5, 0.7, 1.4, 2.0].iter().map(|&g| d.scaled(g)).collect());
    let props = property_failures(PROPERTY_CASES);

    report.line(
        not_exact.is_empty() && delay_shift <= ROBUSTNESS_TOL && gain_shift <= ROBUSTNESS_TOL && props.is_empty(),
        "identity invariants",
        format!(
            "nb-raw(s, s) = 4.5 exactly on {}/{} signals; max shift {delay_shift:.4} for 0-100 ms prepended silence, \
             {gain_shift:.4} for gains 0.5-2 (limit {ROBUSTNESS_TOL}); mapping and compare properties on {PROPERTY_CASES} \
             cases: {}",
            mono.len() - not_exact.len(),
            mono.len(),
            if props.is_empty() { "ok".to_string() } else { props.join("; ") }
        ),
    );
}

fn mapping_curve_shape(report: &mut Report) {
    let curve = mapping_curve(MappingKind::Narrowband, &default_grid()).unwrap();
    let strictly_monotone = curve.windows(2).all(|w| w[1].mos > w[0].mos);
    let inside = curve.iter().all(|p| p.mos > MOS_FLOOR && p.mos < MOS_CEILING);
    let low = map_nb_lqo(-100.0);
    let high = map_nb_lqo(100.0);
    let asymptotes = (low - MOS_FLOOR).abs() < 1e-9 && (MOS_CEILING - high).abs() < 1e-9;
    let mid = MappingKind::Wideband.midpoint();
    let mid_err = (map_wb_lqo(mid) - (MOS_FLOOR + MOS_CEILING) / 2.0).abs();
    report.line(
        strictly_monotone && inside && asymptotes && mid_err <= 1e-12,
        "mapping curve",
        format!(
            "nb curve of {} points strictly monotone: {strictly_monotone}; asymptotes {low:.9} / {high:.9}; \
             wb midpoint error {mid_err:.1e} (limit 1e-12)",
            curve.len()
        ),
    );
}

fn interleave_quirk(report: &mut Report, corpus: &[(CorpusPair, FrozenPair)]) {
    let stereo: Vec<&(CorpusPair, FrozenPair)> = corpus
        .iter()
        .filter(|(p, _)| p.reference.channel_count() == 2)
        .collect();
    let worst = stereo
        .par_iter()
        .map(|(pair, frozen)| {
            Mode::ALL
                .iter()
                .map(|&mode| {
                    let cfg = mode.config(16000).unwrap();
                    let got = score_multichannel(&pair.reference, &pair.degraded, &cfg, StereoStrategy::Interleave)
                        .unwrap()
                        .score;
                    (got - frozen.score(mode).unwrap()).abs()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    let inputs_ok = stereo.iter().all(|(p, f)| same_input(p, f));
    report.line(
        inputs_ok && stereo.len() >= 5 && worst <= ORACLE_TOL,
        "interleave quirk",
        format!(
            "{} stereo pairs in all four modes, max |diff| against the reference binary on 2-channel files = {worst:.2e} \
             (limit {ORACLE_TOL})",
            stereo.len()
        ),
    );
}

fn main() -> ExitCode {
    let corpus = corpus_with_oracle();
    let mut report = Report { failed: 0 };
    oracle_conformance(&mut report, &corpus);
    let (wb, c2) = corrigendum2(&mut report, &corpus);
    version_difference(&mut report, &wb, &c2);
    identity_suite(&mut report, &corpus);
    mapping_curve_shape(&mut report);
    interleave_quirk(&mut report, &corpus);
    println!("[SKIP] extended corpus: the ODAQ dataset is not available offline; optional criterion not evaluated");
    if report.failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", report.failed);
        ExitCode::FAILURE
    }
}
