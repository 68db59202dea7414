use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pesq_core::testsignal::{conformance_corpus, stereo_corpus, CorpusPair};
use pesq_core::{write_wav, Signal, WavEncoding};
use serde_json::Value;

fn pesq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pesq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_pair(dir: &Path, pair: &CorpusPair) -> (String, String) {
    let r = dir.join(format!("{}_ref.wav", pair.name));
    let d = dir.join(format!("{}_deg.wav", pair.name));
    write_wav(&r, &pair.reference, WavEncoding::Pcm16).unwrap();
    write_wav(&d, &pair.degraded, WavEncoding::Pcm16).unwrap();
    (r.display().to_string(), d.display().to_string())
}

fn frozen_score(name: &str, mode: &str) -> f64 {
    let text = include_str!("../../core/tests/fixtures/oracle_scores.json");
    let v: Value = serde_json::from_str(text).unwrap();
    let pair = v["pairs"]
        .as_array()
        .unwrap()
        .iter()
        .find(|p| p["name"] == name)
        .unwrap();
    pair[mode].as_f64().unwrap()
}

#[test]
fn identity_pair_prints_4_500() {
    let dir = tempfile::tempdir().unwrap();
    let (r, _) = write_pair(dir.path(), &conformance_corpus()[0]);
    let o = pesq(&["score", "--ref", &r, "--deg", &r, "--rate", "8000", "--mode", "nb-raw"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "4.500 nb-raw\n");
}

#[test]
fn wideband_at_8_khz_is_a_flag_error() {
    let o = pesq(&[
        "score", "--ref", "a.wav", "--deg", "b.wav", "--rate", "8000", "--mode", "wb",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("wideband requires 16000 Hz"), "{}", stderr(&o));
}

#[test]
fn mode_has_no_default() {
    let o = pesq(&["score", "--ref", "a.wav", "--deg", "b.wav", "--rate", "8000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--mode"));
    let o = pesq(&[
        "score", "--ref", "a.wav", "--deg", "b.wav", "--rate", "44100", "--mode", "nb-raw",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scoring_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let (r, _) = write_pair(dir.path(), &conformance_corpus()[0]);
    let silent = dir.path().join("silent.wav");
    write_wav(&silent, &Signal::mono(8000, vec![0.0; 32000]), WavEncoding::Pcm16).unwrap();
    let s = silent.display().to_string();
    let o = pesq(&["score", "--ref", &r, "--deg", &s, "--rate", "8000", "--mode", "nb-lqo"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("silent input"));
    let o = pesq(&[
        "score",
        "--ref",
        &r,
        "--deg",
        "nowhere.wav",
        "--rate",
        "8000",
        "--mode",
        "nb-lqo",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = pesq(&["score", "--ref", &r, "--deg", &r, "--rate", "16000", "--mode", "nb-lqo"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("sample rate mismatch"));
}

#[test]
fn conformance_pairs_match_the_reference_binary() {
    let dir = tempfile::tempdir().unwrap();
    for pair in conformance_corpus()
        .iter()
        .filter(|p| p.reference.rate() == 16000)
        .step_by(3)
    {
        let (r, d) = write_pair(dir.path(), pair);
        for mode in ["wb", "wb-c2"] {
            let o = pesq(&[
                "score", "--ref", &r, "--deg", &d, "--rate", "16000", "--mode", mode, "--format", "json",
            ]);
            assert!(o.status.success(), "{}", stderr(&o));
            let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
            let got = v["score"].as_f64().unwrap();
            let expected = frozen_score(&pair.name, mode);
            assert!(
                (got - expected).abs() <= 0.005,
                "{} {mode}: {got} vs {expected}",
                pair.name
            );
            assert_eq!(v["mode"], mode);
        }
    }
}

#[test]
fn text_output_has_three_decimals_and_the_mode() {
    let dir = tempfile::tempdir().unwrap();
    let pair = &conformance_corpus()[3];
    let (r, d) = write_pair(dir.path(), pair);
    let o = pesq(&["score", "--ref", &r, "--deg", &d, "--rate", "8000", "--mode", "nb-lqo"]);
    let out = stdout(&o);
    let (value, mode) = out.trim().split_once(' ').unwrap();
    assert_eq!(mode, "nb-lqo");
    assert_eq!(value.split_once('.').unwrap().1.len(), 3);
}

#[test]
fn stereo_json_lists_channels_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (r, d) = write_pair(dir.path(), &stereo_corpus()[1]);
    let o = pesq(&[
        "score",
        "--ref",
        &r,
        "--deg",
        &d,
        "--rate",
        "16000",
        "--mode",
        "wb-c2",
        "--stereo",
        "per-channel",
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["strategy"], "per-channel");
    assert_eq!(v["mode"], "wb-c2");
    let channels = v["per_channel"].as_array().unwrap();
    assert_eq!(channels.len(), 2);
    let mean = (channels[0].as_f64().unwrap() + channels[1].as_f64().unwrap()) / 2.0;
    assert_eq!(v["score"].as_f64().unwrap(), mean);
    let again = serde_json::to_string_pretty(&v).unwrap();
    let reparsed: Value = serde_json::from_str(&again).unwrap();
    assert_eq!(reparsed, v);
    assert_eq!(serde_json::to_string_pretty(&reparsed).unwrap(), again);
}

#[test]
fn interleave_prints_a_notice_and_matches_the_reference() {
    let dir = tempfile::tempdir().unwrap();
    let pair = &stereo_corpus()[2];
    let (r, d) = write_pair(dir.path(), pair);
    let o = pesq(&[
        "score",
        "--ref",
        &r,
        "--deg",
        &d,
        "--rate",
        "16000",
        "--mode",
        "wb",
        "--stereo",
        "interleave",
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("interleave"));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["score"].as_f64().unwrap() - frozen_score(&pair.name, "wb")).abs() <= 0.005);
    assert!(v.get("per_channel").is_none());
}

fn write_manifest(dir: &Path, pairs: &[CorpusPair]) -> PathBuf {
    let mut text = String::from("ref,deg\n");
    for p in pairs {
        let (r, d) = write_pair(dir, p);
        text.push_str(&format!("{r},{d}\n"));
    }
    let path = dir.join("manifest.csv");
    std::fs::write(&path, text).unwrap();
    path
}

fn batch(manifest: &Path, mode: &str, out: &Path) -> Output {
    pesq(&[
        "batch",
        "--manifest",
        &manifest.display().to_string(),
        "--mode",
        mode,
        "--out",
        &out.display().to_string(),
    ])
}

#[test]
fn batch_writes_rows_in_manifest_order_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let pairs: Vec<CorpusPair> = conformance_corpus().into_iter().take(3).collect();
    let manifest = write_manifest(dir.path(), &pairs);
    let out = dir.path().join("scores.csv");
    let o = batch(&manifest, "nb-lqo", &out);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("3 scored, 0 failed"));
    let first = std::fs::read(&out).unwrap();
    let text = String::from_utf8(first.clone()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "ref,deg,mode,strategy,score,error");
    assert_eq!(lines.len(), 4);
    for (line, pair) in lines[1..].iter().zip(&pairs) {
        assert!(line.contains(&format!("{}_deg.wav", pair.name)));
        assert!(line.contains("nb-lqo"));
    }
    batch(&manifest, "nb-lqo", &out);
    assert_eq!(std::fs::read(&out).unwrap(), first);
}

#[test]
fn batch_fails_only_when_every_item_fails() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("m.csv");
    std::fs::write(&manifest, "ref,deg\nx.wav,y.wav\n").unwrap();
    let out = dir.path().join("scores.csv");
    let o = batch(&manifest, "nb-raw", &out);
    assert_eq!(o.status.code(), Some(1));
    let pairs: Vec<CorpusPair> = conformance_corpus().into_iter().take(1).collect();
    let good = write_manifest(dir.path(), &pairs);
    let mut text = std::fs::read_to_string(&good).unwrap();
    text.push_str("x.wav,y.wav\n");
    std::fs::write(&good, text).unwrap();
    let o = batch(&good, "nb-raw", &out);
    assert!(o.status.success());
    assert!(stdout(&o).contains("1 scored, 1 failed"));
    assert!(stderr(&o).contains("y.wav"));
}

#[test]
fn corrigendum2_comparison_through_batch_and_compare() {
    let dir = tempfile::tempdir().unwrap();
    let pairs: Vec<CorpusPair> = conformance_corpus()
        .into_iter()
        .filter(|p| p.reference.rate() == 16000)
        .collect();
    let manifest = write_manifest(dir.path(), &pairs);
    let (a, b) = (dir.path().join("wb.csv"), dir.path().join("c2.csv"));
    assert!(batch(&manifest, "wb", &a).status.success());
    assert!(batch(&manifest, "wb-c2", &b).status.success());
    let (scatter, report) = (dir.path().join("scatter.csv"), dir.path().join("report.json"));
    let args = [
        "compare".to_string(),
        "--a".into(),
        a.display().to_string(),
        "--b".into(),
        b.display().to_string(),
        "--scatter".into(),
        scatter.display().to_string(),
        "--report".into(),
        report.display().to_string(),
    ];
    let o = pesq(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 12);
    assert_eq!(v["failures"], 0);
    assert!(v["mean_diff"].as_f64().unwrap() > 0.0);
    assert!(v["max_abs_diff"].as_f64().unwrap() > 0.2);
    assert!(v["pearson_rho"].as_f64().unwrap() > 0.95);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(saved, v);
    let rows = std::fs::read_to_string(&scatter).unwrap();
    assert!(rows.starts_with("label,a,b,diff\n"));
    assert_eq!(rows.lines().count(), 13);

    let o = pesq(&[
        "compare",
        "--a",
        &a.display().to_string(),
        "--b",
        &a.display().to_string(),
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["rmse"].as_f64(), v["max_abs_diff"].as_f64()), (Some(0.0), Some(0.0)));
    assert_eq!(v["pearson_rho"].as_f64(), Some(1.0));
}

#[test]
fn mismatched_score_files_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let pairs: Vec<CorpusPair> = conformance_corpus().into_iter().take(3).collect();
    let manifest = write_manifest(dir.path(), &pairs);
    let a = dir.path().join("a.csv");
    assert!(batch(&manifest, "nb-raw", &a).status.success());
    let text = std::fs::read_to_string(&a).unwrap();
    let b = dir.path().join("b.csv");
    std::fs::write(&b, text.lines().take(3).collect::<Vec<_>>().join("\n") + "\n").unwrap();
    let o = pesq(&[
        "compare",
        "--a",
        &a.display().to_string(),
        "--b",
        &b.display().to_string(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("different numbers of items"));
}

#[test]
fn curve_is_strictly_monotone_between_the_asymptotes() {
    let o = pesq(&["curve", "--kind", "nb"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("raw,mos,diff"));
    let rows: Vec<(f64, f64, f64)> = lines
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (f[0], f[1], f[2])
        })
        .collect();
    assert_eq!(rows.len(), 1001);
    assert!(rows.windows(2).all(|w| w[1].1 > w[0].1));
    assert!(rows
        .iter()
        .all(|r| r.1 > 0.999 && r.1 < 4.999 && (r.2 - (r.1 - r.0)).abs() < 1e-12));
    assert_eq!((rows[0].0, rows[1000].0), (-0.5, 4.5));
}

#[test]
fn curve_single_point_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let o = pesq(&[
        "curve",
        "--kind",
        "wb",
        "--points",
        "1",
        "--from",
        "2.0",
        "--out",
        &out.display().to_string(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let f: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(f[0], 2.0);
    assert_eq!(f[1], pesq_core::map_wb_lqo(2.0));
    assert_eq!(f[2], f[1] - f[0]);
    let o = pesq(&["curve", "--kind", "xx"]);
    assert_eq!(o.status.code(), Some(2));
}
