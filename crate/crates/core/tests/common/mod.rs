//! Frozen reference-oracle results and the corpus they were computed on.

#![allow(dead_code)]

use std::collections::BTreeMap;

use pesq_core::testsignal::{conformance_corpus, stereo_corpus, CorpusPair};
use pesq_core::{encode_wav, Mode, WavEncoding};
use serde::Deserialize;
use sha2::{Digest, Sha256};

/// Agreement required between our scores and the reference binary.
pub const ORACLE_TOL: f64 = 0.005;

#[derive(Debug, Deserialize)]
pub struct FrozenPair {
    pub name: String,
    pub rate: u32,
    pub channels: usize,
    pub ref_sha256: String,
    pub deg_sha256: String,
    #[serde(flatten)]
    pub scores: BTreeMap<String, serde_json::Value>,
}

impl FrozenPair {
    pub fn score(&self, mode: Mode) -> Option<f64> {
        self.scores.get(mode.as_str()).and_then(|v| v.as_f64())
    }

    pub fn crude_delay(&self) -> Option<i64> {
        self.scores.get("crude_delay").and_then(|v| v.as_i64())
    }

    /// `(start, end, delay)` per utterance.
    pub fn utterances(&self) -> Option<Vec<(i64, i64, i64)>> {
        let list = self.scores.get("utterances")?.as_array()?;
        list.iter()
            .map(|u| {
                let u = u.as_array()?;
                Some((u[0].as_i64()?, u[1].as_i64()?, u[2].as_i64()?))
            })
            .collect()
    }
}

#[derive(Deserialize)]
struct Fixture {
    pairs: Vec<FrozenPair>,
}

pub fn frozen() -> Vec<FrozenPair> {
    let text = include_str!("../fixtures/oracle_scores.json");
    serde_json::from_str::<Fixture>(text).expect("valid fixture").pairs
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// The generated pair matches, byte for byte, the files the oracle scored.
pub fn same_input(pair: &CorpusPair, frozen: &FrozenPair) -> bool {
    pair.name == frozen.name
        && sha256_hex(&encode_wav(&pair.reference, WavEncoding::Pcm16)) == frozen.ref_sha256
        && sha256_hex(&encode_wav(&pair.degraded, WavEncoding::Pcm16)) == frozen.deg_sha256
}

/// Generated corpus (mono pairs then stereo pairs) zipped with the fixture.
pub fn corpus_with_oracle() -> Vec<(CorpusPair, FrozenPair)> {
    let generated: Vec<CorpusPair> = conformance_corpus().into_iter().chain(stereo_corpus()).collect();
    let frozen = frozen();
    assert_eq!(generated.len(), frozen.len(), "fixture and corpus sizes differ");
    generated.into_iter().zip(frozen).collect()
}
