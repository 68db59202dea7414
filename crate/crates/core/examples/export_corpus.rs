//! Writes the synthetic conformance and stereo corpora as PCM16 WAV files
//! plus a `manifest.csv`, for scoring with external implementations.
//!
//! Usage: cargo run --example export_corpus -- OUT_DIR

use std::path::PathBuf;

use pesq_core::testsignal::{conformance_corpus, stereo_corpus};
use pesq_core::{write_wav, WavEncoding};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = PathBuf::from(std::env::args().nth(1).ok_or("usage: export_corpus OUT_DIR")?);
    std::fs::create_dir_all(&out)?;
    let mut manifest = csv::Writer::from_path(out.join("manifest.csv"))?;
    manifest.write_record(["ref", "deg", "rate", "channels"])?;
    for pair in conformance_corpus().into_iter().chain(stereo_corpus()) {
        let r = format!("{}_ref.wav", pair.name);
        let d = format!("{}_deg.wav", pair.name);
        write_wav(out.join(&r), &pair.reference, WavEncoding::Pcm16)?;
        write_wav(out.join(&d), &pair.degraded, WavEncoding::Pcm16)?;
        let rate = pair.reference.rate().to_string();
        let channels = pair.reference.channel_count().to_string();
        manifest.write_record([r.as_str(), d.as_str(), rate.as_str(), channels.as_str()])?;
    }
    manifest.flush()?;
    Ok(())
}
