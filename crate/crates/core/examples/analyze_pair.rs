//! Prints the score, crude delay and utterance table of one pair in the
//! same line format as the reference oracle driver.
//!
//! Usage: cargo run --example analyze_pair -- MODE REF.wav DEG.wav [f32]

use pesq_core::{analyze, read_wav, AudioSignal, Mode, PesqAnalysis, Real};

fn run<T: Real>(mode: Mode, r: &str, d: &str) -> Result<PesqAnalysis, Box<dyn std::error::Error>> {
    let reference: AudioSignal<T> = read_wav(r)?;
    let degraded: AudioSignal<T> = read_wav(d)?;
    let cfg = mode.config(reference.rate())?;
    Ok(analyze(&reference, &degraded, &cfg)?)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.len() < 3 {
        return Err("usage: analyze_pair MODE REF.wav DEG.wav [f32]".into());
    }
    let mode: Mode = args[0].parse()?;
    let a = if args.get(3).map(String::as_str) == Some("f32") {
        run::<f32>(mode, &args[1], &args[2])?
    } else {
        run::<f64>(mode, &args[1], &args[2])?
    };
    if let Some(raw) = a.score.raw {
        println!("raw {:.9}", raw.value());
    }
    if let Some(mos) = a.score.mos_lqo {
        println!("mos_lqo {mos:.9}");
    }
    println!("crude_delay {}", a.alignment.crude_delay);
    for u in &a.alignment.utterances {
        println!("utterance {} {} {} {:.6}", u.start, u.end, u.delay, u.confidence);
    }
    Ok(())
}
