//! Deterministic speech-like test material and degradations, used by the
//! conformance tests and the corpus export tool.
//!
//! All generated samples are integers on the 16-bit scale so that writing
//! them as PCM16 is lossless.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dsp::biquad;
use crate::signal::AudioSignal;

fn quantize(x: &mut [f64]) {
    for v in x.iter_mut() {
        *v = v.round().clamp(-32768.0, 32767.0);
    }
}

fn rms(x: &[f64]) -> f64 {
    (x.iter().map(|v| v * v).sum::<f64>() / x.len().max(1) as f64).sqrt()
}

/// RBJ band-pass (constant peak gain) as `[b0, b1, b2, a1, a2]`.
fn bandpass(rate: f64, f0: f64, q: f64) -> [f64; 5] {
    let w = std::f64::consts::TAU * f0 / rate;
    let alpha = w.sin() / (2.0 * q);
    let a0 = 1.0 + alpha;
    [alpha / a0, 0.0, -alpha / a0, -2.0 * w.cos() / a0, (1.0 - alpha) / a0]
}

/// RBJ low-pass as `[b0, b1, b2, a1, a2]`.
fn lowpass(rate: f64, f0: f64, q: f64) -> [f64; 5] {
    let w = std::f64::consts::TAU * f0 / rate;
    let alpha = w.sin() / (2.0 * q);
    let c = w.cos();
    let a0 = 1.0 + alpha;
    let b = (1.0 - c) / 2.0 / a0;
    [b, 2.0 * b, b, -2.0 * c / a0, (1.0 - alpha) / a0]
}

/// Speech-like signal: a voiced/unvoiced source through three moving
/// formant resonators, gated by syllable-rate envelopes with pauses.
/// Active-speech RMS is about 2500 on the 16-bit scale.
pub fn speech_like(rate: u32, seconds: f64, seed: u64) -> Vec<f64> {
    let fs = f64::from(rate);
    let n = (seconds * fs) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let white = Normal::new(0.0, 1.0).expect("unit normal");
    let mut out = vec![0.0; n];

    // Lead-in silence, then syllables until 300 ms before the end.
    let mut pos = (rng.gen_range(0.15..0.3) * fs) as usize;
    let tail = (0.3 * fs) as usize;
    let mut syllables = 0;
    while pos + tail < n {
        let len = ((rng.gen_range(0.12..0.32) * fs) as usize).min(n - tail - pos);
        let f0 = rng.gen_range(95.0..230.0);
        let voiced = rng.gen_bool(0.8);
        let formants: [f64; 3] = [
            rng.gen_range(300.0..850.0),
            rng.gen_range(900.0..2300.0),
            rng.gen_range(2300.0..3300.0),
        ];
        let mut source = vec![0.0; len];
        let mut phase = 0.0f64;
        for (i, s) in source.iter_mut().enumerate() {
            let glide = 1.0 + 0.1 * (i as f64 / len as f64 - 0.5);
            phase += f0 * glide / fs;
            let pulse = if voiced && phase >= 1.0 {
                phase -= 1.0;
                1.0
            } else {
                0.0
            };
            *s = if voiced {
                pulse + 0.05 * white.sample(&mut rng)
            } else {
                0.3 * white.sample(&mut rng)
            };
        }
        let mut syllable = vec![0.0; len];
        for (k, &f) in formants.iter().enumerate() {
            let mut band = source.clone();
            biquad(&mut band, &bandpass(fs, f.min(0.45 * fs), 6.0 + 2.0 * k as f64));
            let g = [1.0, 0.6, 0.3][k];
            for (o, b) in syllable.iter_mut().zip(&band) {
                *o += g * b;
            }
        }
        let level = rms(&syllable).max(1e-9);
        let gain = rng.gen_range(1800.0..3200.0) / level;
        for (i, v) in syllable.iter().enumerate() {
            let env = (std::f64::consts::PI * i as f64 / len as f64).sin().powf(0.6);
            out[pos + i] += gain * env * v;
        }
        syllables += 1;
        let gap = if syllables % 4 == 0 {
            rng.gen_range(0.25..0.5)
        } else {
            rng.gen_range(0.03..0.15)
        };
        pos += len + (gap * fs) as usize;
    }
    quantize(&mut out);
    out
}

/// A signal processing step applied to the reference to get a degraded copy.
#[derive(Debug, Clone, PartialEq)]
pub enum Degradation {
    /// White Gaussian noise at the given SNR over the whole signal.
    Noise {
        snr_db: f64,
    },
    /// Fourth-order Butterworth low-pass.
    Lowpass {
        cutoff_hz: f64,
    },
    /// Symmetric hard clipping at a fraction of the peak.
    Clip {
        fraction: f64,
    },
    /// Prepends silence and drops the same amount from the end.
    Delay {
        ms: f64,
    },
    Gain {
        factor: f64,
    },
    Chain(Vec<Degradation>),
}

impl Degradation {
    /// Short name used for corpus file names.
    pub fn label(&self) -> String {
        match self {
            Degradation::Noise { snr_db } => format!("snr{snr_db:.0}"),
            Degradation::Lowpass { cutoff_hz } => format!("lp{cutoff_hz:.0}"),
            Degradation::Clip { fraction } => format!("clip{:.0}", fraction * 100.0),
            Degradation::Delay { ms } => format!("delay{ms:.0}"),
            Degradation::Gain { factor } => format!("gain{:.0}", factor * 100.0),
            Degradation::Chain(steps) => steps.iter().map(Degradation::label).collect::<Vec<_>>().join("-"),
        }
    }

    fn apply_inner(&self, x: &mut Vec<f64>, rate: u32, rng: &mut ChaCha8Rng) {
        let fs = f64::from(rate);
        match self {
            Degradation::Noise { snr_db } => {
                let sigma = rms(x) / 10f64.powf(snr_db / 20.0);
                let noise = Normal::new(0.0, sigma.max(1e-12)).expect("finite sigma");
                for v in x.iter_mut() {
                    *v += noise.sample(rng);
                }
            }
            Degradation::Lowpass { cutoff_hz } => {
                // Butterworth Q values for two cascaded sections.
                for q in [0.541_196_100_146_197, 1.306_562_964_876_376_5] {
                    biquad(x, &lowpass(fs, *cutoff_hz, q));
                }
            }
            Degradation::Clip { fraction } => {
                let peak = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let t = peak * fraction;
                for v in x.iter_mut() {
                    *v = v.clamp(-t, t);
                }
            }
            Degradation::Delay { ms } => {
                let k = ((ms / 1000.0 * fs) as usize).min(x.len());
                let n = x.len();
                x.splice(0..0, std::iter::repeat_n(0.0, k));
                x.truncate(n);
            }
            Degradation::Gain { factor } => {
                for v in x.iter_mut() {
                    *v *= factor;
                }
            }
            Degradation::Chain(steps) => {
                for s in steps {
                    s.apply_inner(x, rate, rng);
                }
            }
        }
    }

    /// Degraded copy of `x`, quantized to integers. `seed` drives the noise.
    pub fn apply(&self, x: &[f64], rate: u32, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005e_ed0f_d15c);
        let mut y = x.to_vec();
        self.apply_inner(&mut y, rate, &mut rng);
        quantize(&mut y);
        y
    }
}

/// One named reference/degraded pair.
#[derive(Debug, Clone)]
pub struct CorpusPair {
    pub name: String,
    pub reference: AudioSignal<f64>,
    pub degraded: AudioSignal<f64>,
}

fn degradation_set(rate: u32) -> Vec<Degradation> {
    use Degradation::*;
    let band_edge = if rate == 8000 { 3400.0 } else { 7000.0 };
    vec![
        Noise { snr_db: 40.0 },
        Noise { snr_db: 20.0 },
        Noise { snr_db: 10.0 },
        Noise { snr_db: 0.0 },
        Lowpass { cutoff_hz: 1500.0 },
        Lowpass {
            cutoff_hz: band_edge * 0.6,
        },
        Clip { fraction: 0.3 },
        Clip { fraction: 0.1 },
        Chain(vec![Delay { ms: 40.0 }, Noise { snr_db: 30.0 }]),
        Chain(vec![Delay { ms: 120.0 }, Noise { snr_db: 15.0 }]),
        Chain(vec![
            Delay { ms: 80.0 },
            Lowpass { cutoff_hz: 2000.0 },
            Noise { snr_db: 25.0 },
        ]),
        Chain(vec![Clip { fraction: 0.2 }, Noise { snr_db: 5.0 }]),
    ]
}

/// The synthetic conformance corpus: twelve degradations of a 4 s
/// speech-like signal at each of 8 and 16 kHz (24 pairs).
pub fn conformance_corpus() -> Vec<CorpusPair> {
    let mut pairs = Vec::new();
    for (r, rate) in [8000u32, 16000].into_iter().enumerate() {
        for (i, deg) in degradation_set(rate).into_iter().enumerate() {
            let seed = 1000 * (r as u64 + 1) + i as u64;
            let reference = speech_like(rate, 4.0, seed);
            let degraded = deg.apply(&reference, rate, seed);
            pairs.push(CorpusPair {
                name: format!("{}k_{:02}_{}", rate / 1000, i, deg.label()),
                reference: AudioSignal::mono(rate, reference),
                degraded: AudioSignal::mono(rate, degraded),
            });
        }
    }
    pairs
}

/// Five 16 kHz stereo pairs whose channels carry different material and
/// different degradations.
pub fn stereo_corpus() -> Vec<CorpusPair> {
    use Degradation::*;
    let cases = [
        (Noise { snr_db: 20.0 }, Noise { snr_db: 10.0 }),
        (Lowpass { cutoff_hz: 3000.0 }, Noise { snr_db: 30.0 }),
        (Clip { fraction: 0.2 }, Clip { fraction: 0.4 }),
        (Noise { snr_db: 5.0 }, Lowpass { cutoff_hz: 5000.0 }),
        (
            Chain(vec![Delay { ms: 60.0 }, Noise { snr_db: 25.0 }]),
            Chain(vec![Delay { ms: 60.0 }, Noise { snr_db: 15.0 }]),
        ),
    ];
    cases
        .into_iter()
        .enumerate()
        .map(|(i, (dl, dr))| {
            let rate = 16000;
            let seed = 5000 + 2 * i as u64;
            let left = speech_like(rate, 3.0, seed);
            let right = speech_like(rate, 3.0, seed + 1);
            let deg_left = dl.apply(&left, rate, seed);
            let deg_right = dr.apply(&right, rate, seed + 1);
            CorpusPair {
                name: format!("stereo_{i:02}_{}_{}", dl.label(), dr.label()),
                reference: AudioSignal::from_channels(rate, vec![left, right]).expect("equal lengths"),
                degraded: AudioSignal::from_channels(rate, vec![deg_left, deg_right]).expect("equal lengths"),
            }
        })
        .collect()
}
