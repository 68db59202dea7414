//! Planar multi-channel sample buffers and the channel reshaping operations
//! used before scoring.
//!
//! Samples live on the signed 16-bit nominal scale (full scale is 32768)
//! regardless of the storage type. Level alignment inside the scorer assumes
//! that calibration.

use crate::error::{PesqError, Result};
use crate::scalar::Real;

/// Shortest signal accepted by the scoring entry points, in seconds.
pub const MIN_DURATION_SECS: f64 = 0.25;
/// Longest signal accepted by the scoring entry points, in seconds.
pub const MAX_DURATION_SECS: f64 = 64.0;
/// Highest channel count accepted anywhere.
pub const MAX_CHANNELS: usize = 8;

/// Audio buffer with one sample vector per channel.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioSignal<T> {
    rate: u32,
    channels: Vec<Vec<T>>,
}

impl<T: Real> AudioSignal<T> {
    /// Builds a signal from planar channel data.
    pub fn from_channels(rate: u32, channels: Vec<Vec<T>>) -> Result<Self> {
        if channels.is_empty() || channels.len() > MAX_CHANNELS {
            return Err(PesqError::InvalidConfig(format!(
                "channel count {} outside 1..={MAX_CHANNELS}",
                channels.len()
            )));
        }
        let len = channels[0].len();
        if channels.iter().any(|c| c.len() != len) {
            return Err(PesqError::RaggedChannels);
        }
        Ok(Self { rate, channels })
    }

    pub fn mono(rate: u32, samples: Vec<T>) -> Self {
        Self {
            rate,
            channels: vec![samples],
        }
    }

    /// Builds a signal from frame-interleaved samples (`ch0[0], ch1[0], ...`).
    pub fn from_interleaved(rate: u32, channel_count: usize, samples: &[T]) -> Result<Self> {
        if channel_count == 0 || !samples.len().is_multiple_of(channel_count) {
            return Err(PesqError::RaggedChannels);
        }
        let frames = samples.len() / channel_count;
        let mut channels = vec![Vec::with_capacity(frames); channel_count];
        for frame in samples.chunks_exact(channel_count) {
            for (ch, &s) in channels.iter_mut().zip(frame) {
                ch.push(s);
            }
        }
        Self::from_channels(rate, channels)
    }

    pub fn rate(&self) -> u32 {
        self.rate
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    /// Per-channel length in samples.
    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn duration_secs(&self) -> f64 {
        if self.rate == 0 {
            return 0.0;
        }
        self.len() as f64 / f64::from(self.rate)
    }

    pub fn channel(&self, index: usize) -> &[T] {
        &self.channels[index]
    }

    pub fn channels(&self) -> &[Vec<T>] {
        &self.channels
    }

    /// Samples of a single-channel signal.
    pub fn samples(&self) -> Result<&[T]> {
        if self.channels.len() != 1 {
            return Err(PesqError::NotMono(self.channels.len()));
        }
        Ok(&self.channels[0])
    }

    pub fn into_channels(self) -> Vec<Vec<T>> {
        self.channels
    }

    /// Multiplies every sample by `gain`.
    pub fn scaled(&self, gain: T) -> Self {
        Self {
            rate: self.rate,
            channels: self
                .channels
                .iter()
                .map(|c| c.iter().map(|&s| s * gain).collect())
                .collect(),
        }
    }

    /// Converts the sample storage type.
    pub fn cast<U: Real>(&self) -> AudioSignal<U> {
        AudioSignal {
            rate: self.rate,
            channels: self
                .channels
                .iter()
                .map(|c| c.iter().map(|&s| U::lit(s.as_f64())).collect())
                .collect(),
        }
    }

    /// Frame-interleaved samples (`ch0[0], ch1[0], ch0[1], ...`).
    pub fn interleaved_samples(&self) -> Vec<T> {
        let n = self.len();
        let mut out = Vec::with_capacity(n * self.channels.len());
        for i in 0..n {
            for ch in &self.channels {
                out.push(ch[i]);
            }
        }
        out
    }

    /// Checks the rate and duration limits of the scoring entry points.
    pub fn validate_for_scoring(&self, what: &'static str) -> Result<()> {
        if self.rate != 8000 && self.rate != 16000 {
            return Err(PesqError::InvalidRate(self.rate));
        }
        let seconds = self.duration_secs();
        if !(MIN_DURATION_SECS..=MAX_DURATION_SECS).contains(&seconds) {
            return Err(PesqError::Duration { what, seconds });
        }
        Ok(())
    }
}

/// Passive downmix: the per-sample arithmetic mean across channels.
pub fn downmix_mono<T: Real>(signal: &AudioSignal<T>) -> AudioSignal<T> {
    let channels = signal.channels();
    if channels.len() == 1 {
        return signal.clone();
    }
    let count = T::from_usize_lossy(channels.len());
    let out = (0..signal.len())
        .map(|i| channels.iter().fold(T::zero(), |acc, c| acc + c[i]) / count)
        .collect();
    AudioSignal::mono(signal.rate(), out)
}

/// Flattens a multi-channel signal into one channel of round-robin samples.
///
/// The rate field is kept as-is, so the result is processed as a single
/// channel `channels` times longer than the input.
pub fn interleave<T: Real>(signal: &AudioSignal<T>) -> Result<AudioSignal<T>> {
    if signal.channel_count() < 2 {
        return Err(PesqError::InterleaveMono);
    }
    Ok(AudioSignal::mono(signal.rate(), signal.interleaved_samples()))
}

/// One mono signal per input channel.
pub fn split_channels<T: Real>(signal: &AudioSignal<T>) -> Vec<AudioSignal<T>> {
    signal
        .channels()
        .iter()
        .map(|c| AudioSignal::mono(signal.rate(), c.clone()))
        .collect()
}

/// Reassembles mono signals produced by [`split_channels`].
pub fn join_channels<T: Real>(parts: &[AudioSignal<T>]) -> Result<AudioSignal<T>> {
    let first = parts
        .first()
        .ok_or_else(|| PesqError::InvalidConfig("no channels to join".into()))?;
    let mut channels = Vec::with_capacity(parts.len());
    for p in parts {
        if p.rate() != first.rate() {
            return Err(PesqError::RateMismatch {
                expected: first.rate(),
                actual: p.rate(),
            });
        }
        channels.extend(p.channels().iter().cloned());
    }
    AudioSignal::from_channels(first.rate(), channels)
}
