//! Padded working buffers and level alignment.

use crate::config::PesqConfig;
use crate::dsp::{power_of, Spectral};
use crate::error::{PesqError, Result};
use crate::params::RateParams;
use crate::scalar::Real;
use crate::signal::AudioSignal;
use crate::tables::{ALIGN_FILTER_DB, TARGET_AVG_POWER};

/// A signal with the leading/trailing silence and tail padding every stage
/// indexes into. `nsamples` counts the signal plus both silences; `data` also
/// holds the padding and may be extended with zeros.
#[derive(Debug, Clone)]
pub(crate) struct Padded<T> {
    pub data: Vec<T>,
    pub nsamples: usize,
}

impl<T: Real> Padded<T> {
    pub fn new(samples: &[T], p: &RateParams) -> Self {
        let off = p.offset();
        let mut data = vec![T::zero(); samples.len() + 2 * off + p.padding()];
        data[off..off + samples.len()].copy_from_slice(samples);
        Self {
            data,
            nsamples: samples.len() + 2 * off,
        }
    }

    /// The original sample span.
    pub fn signal_part(&self, p: &RateParams) -> &[T] {
        &self.data[p.offset()..self.nsamples - p.offset()]
    }

    pub fn extend_to(&mut self, len: usize) {
        if self.data.len() < len {
            self.data.resize(len, T::zero());
        }
    }
}

/// Mean power of the 350-3250 Hz band, normalised over the longer signal.
pub(crate) fn band_power<T: Real>(sig: &Padded<T>, p: &RateParams, max_n: usize, fft: &mut Spectral<T>) -> f64 {
    let (off, pad) = (p.offset(), p.padding());
    let n = sig.nsamples;
    let mut copy = sig.data[..n + pad].to_vec();
    fft.filter_by_curve(&mut copy, off, n - 2 * off + pad, p.rate, &ALIGN_FILTER_DB);
    power_of(&copy, off, n - off + pad, max_n - 2 * off + pad)
}

/// Scales `sig` to the target listening level and returns the gain.
pub(crate) fn fix_power_level<T: Real>(
    sig: &mut Padded<T>,
    p: &RateParams,
    max_n: usize,
    fft: &mut Spectral<T>,
    what: &'static str,
) -> Result<T> {
    let power = band_power(sig, p, max_n, fft);
    if !power.is_finite() || power <= 0.0 {
        return Err(PesqError::SilentInput(what));
    }
    let gain = T::lit((TARGET_AVG_POWER / power).sqrt());
    let n = sig.nsamples;
    for s in &mut sig.data[..n] {
        *s = *s * gain;
    }
    Ok(gain)
}

/// Output of [`fix_levels`].
#[derive(Debug, Clone, PartialEq)]
pub struct LevelAlignment<T> {
    pub reference: AudioSignal<T>,
    pub degraded: AudioSignal<T>,
    pub reference_gain: T,
    pub degraded_gain: T,
}

/// Scales both signals so that their mean power in the 350-3250 Hz band
/// matches the model's listening level.
pub fn fix_levels<T: Real>(
    reference: &AudioSignal<T>,
    degraded: &AudioSignal<T>,
    cfg: &PesqConfig,
) -> Result<LevelAlignment<T>> {
    cfg.validate()?;
    let p = RateParams::new(cfg.rate)?;
    let r = reference.samples()?;
    let d = degraded.samples()?;
    check_rate(reference, cfg)?;
    check_rate(degraded, cfg)?;
    let mut fft = Spectral::new();
    let mut pr = Padded::new(r, &p);
    let mut pd = Padded::new(d, &p);
    let max_n = pr.nsamples.max(pd.nsamples);
    let reference_gain = fix_power_level(&mut pr, &p, max_n, &mut fft, "reference")?;
    let degraded_gain = fix_power_level(&mut pd, &p, max_n, &mut fft, "degraded")?;
    Ok(LevelAlignment {
        reference: AudioSignal::mono(cfg.rate, pr.signal_part(&p).to_vec()),
        degraded: AudioSignal::mono(cfg.rate, pd.signal_part(&p).to_vec()),
        reference_gain,
        degraded_gain,
    })
}

pub(crate) fn check_rate<T: Real>(signal: &AudioSignal<T>, cfg: &PesqConfig) -> Result<()> {
    if signal.rate() != cfg.rate {
        return Err(PesqError::RateMismatch {
            expected: cfg.rate,
            actual: signal.rate(),
        });
    }
    Ok(())
}
