//! Bark-domain perceptual representation: power spectra warped to the Bark
//! scale, compensation, loudness densities and per-frame disturbances.

use rustfft::num_complex::Complex;

use crate::dsp::{hann, Spectral};
use crate::error::Result;
use crate::params::RateParams;
use crate::scalar::Real;
use crate::tables::{FREQ_COMP_MAX, FREQ_COMP_MIN, MAX_GAIN_SCALE, MIN_GAIN_SCALE, ZWICKER_POWER};

/// Band powers of one frame on the model's Bark scale.
#[derive(Debug, Clone, PartialEq)]
pub struct BarkSpectrum<T> {
    pub bands: Vec<T>,
}

/// Disturbance of one frame.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DisturbanceFrame {
    /// Symmetric disturbance.
    pub d_sym: f64,
    /// Asymmetry-weighted disturbance.
    pub d_asym: f64,
    /// Whether the reference frame is above the audibility threshold.
    pub audible: bool,
}

/// Per-frame disturbances of a scored pair.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DisturbanceSeries {
    pub frames: Vec<DisturbanceFrame>,
}

/// Frame-level stages of the perceptual model for one sample rate.
pub struct PerceptualModel<T: Real> {
    pub(crate) p: RateParams,
    pub(crate) window: Vec<T>,
    pub(crate) fft: Spectral<T>,
}

impl<T: Real> PerceptualModel<T> {
    pub fn new(rate: u32) -> Result<Self> {
        let p = RateParams::new(rate)?;
        Ok(Self {
            window: hann(p.nf),
            fft: Spectral::new(),
            p,
        })
    }

    /// Samples per analysis frame (32 ms).
    pub fn frame_len(&self) -> usize {
        self.p.nf
    }

    /// Number of Bark bands (42 at 8 kHz, 49 at 16 kHz).
    pub fn band_count(&self) -> usize {
        self.p.nb
    }

    /// Centre frequency of each Bark band in Hz.
    pub fn band_centres_hz(&self) -> &'static [f64] {
        self.p.centre_hz
    }

    /// Hann-windowed power spectrum of `frame`, bins `0..nf/2`, DC removed.
    pub(crate) fn power_spectrum(&mut self, frame: &[T]) -> Vec<T> {
        let nf = self.p.nf;
        let x: Vec<T> = frame[..nf].iter().zip(&self.window).map(|(&s, &w)| s * w).collect();
        let spec: Vec<Complex<T>> = self.fft.forward_real(&x, nf);
        let mut out: Vec<T> = spec[..nf / 2].iter().map(|c| c.re * c.re + c.im * c.im).collect();
        out[0] = T::zero();
        out
    }

    /// Groups a power spectrum into Bark bands, writing `nb` values to `out`.
    pub(crate) fn warp(&self, hz: &[T], out: &mut [T]) {
        let sp = T::lit(self.p.sp).as_f64();
        let mut bin = 0;
        for (band, slot) in out.iter_mut().enumerate() {
            let n = self.p.hz_bands_per_bark[band];
            let sum: f64 = hz[bin..bin + n].iter().map(|h| h.as_f64()).sum();
            bin += n;
            *slot = T::lit(sum * self.p.correction[band] * sp);
        }
    }

    /// Bark spectrum of one `frame_len()` frame of samples on the 16-bit
    /// scale (after level alignment and input filtering).
    pub fn bark_spectrum(&mut self, frame: &[T]) -> BarkSpectrum<T> {
        let hz = self.power_spectrum(frame);
        let mut bands = vec![T::zero(); self.p.nb];
        self.warp(&hz, &mut bands);
        BarkSpectrum { bands }
    }

    /// Sum of the bands (excluding the lowest) above `factor` times the
    /// hearing threshold.
    pub(crate) fn total_audible(&self, bands: &[T], factor: f64) -> T {
        let mut sum = 0.0f64;
        for (band, &h) in bands.iter().enumerate().skip(1) {
            if h > T::lit(factor * self.p.abs_thresh[band]) {
                sum += h.as_f64();
            }
        }
        T::lit(sum)
    }

    /// Zwicker loudness of each band, zero below the hearing threshold.
    pub fn loudness_density(&self, bark: &[T]) -> Vec<T> {
        let sl = T::lit(self.p.sl);
        bark.iter()
            .enumerate()
            .map(|(band, &input)| {
                let threshold = T::lit(self.p.abs_thresh[band]);
                let centre = T::lit(self.p.centre_bark[band]);
                let mut h = if centre < T::lit(4.0) {
                    T::lit(6.0) / (centre + T::lit(2.0))
                } else {
                    T::one()
                };
                if h > T::lit(2.0) {
                    h = T::lit(2.0);
                }
                let h = T::lit(h.as_f64().powf(T::lit(0.15).as_f64()));
                let zp = ZWICKER_POWER * h.as_f64();
                let loud = if input > threshold {
                    let (t, x) = (threshold.as_f64(), input.as_f64());
                    T::lit((t / 0.5).powf(zp) * ((0.5 + 0.5 * x / t).powf(zp) - 1.0))
                } else {
                    T::zero()
                };
                loud * sl
            })
            .collect()
    }

    /// Width-weighted Lp norm over bands 1.. of `|x|`.
    pub(crate) fn pseudo_lp(&self, x: &[T], p: f64) -> T {
        let mut total_weight = 0.0f64;
        let mut result = 0.0f64;
        for (band, &v) in x.iter().enumerate().skip(1) {
            let w = T::lit(self.p.width_bark[band]);
            let prod = (v.abs() * w).as_f64();
            result += prod.powf(p);
            total_weight += w.as_f64();
        }
        result /= total_weight;
        result = result.powf(T::lit(1.0 / p).as_f64());
        T::lit(result * total_weight)
    }

    /// Symmetric and asymmetric disturbance of one frame from the compensated
    /// Bark spectra and their loudness densities.
    pub(crate) fn disturbance(&self, ref_bark: &[T], deg_bark: &[T], ref_loud: &[T], deg_loud: &[T]) -> (T, T) {
        let quarter = T::lit(0.25);
        let mut dens: Vec<T> = ref_loud
            .iter()
            .zip(deg_loud)
            .map(|(&r, &d)| {
                let diff = d - r;
                let m = (if d < r { d } else { r }) * quarter;
                if diff > m {
                    diff - m
                } else if diff < -m {
                    diff + m
                } else {
                    T::zero()
                }
            })
            .collect();
        let d_sym = self.pseudo_lp(&dens, crate::tables::D_POW_F);
        let fifty = T::lit(50.0);
        for ((v, &r), &d) in dens.iter_mut().zip(ref_bark).zip(deg_bark) {
            let ratio = (d + fifty) / (r + fifty);
            let mut h = T::lit(ratio.as_f64().powf(T::lit(1.2).as_f64()));
            if h > T::lit(12.0) {
                h = T::lit(12.0);
            }
            if h < T::lit(3.0) {
                h = T::zero();
            }
            *v = *v * h;
        }
        let d_asym = self.pseudo_lp(&dens, crate::tables::A_POW_F);
        (d_sym, d_asym)
    }

    /// Public form of the per-frame disturbance computation.
    pub fn frame_disturbance(
        &self,
        ref_bark: &BarkSpectrum<T>,
        deg_bark: &BarkSpectrum<T>,
        ref_loud: &[T],
        deg_loud: &[T],
    ) -> DisturbanceFrame {
        let (d_sym, d_asym) = self.disturbance(&ref_bark.bands, &deg_bark.bands, ref_loud, deg_loud);
        DisturbanceFrame {
            d_sym: d_sym.as_f64(),
            d_asym: d_asym.as_f64(),
            audible: self.total_audible(&ref_bark.bands, 100.0) >= T::lit(1e7),
        }
    }

    /// Frequency-response compensation: scales every reference frame by the
    /// clamped band ratio of the time-averaged audible spectra.
    pub(crate) fn frequency_compensation(&self, ref_dens: &mut [T], deg_dens: &[T], silent: &[bool], divisor: usize) {
        let nb = self.p.nb;
        let frames = silent.len();
        let average = |dens: &[T], band: usize| -> T {
            let mut sum = 0.0f64;
            for f in 0..frames {
                let h = dens[f * nb + band];
                if !silent[f] && h.as_f64() > 100.0 * self.p.abs_thresh[band] {
                    sum += h.as_f64();
                }
            }
            T::lit(sum / divisor as f64)
        };
        let c = T::lit(1000.0);
        let factors: Vec<T> = (0..nb)
            .map(|band| {
                let x = (average(deg_dens, band) + c) / (average(ref_dens, band) + c);
                x.min(T::lit(FREQ_COMP_MAX)).max(T::lit(FREQ_COMP_MIN))
            })
            .collect();
        for frame in ref_dens.chunks_exact_mut(nb) {
            for (v, &x) in frame.iter_mut().zip(&factors) {
                *v = *v * x;
            }
        }
    }

    /// Short-term gain compensation of the degraded frames in `range`,
    /// smoothed over time and clamped.
    pub(crate) fn gain_compensation(&self, ref_dens: &[T], deg_dens: &mut [T], range: std::ops::Range<usize>) {
        let nb = self.p.nb;
        let mut old = T::one();
        let k = T::lit(5e3);
        for frame in range {
            let r = self.total_audible(&ref_dens[frame * nb..(frame + 1) * nb], 1.0);
            let d = self.total_audible(&deg_dens[frame * nb..(frame + 1) * nb], 1.0);
            let mut scale = (r + k) / (d + k);
            if frame > 0 {
                scale = T::lit(0.2) * old + T::lit(0.8) * scale;
            }
            old = scale;
            scale = scale.min(T::lit(MAX_GAIN_SCALE)).max(T::lit(MIN_GAIN_SCALE));
            for v in &mut deg_dens[frame * nb..(frame + 1) * nb] {
                *v = *v * scale;
            }
        }
    }

    /// Partial frequency compensation of the reference followed by
    /// short-term gain compensation of the degraded series.
    pub fn compensate(
        &self,
        reference: &[BarkSpectrum<T>],
        degraded: &[BarkSpectrum<T>],
    ) -> (Vec<BarkSpectrum<T>>, Vec<BarkSpectrum<T>>) {
        let nb = self.p.nb;
        let mut r: Vec<T> = reference.iter().flat_map(|b| b.bands.iter().copied()).collect();
        let mut d: Vec<T> = degraded.iter().flat_map(|b| b.bands.iter().copied()).collect();
        let frames = reference.len().min(degraded.len());
        r.truncate(frames * nb);
        d.truncate(frames * nb);
        let silent: Vec<bool> = (0..frames)
            .map(|f| self.total_audible(&r[f * nb..(f + 1) * nb], 100.0) < T::lit(1e7))
            .collect();
        self.frequency_compensation(&mut r, &d, &silent, frames.max(1));
        self.gain_compensation(&r, &mut d, 0..frames);
        let split = |v: Vec<T>| -> Vec<BarkSpectrum<T>> {
            v.chunks_exact(nb).map(|c| BarkSpectrum { bands: c.to_vec() }).collect()
        };
        (split(r), split(d))
    }
}
