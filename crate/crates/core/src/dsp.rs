//! Transform and filter primitives shared by the pipeline stages.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::scalar::Real;
use crate::tables::FilterCurve;

/// Two pi as spelled in the reference code. Window shapes use this value.
#[allow(clippy::approx_constant)]
pub(crate) const TWO_PI: f64 = 6.28318530717959;

/// Smallest power of two that is `>= x` (1 for 0).
pub(crate) fn next_pow2(x: usize) -> usize {
    x.max(1).next_power_of_two()
}

/// Periodic Hann window of length `n`.
pub(crate) fn hann<T: Real>(n: usize) -> Vec<T> {
    (0..n)
        .map(|i| T::lit(0.5 * (1.0 - (TWO_PI * i as f64 / n as f64).cos())))
        .collect()
}

/// Real-signal FFT helper with cached plans. One instance per scoring call.
pub(crate) struct Spectral<T: Real> {
    planner: FftPlanner<T>,
    forward: Vec<(usize, Arc<dyn Fft<T>>)>,
    inverse: Vec<(usize, Arc<dyn Fft<T>>)>,
    work: Vec<Complex<T>>,
}

impl<T: Real> Spectral<T> {
    pub(crate) fn new() -> Self {
        Self {
            planner: FftPlanner::new(),
            forward: Vec::new(),
            inverse: Vec::new(),
            work: Vec::new(),
        }
    }

    fn plan(&mut self, n: usize, inverse: bool) -> Arc<dyn Fft<T>> {
        let cache = if inverse { &mut self.inverse } else { &mut self.forward };
        if let Some((_, p)) = cache.iter().find(|(len, _)| *len == n) {
            return Arc::clone(p);
        }
        let p = if inverse {
            self.planner.plan_fft_inverse(n)
        } else {
            self.planner.plan_fft_forward(n)
        };
        cache.push((n, Arc::clone(&p)));
        p
    }

    /// Spectrum bins `0..=n/2` of `x` zero-padded (or truncated) to `n`.
    pub(crate) fn forward_real(&mut self, x: &[T], n: usize) -> Vec<Complex<T>> {
        let plan = self.plan(n, false);
        self.work.clear();
        self.work.extend(x.iter().take(n).map(|&v| Complex::new(v, T::zero())));
        self.work.resize(n, Complex::new(T::zero(), T::zero()));
        plan.process(&mut self.work);
        self.work[..=n / 2].to_vec()
    }

    /// Inverse of [`Self::forward_real`], including the `1/n` normalisation.
    pub(crate) fn inverse_real(&mut self, half: &[Complex<T>], n: usize) -> Vec<T> {
        let plan = self.plan(n, true);
        self.work.clear();
        self.work.extend_from_slice(&half[..=n / 2]);
        for i in n / 2 + 1..n {
            self.work.push(half[n - i].conj());
        }
        plan.process(&mut self.work);
        let scale = T::one() / T::from_usize_lossy(n);
        self.work.iter().map(|c| c.re * scale).collect()
    }

    /// Full linear cross-correlation; element `k` holds lag `k + 1 - x1.len()`.
    pub(crate) fn xcorr(&mut self, x1: &[T], x2: &[T]) -> Vec<T> {
        let n = 2 * next_pow2(x1.len().max(x2.len()));
        let rev: Vec<T> = x1.iter().rev().copied().collect();
        let a = self.forward_real(&rev, n);
        let b = self.forward_real(x2, n);
        let prod: Vec<Complex<T>> = a.iter().zip(&b).map(|(p, q)| p * q).collect();
        let mut y = self.inverse_real(&prod, n);
        y.truncate(x1.len() + x2.len() - 1);
        y
    }

    /// Circular cross-correlation of two equal-length frames,
    /// `y[k] = sum x1[n] x2[n + k]`.
    pub(crate) fn circular_xcorr(&mut self, x1: &[T], x2: &[T]) -> Vec<T> {
        let n = x1.len();
        let a = self.forward_real(x1, n);
        let b = self.forward_real(x2, n);
        let prod: Vec<Complex<T>> = a.iter().zip(&b).map(|(p, q)| p.conj() * q).collect();
        self.inverse_real(&prod, n)
    }

    /// Circular convolution of two equal-length sequences.
    pub(crate) fn circular_conv(&mut self, x1: &[T], x2: &[T]) -> Vec<T> {
        let n = x1.len();
        let a = self.forward_real(x1, n);
        let b = self.forward_real(x2, n);
        let prod: Vec<Complex<T>> = a.iter().zip(&b).map(|(p, q)| p * q).collect();
        self.inverse_real(&prod, n)
    }

    /// Zero-phase filtering of `data[start..start + n]` by a piecewise-linear
    /// dB magnitude curve, normalised to 0 dB at 1 kHz.
    pub(crate) fn filter_by_curve(&mut self, data: &mut [T], start: usize, n: usize, rate: u32, curve: &FilterCurve) {
        let size = next_pow2(n);
        let mut spec = self.forward_real(&data[start..start + n], size);
        let overall = curve_gain_db(1000.0, curve);
        let resolution = T::lit(f64::from(rate)) / T::from_usize_lossy(size);
        for (i, bin) in spec.iter_mut().enumerate() {
            let freq = T::from_usize_lossy(i) * resolution;
            let db = T::lit(curve_gain_db(freq.as_f64(), curve)) - T::lit(overall);
            let factor = T::lit(10f64.powf((db / T::lit(20.0)).as_f64()));
            *bin = *bin * factor;
        }
        let out = self.inverse_real(&spec, size);
        data[start..start + n].copy_from_slice(&out[..n]);
    }
}

/// Linear interpolation in a (Hz, dB) table, extrapolating from the end
/// segments.
pub(crate) fn curve_gain_db(freq: f64, curve: &FilterCurve) -> f64 {
    let last = curve.len() - 1;
    let seg = if freq <= curve[0].0 {
        1
    } else if freq >= curve[last].0 {
        last
    } else {
        let mut i = 1;
        while curve[i].0 < freq {
            i += 1;
        }
        i
    };
    let (f_lo, g_lo) = curve[seg - 1];
    let (f_hi, g_hi) = curve[seg];
    ((freq - f_lo) * g_hi + (f_hi - freq) * g_lo) / (f_hi - f_lo)
}

/// Direct-form II second-order section, `[b0, b1, b2, a1, a2]`, run in place
/// from a zero state.
pub(crate) fn biquad<T: Real>(x: &mut [T], c: &[T; 5]) {
    let (mut z1, mut z2) = (T::zero(), T::zero());
    for s in x.iter_mut() {
        let z0 = *s - c[3] * z1 - c[4] * z2;
        *s = c[0] * z0 + c[1] * z1 + c[2] * z2;
        z2 = z1;
        z1 = z0;
    }
}

/// Cascade of second-order sections packed as consecutive 5-tuples.
pub(crate) fn sos_cascade<T: Real>(x: &mut [T], packed: &[f32]) {
    for sec in packed.chunks_exact(5) {
        let c = [
            T::lit(f64::from(sec[0])),
            T::lit(f64::from(sec[1])),
            T::lit(f64::from(sec[2])),
            T::lit(f64::from(sec[3])),
            T::lit(f64::from(sec[4])),
        ];
        biquad(x, &c);
    }
}

/// Sum of squares over `x[start..stop]` divided by `divisor`.
pub(crate) fn power_of<T: Real>(x: &[T], start: usize, stop: usize, divisor: usize) -> f64 {
    let sum: f64 = x[start..stop].iter().map(|&h| (h * h).as_f64()).sum();
    sum / divisor as f64
}
