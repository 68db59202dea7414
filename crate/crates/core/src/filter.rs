//! Input filters: the listening-condition filter in front of the perceptual
//! model and the band-limiting filter used only for time alignment.

use crate::config::{Band, PesqConfig};
use crate::dsp::{biquad, sos_cascade, Spectral};
use crate::error::Result;
use crate::level::{check_rate, Padded};
use crate::params::RateParams;
use crate::scalar::Real;
use crate::signal::AudioSignal;
use crate::tables::{corrected_wb_iir, IRS_FILTER_DB};

/// Length of the linear fade applied before the wideband IIR.
const WB_FADE: usize = 16;

/// Wideband IIR coefficients for the given rate and filter version.
pub(crate) fn wideband_coefficients(p: &RateParams, corrigendum2: bool) -> [f32; 5] {
    if corrigendum2 {
        corrected_wb_iir(&p.wb_iir)
    } else {
        p.wb_iir
    }
}

/// Wideband input IIR section `[b0, b1, b2, a1, a2]` for `rate`, with or
/// without the Corrigendum 2 scaling.
pub fn wideband_iir(rate: u32, corrigendum2: bool) -> crate::error::Result<[f32; 5]> {
    Ok(wideband_coefficients(&RateParams::new(rate)?, corrigendum2))
}

/// Applies the listening-condition filter in place: IRS receive for narrow
/// band, the wideband high-pass (original or corrected) otherwise.
pub(crate) fn listening_filter<T: Real>(
    sig: &mut Padded<T>,
    p: &RateParams,
    band: Band,
    corrigendum2: bool,
    fft: &mut Spectral<T>,
) {
    let (off, pad, n) = (p.offset(), p.padding(), sig.nsamples);
    match band {
        Band::Narrow => fft.filter_by_curve(&mut sig.data, off, n - 2 * off + pad, p.rate, &IRS_FILTER_DB),
        Band::Wide => {
            for i in 0..WB_FADE {
                let w = T::from_usize_lossy(i) / T::from_usize_lossy(WB_FADE);
                sig.data[off + i - 1] = sig.data[off + i - 1] * w;
                sig.data[n - off - i] = sig.data[n - off - i] * w;
            }
            let c = wideband_coefficients(p, corrigendum2).map(|v| T::lit(f64::from(v)));
            biquad(&mut sig.data[off..n - off], &c);
        }
    }
}

/// DC removal, edge fades and the alignment band-pass, in place.
pub(crate) fn alignment_filter<T: Real>(sig: &mut Padded<T>, p: &RateParams) {
    let (off, ds, n) = (p.offset(), p.downsample, sig.nsamples);
    let body = &mut sig.data[off..n - off];
    let mean = body.iter().fold(T::zero(), |acc, &x| acc + x) / T::from_usize_lossy(n);
    for s in body.iter_mut() {
        *s = *s - mean;
    }
    for k in 0..ds {
        let w = (T::lit(0.5) + T::from_usize_lossy(k)) / T::from_usize_lossy(ds);
        sig.data[off + k] = sig.data[off + k] * w;
        sig.data[n - off - 1 - k] = sig.data[n - off - 1 - k] * w;
    }
    let end = n + p.padding();
    sos_cascade(&mut sig.data[..end], p.align_iir);
}

/// Runs the listening-condition input filter selected by `cfg` on a mono
/// signal and returns the filtered samples (same length as the input).
pub fn input_filter<T: Real>(signal: &AudioSignal<T>, cfg: &PesqConfig) -> Result<AudioSignal<T>> {
    cfg.validate()?;
    check_rate(signal, cfg)?;
    let p = RateParams::new(cfg.rate)?;
    let mut padded = Padded::new(signal.samples()?, &p);
    listening_filter(&mut padded, &p, cfg.band, cfg.corrigendum2, &mut Spectral::new());
    Ok(AudioSignal::mono(cfg.rate, padded.signal_part(&p).to_vec()))
}
