//! Rate-dependent parameters of the model.

use crate::error::{PesqError, Result};
use crate::tables::*;

/// Everything that changes between 8 kHz and 16 kHz operation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RateParams {
    pub rate: u32,
    /// Samples per VAD window.
    pub downsample: usize,
    /// Transform length of the fine time alignment.
    pub align_nfft: usize,
    /// Transform length of the perceptual model (32 ms).
    pub nf: usize,
    /// Number of Bark bands.
    pub nb: usize,
    pub sl: f64,
    pub sp: f64,
    pub hz_bands_per_bark: &'static [usize],
    pub centre_bark: &'static [f64],
    pub centre_hz: &'static [f64],
    pub width_bark: &'static [f64],
    pub correction: &'static [f64],
    pub abs_thresh: &'static [f64],
    pub align_iir: &'static [f32],
    pub wb_iir: [f32; 5],
}

impl RateParams {
    pub fn new(rate: u32) -> Result<Self> {
        match rate {
            8000 => Ok(Self {
                rate,
                downsample: 32,
                align_nfft: 512,
                nf: 256,
                nb: 42,
                sl: SL_8K,
                sp: SP_8K,
                hz_bands_per_bark: &NR_OF_HZ_BANDS_PER_BARK_BAND_8K,
                centre_bark: &CENTRE_OF_BAND_BARK_8K,
                centre_hz: &CENTRE_OF_BAND_HZ_8K,
                width_bark: &WIDTH_OF_BAND_BARK_8K,
                correction: &POW_DENS_CORRECTION_FACTOR_8K,
                abs_thresh: &ABS_THRESH_POWER_8K,
                align_iir: &ALIGN_IIR_8K,
                wb_iir: WB_IIR_8K,
            }),
            16000 => Ok(Self {
                rate,
                downsample: 64,
                align_nfft: 1024,
                nf: 512,
                nb: 49,
                sl: SL_16K,
                sp: SP_16K,
                hz_bands_per_bark: &NR_OF_HZ_BANDS_PER_BARK_BAND_16K,
                centre_bark: &CENTRE_OF_BAND_BARK_16K,
                centre_hz: &CENTRE_OF_BAND_HZ_16K,
                width_bark: &WIDTH_OF_BAND_BARK_16K,
                correction: &POW_DENS_CORRECTION_FACTOR_16K,
                abs_thresh: &ABS_THRESH_POWER_16K,
                align_iir: &ALIGN_IIR_16K,
                wb_iir: WB_IIR_16K,
            }),
            other => Err(PesqError::InvalidRate(other)),
        }
    }

    /// Leading and trailing silence added around each signal, in samples.
    pub fn offset(&self) -> usize {
        SEARCHBUFFER * self.downsample
    }

    /// Extra zero padding after the trailing silence, in samples.
    pub fn padding(&self) -> usize {
        DATAPADDING_MSECS * (self.rate as usize / 1000)
    }

    /// Hop of the perceptual model frames.
    pub fn hop(&self) -> usize {
        self.nf / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_tables_cover_the_spectrum() {
        for rate in [8000, 16000] {
            let p = RateParams::new(rate).unwrap();
            assert_eq!(p.hz_bands_per_bark.len(), p.nb);
            assert_eq!(p.abs_thresh.len(), p.nb);
            let bins: usize = p.hz_bands_per_bark.iter().sum();
            assert!(bins <= p.nf / 2, "{rate}: {bins} bins");
            assert_eq!(p.align_iir.len() % 5, 0);
        }
        assert!(RateParams::new(22050).is_err());
    }
}
