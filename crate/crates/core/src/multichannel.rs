//! Scoring of multi-channel pairs.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Mode, PesqConfig};
use crate::error::{PesqError, Result};
use crate::scalar::Real;
use crate::score::compute_pesq;
use crate::signal::{downmix_mono, interleave, split_channels, AudioSignal};

/// Printed whenever the interleave strategy is used.
pub const INTERLEAVE_NOTICE: &str = "note: interleave scores the channels as one long interleaved mono signal, \
reproducing likely unintentional behaviour of the reference implementation";

/// How multi-channel pairs are reduced to PESQ scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StereoStrategy {
    /// Score the per-sample channel mean.
    #[default]
    MonoDmx,
    /// Score each channel and average.
    AvgScores,
    /// Score each channel; the list is the result, the mean is reported too.
    PerChannel,
    /// Score the frame-interleaved samples as one mono signal.
    Interleave,
}

impl StereoStrategy {
    pub const ALL: [StereoStrategy; 4] = [
        StereoStrategy::MonoDmx,
        StereoStrategy::AvgScores,
        StereoStrategy::PerChannel,
        StereoStrategy::Interleave,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StereoStrategy::MonoDmx => "mono-dmx",
            StereoStrategy::AvgScores => "avg-scores",
            StereoStrategy::PerChannel => "per-channel",
            StereoStrategy::Interleave => "interleave",
        }
    }
}

impl fmt::Display for StereoStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StereoStrategy {
    type Err = PesqError;

    /// Accepts the full names and the short command-line forms `dmx`/`avg`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dmx" | "mono-dmx" => Ok(StereoStrategy::MonoDmx),
            "avg" | "avg-scores" => Ok(StereoStrategy::AvgScores),
            "per-channel" => Ok(StereoStrategy::PerChannel),
            "interleave" => Ok(StereoStrategy::Interleave),
            other => Err(PesqError::InvalidConfig(format!(
                "unknown stereo strategy '{other}' (dmx, avg, per-channel, interleave)"
            ))),
        }
    }
}

/// Result of [`score_multichannel`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultichannelScore {
    pub mode: Mode,
    pub strategy: StereoStrategy,
    /// The mode's headline value (raw for `nb-raw`, MOS-LQO otherwise).
    pub score: f64,
    /// Per-channel values for the averaging strategies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_channel: Option<Vec<f64>>,
}

/// Scores a possibly multi-channel pair with the given strategy.
pub fn score_multichannel<T: Real>(
    reference: &AudioSignal<T>,
    degraded: &AudioSignal<T>,
    cfg: &PesqConfig,
    strategy: StereoStrategy,
) -> Result<MultichannelScore> {
    cfg.validate()?;
    let (rc, dc) = (reference.channel_count(), degraded.channel_count());
    if rc != dc {
        return Err(PesqError::ChannelMismatch {
            reference: rc,
            degraded: dc,
        });
    }
    let mode = cfg.mode();
    let single = |score: f64| MultichannelScore {
        mode,
        strategy,
        score,
        per_channel: None,
    };
    match strategy {
        StereoStrategy::MonoDmx => {
            let s = compute_pesq(&downmix_mono(reference), &downmix_mono(degraded), cfg)?;
            Ok(single(s.value()))
        }
        StereoStrategy::Interleave => {
            if rc < 2 {
                return Err(PesqError::InterleaveMono);
            }
            let s = compute_pesq(&interleave(reference)?, &interleave(degraded)?, cfg)?;
            Ok(single(s.value()))
        }
        StereoStrategy::AvgScores | StereoStrategy::PerChannel => {
            let refs = split_channels(reference);
            let degs = split_channels(degraded);
            let values = refs
                .par_iter()
                .zip(degs.par_iter())
                .map(|(r, d)| compute_pesq(r, d, cfg).map(|s| s.value()))
                .collect::<Result<Vec<f64>>>()?;
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            Ok(MultichannelScore {
                mode,
                strategy,
                score: mean,
                per_channel: Some(values),
            })
        }
    }
}
