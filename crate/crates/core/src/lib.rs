//! PESQ speech quality scoring: P.862 raw scores, P.862.1 narrowband and
//! P.862.2 wideband MOS-LQO, with the optional Corrigendum 2 wideband input
//! filter.
//!
//! The pipeline is generic over [`Real`] (`f64` or `f32`). The aliases at the
//! crate root fix it to `f64`, which is what the command line uses.
//!
//! ```no_run
//! use pesq_core::{compute_pesq, read_wav, Mode, Signal};
//!
//! let reference: Signal = read_wav("ref.wav")?;
//! let degraded: Signal = read_wav("deg.wav")?;
//! let cfg = Mode::WbC2.config(16000)?;
//! let score = compute_pesq(&reference, &degraded, &cfg)?;
//! println!("{} {:.3}", score.mode, score.value());
//! # Ok::<(), pesq_core::PesqError>(())
//! ```

pub mod aggregate;
pub mod align;
pub mod compare;
pub mod config;
mod dsp;
pub mod error;
mod filter;
pub mod level;
pub mod mapping;
mod model;
pub mod multichannel;
mod params;
pub mod perceptual;
pub mod scalar;
pub mod score;
pub mod signal;
mod tables;
pub mod testsignal;
mod vad;
pub mod wav;

pub use aggregate::{aggregate, raw_score, raw_value, RawScore, RAW_MAX, RAW_MIN};
pub use align::{AlignmentResult, Utterance};
pub use compare::{
    batch_score, compare_batches, compare_scores, read_manifest, scatter_data, BatchItem, BatchReport, ComparisonStats,
    ManifestEntry, ScatterRow,
};
pub use config::{Band, Mode, OutputKind, PesqConfig};
pub use error::{PesqError, Result, WavError};
pub use filter::{input_filter, wideband_iir};
pub use level::{fix_levels, LevelAlignment};
pub use mapping::{map_nb_lqo, map_wb_lqo, mapping_curve, CurvePoint, MappingKind};
pub use multichannel::{score_multichannel, MultichannelScore, StereoStrategy, INTERLEAVE_NOTICE};
pub use perceptual::{BarkSpectrum, DisturbanceFrame, DisturbanceSeries, PerceptualModel};
pub use scalar::Real;
pub use score::{
    align_utterances, analyze, compute_pesq, detect_utterances, estimate_crude_delay, PesqAnalysis, PesqScore,
    UtteranceSpan,
};
pub use signal::{downmix_mono, interleave, join_channels, split_channels, AudioSignal};
pub use wav::{encode_wav, parse_wav, read_wav, write_wav, WavEncoding};

/// Double-precision signal, the default everywhere.
pub type Signal = AudioSignal<f64>;
/// Single-precision signal.
pub type Signal32 = AudioSignal<f32>;
/// Double-precision perceptual model.
pub type Model = PerceptualModel<f64>;
/// Single-precision perceptual model.
pub type Model32 = PerceptualModel<f32>;
