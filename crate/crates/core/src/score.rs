//! End-to-end scoring and the alignment entry points.

use serde::Serialize;

use crate::aggregate::RawScore;
use crate::align::{Aligner, AlignmentResult, UttTable};
use crate::config::{Band, Mode, OutputKind, PesqConfig};
use crate::dsp::Spectral;
use crate::error::{PesqError, Result};
use crate::filter::{alignment_filter, listening_filter};
use crate::level::{check_rate, fix_power_level, Padded};
use crate::mapping::{map_nb_lqo, map_wb_lqo};
use crate::model;
use crate::params::RateParams;
use crate::perceptual::{DisturbanceSeries, PerceptualModel};
use crate::scalar::Real;
use crate::signal::AudioSignal;
use crate::tables::SEARCHBUFFER;
use crate::vad::{detect_activity, Activity};

/// Score of one pair. Which fields are present depends on the mode:
/// narrowband always reports `raw`, wideband only `mos_lqo`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PesqScore {
    pub mode: Mode,
    pub raw: Option<RawScore>,
    pub mos_lqo: Option<f64>,
}

impl PesqScore {
    /// The value the mode is named after: raw for `nb-raw`, MOS-LQO otherwise.
    pub fn value(&self) -> f64 {
        match self.mode {
            Mode::NbRaw => self.raw.map_or(f64::NAN, RawScore::value),
            _ => self.mos_lqo.unwrap_or(f64::NAN),
        }
    }
}

/// Score plus the intermediate results it was computed from.
#[derive(Debug, Clone, Serialize)]
pub struct PesqAnalysis {
    pub score: PesqScore,
    /// Raw score before clamping; this is what the MOS-LQO mappings consume.
    pub raw_unclamped: f64,
    pub d_sym_total: f64,
    pub d_asym_total: f64,
    pub alignment: AlignmentResult,
    pub disturbance: DisturbanceSeries,
}

/// One span of reference speech activity, in alignment windows from the
/// start of the signal (`end` exclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UtteranceSpan {
    pub start: i64,
    pub end: i64,
}

fn check_signal<T: Real>(signal: &AudioSignal<T>, cfg: &PesqConfig, what: &'static str) -> Result<()> {
    let samples = signal.samples()?;
    check_rate(signal, cfg)?;
    signal.validate_for_scoring(what)?;
    if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
        return Err(PesqError::NonFinite(i));
    }
    Ok(())
}

/// Level-aligned, filtered buffers of one pair plus their activity.
struct FrontEnd<T: Real> {
    p: RateParams,
    fft: Spectral<T>,
    max_n: usize,
    /// Listening-filtered copies used by the perceptual model.
    model_ref: Padded<T>,
    model_deg: Padded<T>,
    /// Band-limited copies used for alignment.
    align_ref: Padded<T>,
    align_deg: Padded<T>,
    ref_act: Activity<T>,
    deg_act: Activity<T>,
}

impl<T: Real> FrontEnd<T> {
    fn new(reference: &AudioSignal<T>, degraded: &AudioSignal<T>, cfg: &PesqConfig) -> Result<Self> {
        cfg.validate()?;
        check_signal(reference, cfg, "reference")?;
        check_signal(degraded, cfg, "degraded")?;
        let p = RateParams::new(cfg.rate)?;
        let mut fft = Spectral::new();
        let mut r = Padded::new(reference.samples()?, &p);
        let mut d = Padded::new(degraded.samples()?, &p);
        let max_n = r.nsamples.max(d.nsamples);
        fix_power_level(&mut r, &p, max_n, &mut fft, "reference")?;
        fix_power_level(&mut d, &p, max_n, &mut fft, "degraded")?;
        listening_filter(&mut r, &p, cfg.band, cfg.corrigendum2, &mut fft);
        listening_filter(&mut d, &p, cfg.band, cfg.corrigendum2, &mut fft);
        let (model_ref, model_deg) = (r.clone(), d.clone());
        alignment_filter(&mut r, &p);
        alignment_filter(&mut d, &p);
        let ref_act = detect_activity(&r.data, r.nsamples / p.downsample, p.downsample);
        let deg_act = detect_activity(&d.data, d.nsamples / p.downsample, p.downsample);
        Ok(Self {
            p,
            fft,
            max_n,
            model_ref,
            model_deg,
            align_ref: r,
            align_deg: d,
            ref_act,
            deg_act,
        })
    }

    fn aligner(&mut self) -> Aligner<'_, T> {
        Aligner::new(
            &self.p,
            &self.align_ref,
            &self.align_deg,
            &self.ref_act,
            &self.deg_act,
            &mut self.fft,
        )
    }

    fn align(&mut self) -> UttTable<T> {
        self.aligner().run()
    }
}

/// Runs the full pipeline and returns the score with its intermediates.
pub fn analyze<T: Real>(
    reference: &AudioSignal<T>,
    degraded: &AudioSignal<T>,
    cfg: &PesqConfig,
) -> Result<PesqAnalysis> {
    let mut fe = FrontEnd::new(reference, degraded, cfg)?;
    let table = fe.align();
    if table.len() == 0 {
        return Err(PesqError::NoUtterances);
    }
    let alignment = table.to_result(&fe.p);
    let len = fe.max_n + fe.p.padding();
    fe.model_ref.extend_to(len);
    fe.model_deg.extend_to(len);

    let mut m = PerceptualModel::new(cfg.rate)?;
    let out = model::run(&mut m, &fe.model_ref, &fe.model_deg, &table, fe.max_n)?;

    let mode = cfg.mode();
    let raw = out.raw;
    let score = match (cfg.band, cfg.output) {
        (Band::Narrow, OutputKind::Raw) => PesqScore {
            mode,
            raw: Some(RawScore::new(raw)),
            mos_lqo: None,
        },
        (Band::Narrow, OutputKind::MosLqo) => PesqScore {
            mode,
            raw: Some(RawScore::new(raw)),
            mos_lqo: Some(map_nb_lqo(raw)),
        },
        (Band::Wide, _) => PesqScore {
            mode,
            raw: None,
            mos_lqo: Some(map_wb_lqo(raw)),
        },
    };
    Ok(PesqAnalysis {
        score,
        raw_unclamped: raw,
        d_sym_total: out.d_sym_total,
        d_asym_total: out.d_asym_total,
        alignment,
        disturbance: out.series,
    })
}

/// Scores a mono pair in the mode described by `cfg`.
pub fn compute_pesq<T: Real>(
    reference: &AudioSignal<T>,
    degraded: &AudioSignal<T>,
    cfg: &PesqConfig,
) -> Result<PesqScore> {
    analyze(reference, degraded, cfg).map(|a| a.score)
}

/// Whole-signal delay of `degraded` relative to `reference` in samples, from
/// the cross-correlation of the activity envelopes. Degenerate envelopes,
/// including those of an all-silent signal, give 0.
pub fn estimate_crude_delay<T: Real>(
    reference: &AudioSignal<T>,
    degraded: &AudioSignal<T>,
    cfg: &PesqConfig,
) -> Result<i64> {
    match FrontEnd::new(reference, degraded, cfg) {
        Ok(mut fe) => Ok(fe.aligner().crude_delay()),
        Err(PesqError::SilentInput(_)) => Ok(0),
        Err(e) => Err(e),
    }
}

/// Speech-activity spans of the reference.
pub fn detect_utterances<T: Real>(reference: &AudioSignal<T>, cfg: &PesqConfig) -> Result<Vec<UtteranceSpan>> {
    cfg.validate()?;
    check_signal(reference, cfg, "reference")?;
    let p = RateParams::new(cfg.rate)?;
    let mut fft = Spectral::new();
    let mut r = Padded::new(reference.samples()?, &p);
    let n = r.nsamples;
    match fix_power_level(&mut r, &p, n, &mut fft, "reference") {
        Err(PesqError::SilentInput(_)) => return Err(PesqError::NoSpeechActivity),
        other => other?,
    };
    listening_filter(&mut r, &p, cfg.band, cfg.corrigendum2, &mut fft);
    alignment_filter(&mut r, &p);
    let act = detect_activity(&r.data, n / p.downsample, p.downsample);

    let sb = SEARCHBUFFER as i64;
    let mut spans = Vec::new();
    let mut start = None;
    for (i, &v) in act.vad.iter().enumerate() {
        match (v > T::zero(), start) {
            (true, None) => start = Some(i as i64),
            (false, Some(s)) => {
                spans.push(UtteranceSpan {
                    start: s - sb,
                    end: i as i64 - sb,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        spans.push(UtteranceSpan {
            start: s - sb,
            end: act.vad.len() as i64 - sb,
        });
    }
    if spans.is_empty() {
        return Err(PesqError::NoSpeechActivity);
    }
    Ok(spans)
}

/// Crude plus per-utterance fine alignment, including the splitting of
/// utterances whose delay changes part-way. Errors with
/// [`PesqError::NoUtterances`] when no speech span survives.
pub fn align_utterances<T: Real>(
    reference: &AudioSignal<T>,
    degraded: &AudioSignal<T>,
    cfg: &PesqConfig,
) -> Result<AlignmentResult> {
    let mut fe = FrontEnd::new(reference, degraded, cfg)?;
    let table = fe.align();
    if table.len() == 0 {
        return Err(PesqError::NoUtterances);
    }
    Ok(table.to_result(&fe.p))
}
