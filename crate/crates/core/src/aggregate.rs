//! Aggregation of frame disturbances into the raw score.

#![allow(clippy::needless_range_loop)]

use crate::perceptual::DisturbanceSeries;
use crate::scalar::Real;
use crate::tables::{A_POW_S, A_POW_T, A_WEIGHT, D_POW_S, D_POW_T, D_WEIGHT, FRAMES_PER_SPLIT_SECOND};

/// Lowest raw score reported.
pub const RAW_MIN: f64 = -0.5;
/// Highest raw score reported (no audible disturbance).
pub const RAW_MAX: f64 = 4.5;

/// Raw P.862 score, clamped to [`RAW_MIN`, `RAW_MAX`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, serde::Serialize)]
pub struct RawScore(f64);

impl RawScore {
    pub fn new(unclamped: f64) -> Self {
        Self(unclamped.clamp(RAW_MIN, RAW_MAX))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Unclamped affine combination of the two disturbance totals.
pub fn raw_value(d_sym_total: f64, d_asym_total: f64) -> f64 {
    RAW_MAX - D_WEIGHT * d_sym_total - A_WEIGHT * d_asym_total
}

/// Combines disturbance totals into the clamped raw score.
pub fn raw_score(d_sym_total: f64, d_asym_total: f64) -> RawScore {
    RawScore::new(raw_value(d_sym_total, d_asym_total))
}

/// Power mean over half-overlapping split-second intervals, then a weighted
/// power mean over intervals.
pub(crate) fn lpq_weight<T: Real>(
    start: usize,
    stop: usize,
    p_syllable: f64,
    p_time: f64,
    disturbance: &[T],
    time_weight: &[T],
) -> T {
    let mut result_time = 0.0f64;
    let mut total_weight = 0.0f64;
    let hop = FRAMES_PER_SPLIT_SECOND / 2;
    let mut first = start;
    while first <= stop {
        let mut sum = 0.0f64;
        for frame in first..first + FRAMES_PER_SPLIT_SECOND {
            if frame <= stop {
                sum += disturbance[frame].as_f64().powf(p_syllable);
            }
        }
        let syllable = (sum / FRAMES_PER_SPLIT_SECOND as f64).powf(1.0 / p_syllable);
        let w = time_weight[first - start].as_f64();
        result_time += (w * syllable).powf(p_time);
        total_weight += w.powf(p_time);
        first += hop;
    }
    result_time /= total_weight;
    T::lit(result_time.powf(T::lit(1.0 / p_time).as_f64()))
}

/// Symmetric and asymmetric totals of frames `start..=stop`.
pub(crate) fn totals<T: Real>(start: usize, stop: usize, d_sym: &[T], d_asym: &[T], time_weight: &[T]) -> (T, T) {
    (
        lpq_weight(start, stop, D_POW_S, D_POW_T, d_sym, time_weight),
        lpq_weight(start, stop, A_POW_S, A_POW_T, d_asym, time_weight),
    )
}

/// Aggregates a disturbance series with unit time weights, as
/// `(d_sym_total, d_asym_total)`. An empty series aggregates to zero.
pub fn aggregate(series: &DisturbanceSeries) -> (f64, f64) {
    if series.frames.is_empty() {
        return (0.0, 0.0);
    }
    let sym: Vec<f64> = series.frames.iter().map(|f| f.d_sym).collect();
    let asym: Vec<f64> = series.frames.iter().map(|f| f.d_asym).collect();
    let ones = vec![1.0; sym.len()];
    totals(0, sym.len() - 1, &sym, &asym, &ones)
}
