//! Frame loop of the perceptual model: spectra of the aligned signals,
//! compensation, disturbance per frame, realignment of bad intervals and
//! aggregation.

#![allow(clippy::needless_range_loop)]

use crate::aggregate::{raw_value, totals};
use crate::align::UttTable;
use crate::dsp::{next_pow2, power_of};
use crate::error::{PesqError, Result};
use crate::level::Padded;
use crate::perceptual::{DisturbanceFrame, DisturbanceSeries, PerceptualModel};
use crate::scalar::Real;
use crate::tables::{
    MAX_FRAME_DISTURBANCE, MIN_BAD_FRAMES_IN_INTERVAL, SEARCH_RANGE_IN_TRANSFORM_LENGTH, SILENCE_5_SAMPLES,
    SMEAR_RANGE, THRESHOLD_BAD_FRAMES,
};

/// Result of the model for one aligned pair.
#[derive(Debug, Clone)]
pub(crate) struct ModelOutput {
    pub d_sym_total: f64,
    pub d_asym_total: f64,
    /// Unclamped raw score.
    pub raw: f64,
    pub series: DisturbanceSeries,
}

/// Delay of the utterance covering sample `pos`, falling back to the first.
fn delay_at<T: Real>(table: &UttTable<T>, pos: i64, ds: i64) -> i64 {
    (0..table.len())
        .rev()
        .find(|&u| table.start[u] * ds <= pos)
        .map_or(table.delay[0], |u| table.delay[u])
}

/// Number of positions, starting at `first` and moving forward (or backward),
/// whose five-sample magnitude sum stays below the silence criterion.
fn silent_run<T: Real>(data: &[T], first: usize, backward: bool, limit: usize) -> usize {
    let crit = T::lit(SILENCE_5_SAMPLES);
    let mut skip = 0;
    loop {
        let sum = (0..5).fold(T::zero(), |acc, i| {
            let idx = if backward { first - skip - i } else { first + skip + i };
            acc + data[idx].abs()
        });
        if sum < crit {
            skip += 1;
        }
        if !(sum < crit && skip < limit) {
            return skip;
        }
    }
}

/// Envelope delay (in samples) between two equal-length sequences from the
/// normalised circular correlation of their magnitudes, searching
/// `-range..range`. Returns the delay and the correlation at it.
fn envelope_delay<T: Real>(m: &mut PerceptualModel<T>, x1: &[T], x2: &[T], range: usize) -> (i64, T) {
    let n = x1.len();
    let p2 = next_pow2(2 * n);
    let power1 = power_of(x1, 0, n, n) * n as f64 / p2 as f64;
    let power2 = power_of(x2, 0, n, n) * n as f64 / p2 as f64;
    let norm = (power1 * power2).sqrt();
    if power1 <= 1e-6 || power2 <= 1e-6 {
        return (0, T::zero());
    }
    let mut a = vec![T::zero(); p2];
    let mut b = vec![T::zero(); p2];
    for i in 0..n {
        a[i] = x1[i].abs();
        b[i] = x2[i].abs();
    }
    let scale = T::from_usize_lossy(p2);
    let y = m.fft.circular_xcorr(&a, &b);
    let mut best = 0i64;
    let mut max_corr = T::zero();
    let lags = (-(range as i64)..0).chain(0..range as i64);
    for lag in lags {
        let idx = if lag < 0 { lag + p2 as i64 } else { lag } as usize;
        let h = (y[idx] / scale).abs().as_f64() / norm;
        if h.abs() > max_corr.as_f64() {
            max_corr = T::lit(h.abs());
            best = lag;
        }
    }
    (best, max_corr)
}

struct Frames<'a, T: Real> {
    m: &'a mut PerceptualModel<T>,
    nb: usize,
    ref_dens: Vec<T>,
    deg_dens: Vec<T>,
    d_sym: Vec<T>,
    d_asym: Vec<T>,
}

impl<T: Real> Frames<'_, T> {
    fn warp_into(&mut self, data: &[T], start: usize, frame: usize, degraded: bool) {
        let hz = self.m.power_spectrum(&data[start..]);
        let nb = self.nb;
        let dens = if degraded {
            &mut self.deg_dens
        } else {
            &mut self.ref_dens
        };
        self.m.warp(&hz, &mut dens[frame * nb..(frame + 1) * nb]);
    }

    fn zero_deg(&mut self, frame: usize) {
        let nb = self.nb;
        self.deg_dens[frame * nb..(frame + 1) * nb].fill(T::zero());
    }

    fn frame_disturbance(&self, frame: usize) -> (T, T) {
        let nb = self.nb;
        let r = &self.ref_dens[frame * nb..(frame + 1) * nb];
        let d = &self.deg_dens[frame * nb..(frame + 1) * nb];
        let rl = self.m.loudness_density(r);
        let dl = self.m.loudness_density(d);
        self.m.disturbance(r, d, &rl, &dl)
    }
}

/// Runs the model on the filtered, level-aligned signals. Both buffers hold
/// at least `max_n + padding` samples.
pub(crate) fn run<T: Real>(
    m: &mut PerceptualModel<T>,
    reference: &Padded<T>,
    degraded: &Padded<T>,
    table: &UttTable<T>,
    max_n: usize,
) -> Result<ModelOutput> {
    let p = m.p;
    let (nf, hop, nb) = (p.nf, p.hop(), p.nb);
    let (off, pad) = (p.offset(), p.padding());
    let ds = p.downsample as i64;
    let total = max_n + pad;
    let rdata = &reference.data[..total];
    let ddata = &degraded.data[..total];

    if table.len() == 0 {
        return Err(PesqError::NoUtterances);
    }

    let skip_start = silent_run(rdata, off, false, max_n / 2);
    let skip_end = silent_run(rdata, max_n - off + pad - 1, true, max_n / 2);
    let start_frame = skip_start / hop;
    let span = max_n - 2 * off + pad;
    let stop_frame = (span.saturating_sub(skip_end) / hop) as i64 - 1;
    if stop_frame < 0 || start_frame as i64 > stop_frame {
        return Err(PesqError::NoUtterances);
    }
    let stop_frame = stop_frame as usize;
    let frames = stop_frame + 1;

    let mut f = Frames {
        m,
        nb,
        ref_dens: vec![T::zero(); frames * nb],
        deg_dens: vec![T::zero(); frames * nb],
        d_sym: vec![T::zero(); frames],
        d_asym: vec![T::zero(); frames],
    };

    let mut silent = vec![false; frames];
    for frame in 0..frames {
        let start_ref = off + frame * hop;
        let start_deg = start_ref as i64 + delay_at(table, start_ref as i64, ds);
        f.warp_into(rdata, start_ref, frame, false);
        if start_deg > 0 && start_deg as usize + nf < total {
            f.warp_into(ddata, start_deg as usize, frame, true);
        } else {
            f.zero_deg(frame);
        }
        silent[frame] = f.m.total_audible(&f.ref_dens[frame * nb..(frame + 1) * nb], 100.0) < T::lit(1e7);
    }

    f.m.frequency_compensation(&mut f.ref_dens, &f.deg_dens, &silent, span / hop - 1);

    let total_power_ref: Vec<T> = (0..frames)
        .map(|frame| f.m.total_audible(&f.ref_dens[frame * nb..(frame + 1) * nb], 1.0))
        .collect();
    f.m.gain_compensation(&f.ref_dens, &mut f.deg_dens, 0..frames);

    let mut any_bad = false;
    for frame in 0..frames {
        let (d, a) = f.frame_disturbance(frame);
        any_bad |= d > T::lit(THRESHOLD_BAD_FRAMES);
        f.d_sym[frame] = d;
        f.d_asym[frame] = a;
    }

    // Frames around a large negative delay jump are ignored.
    let half = hop as i64;
    let sb = crate::tables::SEARCHBUFFER as i64;
    for u in 1..table.len() {
        let mut frame1 = ((table.start[u] - sb) * ds + table.delay[u]) / half;
        let j = ((table.end[u - 1] - sb) * ds + table.delay[u - 1]) / half;
        let jump = table.delay[u] - table.delay[u - 1];
        frame1 = frame1.min(j).max(0);
        if jump < -half {
            let frame2 = ((table.start[u] - sb) * ds + jump.abs()) / half + 1;
            for frame in frame1..=frame2 {
                if frame < stop_frame as i64 {
                    f.d_sym[frame as usize] = T::zero();
                    f.d_asym[frame as usize] = T::zero();
                }
            }
        }
    }

    if any_bad {
        realign_bad_intervals(&mut f, rdata, ddata, table, max_n, stop_frame)?;
    }

    let mut time_weight = vec![T::one(); frames];
    if frames > 1000 {
        let n = ((max_n - 2 * off) / hop) as i64 - 1;
        let factor = ((n as f64 - 1000.0) / 5500.0).min(0.5);
        for (frame, w) in time_weight.iter_mut().enumerate() {
            *w = T::lit((1.0 - factor) + factor * frame as f64 / n as f64);
        }
    }

    let cap = T::lit(MAX_FRAME_DISTURBANCE);
    for frame in 0..frames {
        let h = T::lit(((total_power_ref[frame].as_f64() + 1e5) / 1e7).powf(0.04));
        f.d_sym[frame] = (f.d_sym[frame] / h).min(cap);
        f.d_asym[frame] = (f.d_asym[frame] / h).min(cap);
    }

    let (d, a) = totals(start_frame, stop_frame, &f.d_sym, &f.d_asym, &time_weight);
    let raw = T::lit(raw_value(d.as_f64(), a.as_f64())).as_f64();
    if !raw.is_finite() {
        return Err(PesqError::NonFinite(0));
    }
    let series = DisturbanceSeries {
        frames: (0..frames)
            .map(|i| DisturbanceFrame {
                d_sym: f.d_sym[i].as_f64(),
                d_asym: f.d_asym[i].as_f64(),
                audible: !silent[i],
            })
            .collect(),
    };
    Ok(ModelOutput {
        d_sym_total: d.as_f64(),
        d_asym_total: a.as_f64(),
        raw,
        series,
    })
}

/// Finds runs of strongly disturbed frames, re-estimates their delay locally
/// and keeps the smaller disturbance of the two alignments.
fn realign_bad_intervals<T: Real>(
    f: &mut Frames<'_, T>,
    rdata: &[T],
    ddata: &[T],
    table: &UttTable<T>,
    max_n: usize,
    stop_frame: usize,
) -> Result<()> {
    let p = f.m.p;
    let (nf, hop, nb) = (p.nf, p.hop(), p.nb);
    let (off, pad) = (p.offset(), p.padding());
    let ds = p.downsample as i64;
    let total = max_n + pad;

    let mut is_bad: Vec<bool> = f.d_sym.iter().map(|&d| d > T::lit(THRESHOLD_BAD_FRAMES)).collect();
    is_bad[0] = false;
    let mut smeared = vec![false; stop_frame + 1];
    for frame in SMEAR_RANGE..stop_frame.saturating_sub(SMEAR_RANGE) {
        let left = is_bad[frame - SMEAR_RANGE..=frame].iter().any(|&b| b);
        let right = is_bad[frame..=frame + SMEAR_RANGE].iter().any(|&b| b);
        smeared[frame] = left && right;
    }

    let mut intervals: Vec<(usize, usize)> = Vec::new();
    let mut frame = 0;
    while frame <= stop_frame {
        while frame <= stop_frame && !smeared[frame] {
            frame += 1;
        }
        if frame > stop_frame {
            break;
        }
        let start = frame;
        while frame <= stop_frame && smeared[frame] {
            frame += 1;
        }
        if frame <= stop_frame && frame - start >= MIN_BAD_FRAMES_IN_INTERVAL {
            intervals.push((start, frame));
        }
    }
    if intervals.is_empty() {
        return Ok(());
    }

    // Degraded signal resampled through the utterance delays.
    let mut tweaked = vec![T::zero(); total];
    let lo = off as i64;
    let hi = (total - off) as i64;
    for i in off..total - off {
        let j = (i as i64 + delay_at(table, i as i64, ds)).clamp(lo, hi - 1);
        tweaked[i] = ddata[j as usize];
    }

    let search = SEARCH_RANGE_IN_TRANSFORM_LENGTH * nf;
    let mut doubly = tweaked.clone();
    let mut bounds = Vec::with_capacity(intervals.len());
    for &(start_frame, stop_frame_bi) in &intervals {
        let start_sample = start_frame * hop + off;
        let stop_sample = stop_frame_bi * hop + nf + off;
        let len = stop_sample - start_sample;
        let mut r = vec![T::zero(); 2 * search + len];
        r[search..search + len].copy_from_slice(&rdata[start_sample..stop_sample]);
        let d: Vec<T> = (0..2 * search + len)
            .map(|i| {
                let j = (start_sample as i64 - search as i64 + i as i64).clamp(lo, hi - 1);
                tweaked[j as usize]
            })
            .collect();
        let (mut delay, corr) = envelope_delay(f.m, &r, &d, search);
        if corr < T::lit(0.5) {
            delay = 0;
        }
        bounds.push((
            start_frame,
            stop_frame_bi.min(stop_frame),
            start_sample,
            stop_sample,
            delay,
        ));
    }
    for &(_, _, start_sample, stop_sample, delay) in &bounds {
        for i in start_sample..stop_sample {
            let j = (i as i64 + delay).clamp(0, max_n as i64 - 1);
            doubly[i] = tweaked[j as usize];
        }
    }

    for &(first, last, ..) in &bounds {
        for frame in first..last {
            f.warp_into(&doubly, off + frame * hop, frame, true);
        }
        f.m.gain_compensation(&f.ref_dens, &mut f.deg_dens, first..last);
        for frame in first..last {
            let (d, a) = f.frame_disturbance(frame);
            f.d_sym[frame] = f.d_sym[frame].min(d);
            f.d_asym[frame] = f.d_asym[frame].min(a);
        }
    }
    debug_assert!(f.deg_dens.len() == (stop_frame + 1) * nb);
    Ok(())
}
