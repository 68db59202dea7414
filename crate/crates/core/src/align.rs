//! Time alignment: crude envelope delay, utterance search, histogram-based
//! fine alignment and splitting of utterances whose delay changes.

use crate::dsp::{hann, Spectral};
use crate::level::Padded;
use crate::params::RateParams;
use crate::scalar::Real;
use crate::tables::{MAX_UTTERANCES, MIN_UTTERANCE_LENGTH, SEARCHBUFFER};
use crate::vad::Activity;

/// One aligned utterance. `start` and `end` count alignment windows of
/// `window` samples from the beginning of the signal; `delay` is in samples
/// (positive when the degraded signal lags).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Utterance {
    pub start: i64,
    pub end: i64,
    pub delay: i64,
    pub confidence: f64,
}

/// Delay map between reference and degraded signal.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AlignmentResult {
    /// Whole-signal delay from the envelope cross-correlation, in samples.
    pub crude_delay: i64,
    /// Samples per alignment window.
    pub window: usize,
    pub utterances: Vec<Utterance>,
}

/// Working state with the same layout as the model expects: window indices
/// include the leading silence.
#[derive(Debug, Clone, Default)]
pub(crate) struct UttTable<T> {
    pub crude: i64,
    pub search_start: Vec<i64>,
    pub search_end: Vec<i64>,
    pub delay_est: Vec<i64>,
    pub delay: Vec<i64>,
    pub conf: Vec<T>,
    pub start: Vec<i64>,
    pub end: Vec<i64>,
}

impl<T: Real> UttTable<T> {
    pub fn len(&self) -> usize {
        self.start.len()
    }

    fn insert_after(&mut self, id: usize) {
        let i = id + 1;
        let d = self.delay_est[id];
        self.delay_est.insert(i, d);
        let d = self.delay[id];
        self.delay.insert(i, d);
        let c = self.conf[id];
        self.conf.insert(i, c);
        let s = self.start[id];
        self.start.insert(i, s);
        let e = self.end[id];
        self.end.insert(i, e);
        self.search_start.insert(i, self.search_start[id]);
        self.search_end.insert(i, self.search_end[id]);
        // Entries shifted up by the insertion carry their utterance bounds as
        // search bounds, as the reference does.
        for k in i + 1..self.len() {
            self.search_start[k] = self.start[k];
            self.search_end[k] = self.end[k];
        }
    }

    pub fn to_result(&self, p: &RateParams) -> AlignmentResult {
        let sb = SEARCHBUFFER as i64;
        AlignmentResult {
            crude_delay: self.crude,
            window: p.downsample,
            utterances: (0..self.len())
                .map(|i| Utterance {
                    start: self.start[i] - sb,
                    end: self.end[i] - sb,
                    delay: self.delay[i],
                    confidence: self.conf[i].as_f64(),
                })
                .collect(),
        }
    }
}

/// Best split found by [`Aligner::split_align`].
#[derive(Debug, Clone, Copy)]
struct Split<T> {
    ed1: i64,
    d1: i64,
    dc1: T,
    ed2: i64,
    d2: i64,
    dc2: T,
    bp: i64,
}

pub(crate) struct Aligner<'a, T: Real> {
    pub p: &'a RateParams,
    pub reference: &'a Padded<T>,
    pub degraded: &'a Padded<T>,
    pub ref_act: &'a Activity<T>,
    pub deg_act: &'a Activity<T>,
    pub fft: &'a mut Spectral<T>,
    window: Vec<T>,
}

impl<'a, T: Real> Aligner<'a, T> {
    pub fn new(
        p: &'a RateParams,
        reference: &'a Padded<T>,
        degraded: &'a Padded<T>,
        ref_act: &'a Activity<T>,
        deg_act: &'a Activity<T>,
        fft: &'a mut Spectral<T>,
    ) -> Self {
        Self {
            p,
            reference,
            degraded,
            ref_act,
            deg_act,
            fft,
            window: hann(p.align_nfft),
        }
    }

    fn ds(&self) -> i64 {
        self.p.downsample as i64
    }

    fn deg_windows(&self) -> i64 {
        (self.degraded.nsamples / self.p.downsample) as i64
    }

    /// Peak lag (in windows) of the envelope cross-correlation; 0 when either
    /// span is degenerate or the correlation has no positive peak.
    fn envelope_lag(&mut self, startr: i64, nr: i64, startd: i64, nd: i64) -> i64 {
        if nr <= 1 || nd <= 1 {
            return 0;
        }
        let x1 = &self.ref_act.log_vad[startr as usize..(startr + nr) as usize];
        let x2 = &self.deg_act.log_vad[startd as usize..(startd + nd) as usize];
        let y = self.fft.xcorr(x1, x2);
        let mut best = T::zero();
        let mut i_max = nr - 1;
        for (k, &v) in y.iter().enumerate() {
            if v > best {
                best = v;
                i_max = k as i64;
            }
        }
        i_max - nr + 1
    }

    /// Whole-signal crude delay in samples.
    pub fn crude_delay(&mut self) -> i64 {
        let nr = (self.reference.nsamples / self.p.downsample) as i64;
        let nd = self.deg_windows();
        self.envelope_lag(0, nr, 0, nd) * self.ds()
    }

    /// Envelope delay of the reference windows `[start, end)` around the
    /// estimate `est` (samples); returns the refined estimate.
    fn span_delay(&mut self, start: i64, end: i64, est: i64) -> i64 {
        let ds = self.ds();
        let mut startr = start;
        let mut startd = startr + est / ds;
        if startd < 0 {
            startr = -est / ds;
            startd = 0;
        }
        let nr = end - startr;
        let mut nd = nr;
        if startd + nd > self.deg_windows() {
            nd = self.deg_windows() - startd;
        }
        self.envelope_lag(startr, nr, startd, nd) * ds + est
    }

    /// Accepted speech spans of the reference VAD, as (start, end) windows.
    fn speech_spans(&self, crude: i64) -> Vec<(i64, i64, i64)> {
        let vad = &self.ref_act.vad;
        let len = vad.len() as i64;
        let ds = self.ds();
        let min_len = MIN_UTTERANCE_LENGTH;
        let del_start = min_len - crude / ds;
        let del_end = (self.degraded.nsamples as i64 - crude) / ds - min_len;
        let mut spans = Vec::new();
        let mut active = false;
        let mut this_start = 0;
        for (count, &v) in vad.iter().enumerate() {
            let count = count as i64;
            if v > T::zero() && !active {
                active = true;
                this_start = count;
            }
            if (v == T::zero() || count == len - 1) && active {
                active = false;
                if count - this_start >= min_len && this_start < del_end && count > del_start {
                    spans.push((this_start, count, len));
                }
            }
        }
        spans
    }

    fn search_windows(&self, table: &mut UttTable<T>) {
        let sb = SEARCHBUFFER as i64;
        for (s, e, len) in self.speech_spans(table.crude) {
            table.search_start.push((s - sb).max(0));
            table.search_end.push((e + sb).min(len - 1));
        }
        let n = table.search_start.len();
        table.delay_est = vec![0; n];
        table.delay = vec![0; n];
        table.conf = vec![T::zero(); n];
    }

    /// Fine delay of one utterance from a histogram of frame-wise
    /// cross-correlation peaks.
    fn time_align(&mut self, table: &mut UttTable<T>, id: usize) {
        let nfft = self.p.align_nfft;
        let ds = self.ds();
        let est = table.delay_est[id];
        let mut hist = vec![T::zero(); nfft];
        let mut startr = table.search_start[id] * ds;
        let mut startd = startr + est;
        if startd < 0 {
            startr = -est;
            startd = 0;
        }
        let n = nfft as i64;
        while startd + n <= self.degraded.nsamples as i64 && startr + n <= table.search_end[id] * ds {
            let corr = self.frame_correlation(startr as usize, startd as usize);
            let v_max = corr.iter().fold(T::zero(), |m, &x| if x > m { x } else { m }) * T::lit(0.99);
            let weight = T::lit(v_max.as_f64().powf(0.125));
            for (h, &c) in hist.iter_mut().zip(&corr) {
                if c > v_max {
                    *h = *h + weight;
                }
            }
            startr += n / 4;
            startd += n / 4;
        }

        let hsum = hist.iter().fold(T::zero(), |a, &b| a + b);
        let kernel = nfft / 64;
        let mut tri = vec![T::zero(); nfft];
        tri[0] = T::one();
        for c in 1..kernel {
            let v = T::one() - T::from_usize_lossy(c) / T::from_usize_lossy(kernel);
            tri[c] = v;
            tri[nfft - c] = v;
        }
        let smooth = self.fft.circular_conv(&hist, &tri);
        let smooth: Vec<T> = smooth
            .iter()
            .map(|&x| if hsum > T::zero() { x.abs() / hsum } else { T::zero() })
            .collect();
        let (i_max, v_max) = histogram_peak(&smooth);
        table.delay[id] = est + i_max;
        table.conf[id] = v_max;
    }

    /// |circular cross-correlation| of Hann-windowed frames.
    fn frame_correlation(&mut self, startr: usize, startd: usize) -> Vec<T> {
        let nfft = self.p.align_nfft;
        let x1: Vec<T> = self.reference.data[startr..startr + nfft]
            .iter()
            .zip(&self.window)
            .map(|(&a, &w)| a * w)
            .collect();
        let x2: Vec<T> = self.degraded.data[startd..startd + nfft]
            .iter()
            .zip(&self.window)
            .map(|(&a, &w)| a * w)
            .collect();
        self.fft.circular_xcorr(&x1, &x2).into_iter().map(|x| x.abs()).collect()
    }

    /// Adds one frame's correlation peaks to a triangular-kernel histogram.
    fn accumulate(&mut self, startr: i64, startd: i64, hist: &mut [T], hsum: &mut T) {
        let nfft = self.p.align_nfft;
        let kernel = (nfft / 64) as i64;
        let corr = self.frame_correlation(startr as usize, startd as usize);
        let v_max = corr.iter().fold(T::zero(), |m, &x| if x > m { x } else { m }) * T::lit(0.99);
        let kf = T::from_i64_lossy(kernel);
        let n_max = T::lit(v_max.as_f64().powf(0.125)) / kf;
        for (count, &c) in corr.iter().enumerate() {
            if c > v_max {
                *hsum = *hsum + n_max * kf;
                for k in 1 - kernel..kernel {
                    let idx = (count as i64 + k + nfft as i64) as usize % nfft;
                    hist[idx] = hist[idx] + n_max * (kf - T::from_i64_lossy(k.abs()));
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn split_align(
        &mut self,
        utt_start: i64,
        speech_start: i64,
        speech_end: i64,
        utt_end: i64,
        delay_est: i64,
        delay_conf: T,
    ) -> Option<Split<T>> {
        let nfft = self.p.align_nfft as i64;
        let ds = self.ds();
        let deg_n = self.degraded.nsamples as i64;
        let utt_len = speech_end - speech_start;
        let delta = nfft / (4 * ds);
        let step = ((0.801 * utt_len as f64 + (40 * delta) as f64 - 1.0) / (40 * delta) as f64) as i64 * delta;
        let pad = (utt_len / 10).max(75);

        let mut bps = vec![speech_start + pad];
        loop {
            let next = bps[bps.len() - 1] + step;
            bps.push(next);
            if !(next <= speech_end - pad && bps.len() - 1 < 40) {
                break;
            }
        }
        let n_bps = bps.len() - 1;

        let mut ed1 = vec![0i64; n_bps];
        let mut ed2 = vec![0i64; n_bps];
        for bp in 0..n_bps {
            ed1[bp] = self.span_delay(utt_start, bps[bp], delay_est);
            ed2[bp] = self.span_delay(bps[bp], utt_end, delay_est);
        }

        let unset = T::lit(-2.0);
        let mut d1 = vec![0i64; n_bps];
        let mut dc1 = vec![unset; n_bps];
        while let Some(first) = (0..n_bps).find(|&b| dc1[b] <= unset) {
            let est = ed1[first];
            let mut hist = vec![T::zero(); nfft as usize];
            let mut hsum = T::zero();
            let mut startr = utt_start * ds;
            let mut startd = startr + est;
            if startd < 0 {
                startr = -est;
                startd = 0;
            }
            let mut bp = first;
            loop {
                while startd + nfft <= deg_n && startr + nfft <= bps[bp] * ds {
                    self.accumulate(startr, startd, &mut hist, &mut hsum);
                    startr += nfft / 4;
                    startd += nfft / 4;
                }
                let (i_max, v_max) = histogram_peak(&hist);
                d1[bp] = est + i_max;
                dc1[bp] = if hsum > T::zero() { v_max / hsum } else { T::zero() };
                match (bp + 1..n_bps).find(|&b| ed1[b] == est && dc1[b] <= unset) {
                    Some(b) => bp = b,
                    None => break,
                }
            }
        }

        let mut d2 = vec![0i64; n_bps];
        let mut dc2: Vec<T> = dc1
            .iter()
            .map(|&c| if c > delay_conf { unset } else { T::zero() })
            .collect();
        while let Some(last) = (0..n_bps).rev().find(|&b| dc2[b] <= unset) {
            let est = ed2[last];
            let mut hist = vec![T::zero(); nfft as usize];
            let mut hsum = T::zero();
            let mut startr = utt_end * ds - nfft;
            let mut startd = startr + est;
            if startd + nfft > deg_n {
                startd = deg_n - nfft;
                startr = startd - est;
            }
            let mut bp = last;
            loop {
                while startd >= 0 && startr >= bps[bp] * ds {
                    self.accumulate(startr, startd, &mut hist, &mut hsum);
                    startr -= nfft / 4;
                    startd -= nfft / 4;
                }
                let (i_max, v_max) = histogram_peak(&hist);
                d2[bp] = est + i_max;
                dc2[bp] = if hsum > T::zero() { v_max / hsum } else { T::zero() };
                match (0..bp).rev().find(|&b| ed2[b] == est && dc2[b] <= unset) {
                    Some(b) => bp = b,
                    None => break,
                }
            }
        }

        let mut best: Option<Split<T>> = None;
        for bp in 0..n_bps {
            let (bdc1, bdc2) = best.map_or((T::zero(), T::zero()), |b| (b.dc1, b.dc2));
            if (d2[bp] - d1[bp]).abs() >= ds
                && dc1[bp] + dc2[bp] > bdc1 + bdc2
                && dc1[bp] > delay_conf
                && dc2[bp] > delay_conf
            {
                best = Some(Split {
                    ed1: ed1[bp],
                    d1: d1[bp],
                    dc1: dc1[bp],
                    ed2: ed2[bp],
                    d2: d2[bp],
                    dc2: dc2[bp],
                    bp: bps[bp],
                });
            }
        }
        best
    }

    /// Final utterance boundaries, placed halfway between speech spans and
    /// kept clear of the signal edges.
    fn utterance_bounds(&self, table: &mut UttTable<T>) {
        let n = table.delay.len();
        let ds = self.ds();
        let sb = SEARCHBUFFER as i64;
        let deg_n = self.degraded.nsamples as i64;
        let spans = self.speech_spans(table.crude);
        table.start = spans.iter().map(|s| s.0).collect();
        table.end = spans.iter().map(|s| s.1).collect();
        table.start.truncate(n);
        table.end.truncate(n);
        let len = self.ref_act.vad.len() as i64;

        table.start[0] = sb;
        table.end[n - 1] = len - sb;
        for u in 1..n {
            let mid = (table.start[u] + table.end[u - 1]) / 2;
            table.start[u] = mid;
            table.end[u - 1] = mid;
        }

        if table.start[0] * ds + table.delay[0] < sb * ds {
            table.start[0] = sb + (ds - 1 - table.delay[0]) / ds;
        }
        if table.end[n - 1] * ds + table.delay[n - 1] > deg_n - sb * ds {
            table.end[n - 1] = (deg_n - table.delay[n - 1]) / ds - sb;
        }

        for u in 1..n {
            let this_start = table.start[u] * ds + table.delay[u];
            let last_end = table.end[u - 1] * ds + table.delay[u - 1];
            if this_start < last_end {
                let mid = (this_start + last_end) / 2;
                table.start[u] = (ds - 1 + mid - table.delay[u]) / ds;
                table.end[u - 1] = (mid - table.delay[u - 1]) / ds;
            }
        }
    }

    fn utterance_split(&mut self, table: &mut UttTable<T>) {
        let ds = self.ds();
        let sb = SEARCHBUFFER as i64;
        let deg_n = self.degraded.nsamples as i64;
        let mut id = 0;
        while id < table.len() && table.len() < MAX_UTTERANCES {
            let (start, end) = (table.start[id], table.end[id]);
            let vad = &self.ref_act.vad;
            let mut speech_start = start;
            while speech_start < end && vad[speech_start as usize] <= T::zero() {
                speech_start += 1;
            }
            let mut speech_end = end;
            while speech_end > start && vad[speech_end as usize] <= T::zero() {
                speech_end -= 1;
            }
            speech_end += 1;

            let conf = table.conf[id];
            let split = if speech_end - speech_start >= 200 {
                self.split_align(start, speech_start, speech_end, end, table.delay_est[id], conf)
                    .filter(|s| s.dc1 > conf && s.dc2 > conf)
            } else {
                None
            };
            let Some(s) = split else {
                id += 1;
                continue;
            };

            table.insert_after(id);
            table.delay_est[id] = s.ed1;
            table.delay[id] = s.d1;
            table.conf[id] = s.dc1;
            table.delay_est[id + 1] = s.ed2;
            table.delay[id + 1] = s.d2;
            table.conf[id + 1] = s.dc2;

            table.start[id] = start;
            table.end[id + 1] = end;
            if s.d2 < s.d1 {
                table.end[id] = s.bp;
                table.start[id + 1] = s.bp;
            } else {
                table.end[id] = s.bp + (s.d2 - s.d1) / (2 * ds);
                table.start[id + 1] = s.bp - (s.d2 - s.d1) / (2 * ds);
            }
            if (table.start[id] - sb) * ds + s.d1 < 0 {
                table.start[id] = sb + (ds - 1 - s.d1) / ds;
            }
            if table.end[id + 1] * ds + s.d2 > deg_n - sb * ds {
                table.end[id + 1] = (deg_n - s.d2) / ds - sb;
            }
        }
    }

    /// Runs the whole alignment. Returns an empty table when the reference
    /// has no usable speech span.
    pub fn run(&mut self) -> UttTable<T> {
        let mut table = UttTable {
            crude: self.crude_delay(),
            ..UttTable::default()
        };
        self.search_windows(&mut table);
        let n = table.search_start.len();
        if n == 0 {
            return table;
        }
        for id in 0..n {
            table.delay_est[id] = self.span_delay(table.search_start[id], table.search_end[id], table.crude);
            self.time_align(&mut table, id);
        }
        self.utterance_bounds(&mut table);
        self.utterance_split(&mut table);
        table
    }
}

/// First maximum of a circular delay histogram, as (signed lag, value).
fn histogram_peak<T: Real>(h: &[T]) -> (i64, T) {
    let n = h.len() as i64;
    let mut v_max = T::zero();
    let mut i_max = 0i64;
    for (i, &v) in h.iter().enumerate() {
        if v > v_max {
            v_max = v;
            i_max = i as i64;
        }
    }
    if i_max >= n / 2 {
        i_max -= n;
    }
    (i_max, v_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_peak_wraps_negative_lags() {
        let mut h = vec![0.0f64; 8];
        h[6] = 1.0;
        assert_eq!(histogram_peak(&h), (-2, 1.0));
        h[1] = 1.0;
        assert_eq!(histogram_peak(&h), (1, 1.0));
        assert_eq!(histogram_peak(&[0.0f64; 4]), (0, 0.0));
    }
}
