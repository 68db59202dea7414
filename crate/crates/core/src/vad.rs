//! Energy-based voice activity detection on fixed windows.

use crate::scalar::Real;
use crate::tables::{JOIN_SPEECH_LENGTH, MIN_SPEECH_LENGTH};

/// Per-window activity: `vad` is the window energy where speech was detected
/// (0 elsewhere) and `log_vad` its log ratio to the speech threshold.
#[derive(Debug, Clone)]
pub(crate) struct Activity<T> {
    pub vad: Vec<T>,
    pub log_vad: Vec<T>,
}

fn rising<T: Real>(v: &[T], i: usize) -> bool {
    v[i] > T::zero() && v[i - 1] <= T::zero()
}

fn falling<T: Real>(v: &[T], i: usize) -> bool {
    v[i] <= T::zero() && v[i - 1] > T::zero()
}

/// Classifies `data[..windows * downsample]` window by window.
pub(crate) fn detect_activity<T: Real>(data: &[T], windows: usize, downsample: usize) -> Activity<T> {
    let zero = T::zero();
    let ds = T::from_usize_lossy(downsample);
    let nw = T::from_usize_lossy(windows);
    let mut vad: Vec<T> = data[..windows * downsample]
        .chunks_exact(downsample)
        .map(|w| w.iter().fold(zero, |acc, &g| acc + g * g) / ds)
        .collect();

    let mut thresh = vad.iter().fold(zero, |acc, &v| acc + v) / nw;
    let peak = vad.iter().fold(zero, |acc, &v| if v > acc { v } else { acc });
    let level_min = if peak > zero { peak * T::lit(1.0e-4) } else { T::one() };
    for v in vad.iter_mut() {
        if *v < level_min {
            *v = level_min;
        }
    }

    for _ in 0..12 {
        let mut noise = zero;
        let mut std_dev = zero;
        let mut count = 0usize;
        for &v in &vad {
            if v <= thresh {
                noise = noise + v;
                count += 1;
            }
        }
        if count > 0 {
            noise = noise / T::from_usize_lossy(count);
            for &v in &vad {
                if v <= thresh {
                    let g = v - noise;
                    std_dev = std_dev + g * g;
                }
            }
            std_dev = (std_dev / T::from_usize_lossy(count)).sqrt();
        }
        thresh = T::lit(1.001) * (noise + T::lit(2.0) * std_dev);
    }

    let mut noise = zero;
    let mut signal = zero;
    let mut count = 0usize;
    for &v in &vad {
        if v > thresh {
            signal = signal + v;
            count += 1;
        } else {
            noise = noise + v;
        }
    }
    if count > 0 {
        signal = signal / T::from_usize_lossy(count);
    } else {
        thresh = -T::one();
    }
    if count < windows {
        noise = noise / T::from_usize_lossy(windows - count);
    } else {
        noise = T::one();
    }

    for v in vad.iter_mut() {
        if *v <= thresh {
            *v = -*v;
        }
    }
    vad[0] = -level_min;
    vad[windows - 1] = -level_min;

    // Drop bursts of at most MIN_SPEECH_LENGTH windows.
    let mut start = 0;
    for i in 1..windows {
        if rising(&vad, i) {
            start = i;
        }
        if falling(&vad, i) && i - start <= MIN_SPEECH_LENGTH {
            for v in &mut vad[start..i] {
                *v = -*v;
            }
        }
    }

    // With a clean background, also drop weak bursts.
    if signal >= noise * T::lit(1000.0) {
        for i in 1..windows {
            if rising(&vad, i) {
                start = i;
            }
            if falling(&vad, i) {
                let sum = vad[start..i].iter().fold(zero, |acc, &v| acc + v);
                if sum < T::lit(3.0) * thresh * T::from_usize_lossy(i - start) {
                    for v in &mut vad[start..i] {
                        *v = -*v;
                    }
                }
            }
        }
    }

    // Bridge short pauses.
    let mut finish = 0;
    for i in 1..windows {
        if rising(&vad, i) && finish > 0 && i - finish <= JOIN_SPEECH_LENGTH {
            for v in &mut vad[finish..i] {
                *v = level_min;
            }
        }
        if falling(&vad, i) {
            finish = i;
        }
    }

    if !(1..windows).any(|i| rising(&vad, i)) {
        for v in vad.iter_mut() {
            *v = v.abs();
        }
        vad[0] = -level_min;
        vad[windows - 1] = -level_min;
    }

    // Soft onsets and offsets.
    let mut i = 3;
    while i + 2 < windows {
        if vad[i] > zero && vad[i - 2] <= zero {
            vad[i - 2] = vad[i] * T::lit(0.1);
            vad[i - 1] = vad[i] * T::lit(0.3);
            i += 1;
        }
        if vad[i] <= zero && vad[i - 1] > zero {
            vad[i] = vad[i - 1] * T::lit(0.3);
            vad[i + 1] = vad[i - 1] * T::lit(0.1);
            i += 3;
        }
        i += 1;
    }

    for v in vad.iter_mut() {
        if *v < zero {
            *v = zero;
        }
    }
    if thresh <= zero {
        thresh = level_min;
    }
    let log_vad = vad
        .iter()
        .map(|&v| if v <= thresh { zero } else { (v / thresh).ln() })
        .collect();
    Activity { vad, log_vad }
}
