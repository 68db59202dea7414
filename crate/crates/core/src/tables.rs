//! Constant tables of the perceptual model. Filter coefficients keep the
//! single-precision values of the ITU-T P.862 reference code; band tables keep
//! its double-precision values.
//!
//! The corrected wideband filter (P.862 Corrigendum 2) scales the numerator
//! of the wideband input IIR by 0.251188, about -12 dB.

#![allow(clippy::excessive_precision, clippy::unreadable_literal)]

/// Piecewise-linear magnitude response in dB, as (frequency Hz, gain dB).
pub(crate) type FilterCurve = [(f64, f64); 26];

/// Level-alignment band-pass (350-3250 Hz), `align_filter_dB`.
pub(crate) const ALIGN_FILTER_DB: FilterCurve = [
    (0.0, -500.0),
    (50.0, -500.0),
    (100.0, -500.0),
    (125.0, -500.0),
    (160.0, -500.0),
    (200.0, -500.0),
    (250.0, -500.0),
    (300.0, -500.0),
    (350.0, 0.0),
    (400.0, 0.0),
    (500.0, 0.0),
    (600.0, 0.0),
    (630.0, 0.0),
    (800.0, 0.0),
    (1000.0, 0.0),
    (1250.0, 0.0),
    (1600.0, 0.0),
    (2000.0, 0.0),
    (2500.0, 0.0),
    (3000.0, 0.0),
    (3250.0, 0.0),
    (3500.0, -500.0),
    (4000.0, -500.0),
    (5000.0, -500.0),
    (6300.0, -500.0),
    (8000.0, -500.0),
];

/// Standard IRS receive characteristic, `standard_IRS_filter_dB`.
pub(crate) const IRS_FILTER_DB: FilterCurve = [
    (0.0, -200.0),
    (50.0, -40.0),
    (100.0, -20.0),
    (125.0, -12.0),
    (160.0, -6.0),
    (200.0, 0.0),
    (250.0, 4.0),
    (300.0, 6.0),
    (350.0, 8.0),
    (400.0, 10.0),
    (500.0, 11.0),
    (600.0, 12.0),
    (700.0, 12.0),
    (800.0, 12.0),
    (1000.0, 12.0),
    (1300.0, 12.0),
    (1600.0, 12.0),
    (2000.0, 12.0),
    (2500.0, 12.0),
    (3000.0, 12.0),
    (3250.0, 12.0),
    (3500.0, 4.0),
    (4000.0, -200.0),
    (5000.0, -200.0),
    (6300.0, -200.0),
    (8000.0, -200.0),
];

/// Wideband input high-pass, one second-order section (b0, b1, b2, a1, a2).
pub(crate) const WB_IIR_8K: [f32; 5] = [2.6657628, -5.3315255, 2.6657628, -1.8890331, 0.89487434];
pub(crate) const WB_IIR_16K: [f32; 5] = [2.740826, -5.4816519, 2.740826, -1.9444777, 0.94597794];

/// Numerator gain applied by Corrigendum 2 to the wideband input filter.
pub(crate) const CORRIGENDUM2_GAIN: f64 = 0.251188;

/// Corrigendum 2 wideband section: numerator scaled in double precision and
/// stored in single precision, as the corrected reference build does.
pub(crate) fn corrected_wb_iir(base: &[f32; 5]) -> [f32; 5] {
    [
        (CORRIGENDUM2_GAIN * f64::from(base[0])) as f32,
        (CORRIGENDUM2_GAIN * f64::from(base[1])) as f32,
        (CORRIGENDUM2_GAIN * f64::from(base[2])) as f32,
        base[3],
        base[4],
    ]
}

/// Target mean power after level alignment (`TARGET_AVG_POWER`).
pub(crate) const TARGET_AVG_POWER: f64 = 1e7;

/// Lead-in/out of silence added around each signal, in alignment windows.
pub(crate) const SEARCHBUFFER: usize = 75;
/// Trailing zero padding, in milliseconds.
pub(crate) const DATAPADDING_MSECS: usize = 320;
pub(crate) const MAX_UTTERANCES: usize = 50;
pub(crate) const MIN_SPEECH_LENGTH: usize = 4;
pub(crate) const JOIN_SPEECH_LENGTH: usize = 50;
pub(crate) const MIN_UTTERANCE_LENGTH: i64 = 50;

/// Zwicker loudness exponent.
pub(crate) const ZWICKER_POWER: f64 = 0.23;
pub(crate) const SL_8K: f64 = 1.866055e-1;
pub(crate) const SP_8K: f64 = 2.764344e-5;
pub(crate) const SL_16K: f64 = 1.866055e-1;
pub(crate) const SP_16K: f64 = 6.910853e-6;

/// Norm orders: frame (over bands), split-second interval, whole signal.
pub(crate) const D_POW_F: f64 = 2.0;
pub(crate) const D_POW_S: f64 = 6.0;
pub(crate) const D_POW_T: f64 = 2.0;
pub(crate) const A_POW_F: f64 = 1.0;
pub(crate) const A_POW_S: f64 = 6.0;
pub(crate) const A_POW_T: f64 = 2.0;
pub(crate) const D_WEIGHT: f64 = 0.1;
pub(crate) const A_WEIGHT: f64 = 0.0309;

pub(crate) const FRAMES_PER_SPLIT_SECOND: usize = 20;
pub(crate) const SILENCE_5_SAMPLES: f64 = 500.0;
pub(crate) const THRESHOLD_BAD_FRAMES: f64 = 30.0;
pub(crate) const MIN_BAD_FRAMES_IN_INTERVAL: usize = 5;
pub(crate) const SMEAR_RANGE: usize = 2;
pub(crate) const SEARCH_RANGE_IN_TRANSFORM_LENGTH: usize = 4;
pub(crate) const MAX_GAIN_SCALE: f64 = 5.0;
pub(crate) const MIN_GAIN_SCALE: f64 = 3e-4;
pub(crate) const FREQ_COMP_MAX: f64 = 100.0;
pub(crate) const FREQ_COMP_MIN: f64 = 0.01;
pub(crate) const MAX_FRAME_DISTURBANCE: f64 = 45.0;

pub(crate) const NR_OF_HZ_BANDS_PER_BARK_BAND_8K: [usize; 42] = [
    1, 1, 1, 1, 1, 1, 1, 1, 2, 1, 1, 1, 1, 1, 2, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 4, 3, 4, 5, 4, 5, 6, 6, 7,
    8, 9, 9, 11,
];

pub(crate) const CENTRE_OF_BAND_BARK_8K: [f64; 42] = [
    0.078672, 0.316341, 0.636559, 0.961246, 1.290450, 1.624217, 1.962597, 2.305636, 2.653383, 3.005889, 3.363201,
    3.725371, 4.092449, 4.464486, 4.841533, 5.223642, 5.610866, 6.003256, 6.400869, 6.803755, 7.211971, 7.625571,
    8.044611, 8.469146, 8.899232, 9.334927, 9.776288, 10.223374, 10.676242, 11.134952, 11.599563, 12.070135, 12.546731,
    13.029408, 13.518232, 14.013264, 14.514566, 15.022202, 15.536238, 16.056736, 16.583761, 17.117382,
];

pub(crate) const CENTRE_OF_BAND_HZ_8K: [f64; 42] = [
    7.867213,
    31.634144,
    63.655895,
    96.124611,
    129.044968,
    162.421738,
    196.259659,
    230.563568,
    265.338348,
    300.588867,
    336.320129,
    372.537140,
    409.244934,
    446.448578,
    484.568604,
    526.600586,
    570.303833,
    619.423340,
    672.121643,
    728.525696,
    785.675964,
    846.835693,
    909.691650,
    977.063293,
    1049.861694,
    1129.635986,
    1217.257568,
    1312.109497,
    1412.501465,
    1517.999390,
    1628.894165,
    1746.194336,
    1871.568848,
    2008.776123,
    2158.979248,
    2326.743164,
    2513.787109,
    2722.488770,
    2952.586670,
    3205.835449,
    3492.679932,
    3820.219238,
];

pub(crate) const WIDTH_OF_BAND_BARK_8K: [f64; 42] = [
    0.157344, 0.317994, 0.322441, 0.326934, 0.331474, 0.336061, 0.340697, 0.345381, 0.350114, 0.354897, 0.359729,
    0.364611, 0.369544, 0.374529, 0.379565, 0.384653, 0.389794, 0.394989, 0.400236, 0.405538, 0.410894, 0.416306,
    0.421773, 0.427297, 0.432877, 0.438514, 0.444209, 0.449962, 0.455774, 0.461645, 0.467577, 0.473569, 0.479621,
    0.485736, 0.491912, 0.498151, 0.504454, 0.510819, 0.517250, 0.523745, 0.530308, 0.536934,
];

pub(crate) const POW_DENS_CORRECTION_FACTOR_8K: [f64; 42] = [
    100.000000, 99.999992, 100.000000, 100.000008, 100.000008, 100.000015, 99.999992, 99.999969, 50.000027, 100.000000,
    99.999969, 100.000015, 99.999947, 100.000061, 53.047077, 110.000046, 117.991989, 65.000000, 68.760147, 69.999931,
    71.428818, 75.000038, 76.843384, 80.968781, 88.646126, 63.864388, 68.155350, 72.547775, 75.584831, 58.379192,
    80.950836, 64.135651, 54.384785, 73.821884, 64.437073, 59.176456, 65.521278, 61.399822, 58.144047, 57.004543,
    64.126297, 59.248363,
];

pub(crate) const ABS_THRESH_POWER_8K: [f64; 42] = [
    51286152.000000,
    2454709.500000,
    70794.593750,
    4897.788574,
    1174.897705,
    389.045166,
    104.712860,
    45.708820,
    17.782795,
    9.772372,
    4.897789,
    3.090296,
    1.905461,
    1.258925,
    0.977237,
    0.724436,
    0.562341,
    0.457088,
    0.389045,
    0.331131,
    0.295121,
    0.269153,
    0.257040,
    0.251189,
    0.251189,
    0.251189,
    0.251189,
    0.263027,
    0.288403,
    0.309030,
    0.338844,
    0.371535,
    0.398107,
    0.436516,
    0.467735,
    0.489779,
    0.501187,
    0.501187,
    0.512861,
    0.524807,
    0.524807,
    0.524807,
];

pub(crate) const NR_OF_HZ_BANDS_PER_BARK_BAND_16K: [usize; 49] = [
    1, 1, 1, 1, 1, 1, 1, 1, 2, 1, 1, 1, 1, 1, 2, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 4, 3, 4, 5, 4, 5, 6, 6, 7,
    8, 9, 9, 12, 12, 15, 16, 18, 21, 25, 20,
];

pub(crate) const CENTRE_OF_BAND_BARK_16K: [f64; 49] = [
    0.078672, 0.316341, 0.636559, 0.961246, 1.290450, 1.624217, 1.962597, 2.305636, 2.653383, 3.005889, 3.363201,
    3.725371, 4.092449, 4.464486, 4.841533, 5.223642, 5.610866, 6.003256, 6.400869, 6.803755, 7.211971, 7.625571,
    8.044611, 8.469146, 8.899232, 9.334927, 9.776288, 10.223374, 10.676242, 11.134952, 11.599563, 12.070135, 12.546731,
    13.029408, 13.518232, 14.013264, 14.514566, 15.022202, 15.536238, 16.056736, 16.583761, 17.117382, 17.657663,
    18.204674, 18.758478, 19.319147, 19.886751, 20.461355, 21.043034,
];

pub(crate) const CENTRE_OF_BAND_HZ_16K: [f64; 49] = [
    7.867213,
    31.634144,
    63.655895,
    96.124611,
    129.044968,
    162.421738,
    196.259659,
    230.563568,
    265.338348,
    300.588867,
    336.320129,
    372.537140,
    409.244934,
    446.448578,
    484.568604,
    526.600586,
    570.303833,
    619.423340,
    672.121643,
    728.525696,
    785.675964,
    846.835693,
    909.691650,
    977.063293,
    1049.861694,
    1129.635986,
    1217.257568,
    1312.109497,
    1412.501465,
    1517.999390,
    1628.894165,
    1746.194336,
    1871.568848,
    2008.776123,
    2158.979248,
    2326.743164,
    2513.787109,
    2722.488770,
    2952.586670,
    3205.835449,
    3492.679932,
    3820.219238,
    4193.938477,
    4619.846191,
    5100.437012,
    5636.199219,
    6234.313477,
    6946.734863,
    7796.473633,
];

pub(crate) const WIDTH_OF_BAND_BARK_16K: [f64; 49] = [
    0.157344, 0.317994, 0.322441, 0.326934, 0.331474, 0.336061, 0.340697, 0.345381, 0.350114, 0.354897, 0.359729,
    0.364611, 0.369544, 0.374529, 0.379565, 0.384653, 0.389794, 0.394989, 0.400236, 0.405538, 0.410894, 0.416306,
    0.421773, 0.427297, 0.432877, 0.438514, 0.444209, 0.449962, 0.455774, 0.461645, 0.467577, 0.473569, 0.479621,
    0.485736, 0.491912, 0.498151, 0.504454, 0.510819, 0.517250, 0.523745, 0.530308, 0.536934, 0.543629, 0.550390,
    0.557220, 0.564119, 0.571085, 0.578125, 0.585232,
];

pub(crate) const POW_DENS_CORRECTION_FACTOR_16K: [f64; 49] = [
    100.000000, 99.999992, 100.000000, 100.000008, 100.000008, 100.000015, 99.999992, 99.999969, 50.000027, 100.000000,
    99.999969, 100.000015, 99.999947, 100.000061, 53.047077, 110.000046, 117.991989, 65.000000, 68.760147, 69.999931,
    71.428818, 75.000038, 76.843384, 80.968781, 88.646126, 63.864388, 68.155350, 72.547775, 75.584831, 58.379192,
    80.950836, 64.135651, 54.384785, 73.821884, 64.437073, 59.176456, 65.521278, 61.399822, 58.144047, 57.004543,
    64.126297, 54.311001, 61.114979, 55.077751, 56.849335, 55.628868, 53.137054, 54.985844, 79.546974,
];

pub(crate) const ABS_THRESH_POWER_16K: [f64; 49] = [
    51286152.000000,
    2454709.500000,
    70794.593750,
    4897.788574,
    1174.897705,
    389.045166,
    104.712860,
    45.708820,
    17.782795,
    9.772372,
    4.897789,
    3.090296,
    1.905461,
    1.258925,
    0.977237,
    0.724436,
    0.562341,
    0.457088,
    0.389045,
    0.331131,
    0.295121,
    0.269153,
    0.257040,
    0.251189,
    0.251189,
    0.251189,
    0.251189,
    0.263027,
    0.288403,
    0.309030,
    0.338844,
    0.371535,
    0.398107,
    0.436516,
    0.467735,
    0.489779,
    0.501187,
    0.501187,
    0.512861,
    0.524807,
    0.524807,
    0.524807,
    0.512861,
    0.478630,
    0.426580,
    0.371535,
    0.363078,
    0.416869,
    0.537032,
];

pub(crate) const ALIGN_IIR_8K: [f32; 40] = [
    0.885535424,
    -0.885535424,
    0.000000000,
    -0.771070709,
    0.000000000,
    0.895092588,
    1.292907193,
    0.449260174,
    1.268869037,
    0.442025372,
    4.049527940,
    -7.865190042,
    3.815662102,
    -1.746859852,
    0.786305963,
    0.500002353,
    -0.500002353,
    0.000000000,
    0.000000000,
    0.000000000,
    0.565002834,
    -0.241585934,
    -0.306009671,
    0.259688659,
    0.249979657,
    2.115237288,
    0.919935084,
    1.141240051,
    -1.587313419,
    0.665935315,
    0.912224584,
    -0.224397719,
    -0.641121413,
    -0.246029464,
    -0.556720590,
    0.444617727,
    -0.307589321,
    0.141638062,
    -0.996391149,
    0.502251622,
];

pub(crate) const ALIGN_IIR_16K: [f32; 60] = [
    0.325631521,
    -0.086782860,
    -0.238848661,
    -1.079416490,
    0.434583902,
    0.403961804,
    -0.556985881,
    0.153024077,
    -0.415115835,
    0.696590244,
    4.736162769,
    3.287251046,
    1.753289019,
    -1.859599046,
    0.876284034,
    0.365373469,
    0.000000000,
    0.000000000,
    -0.634626531,
    0.000000000,
    0.884811506,
    0.000000000,
    0.000000000,
    -0.256725271,
    0.141536777,
    0.723593055,
    -1.447186099,
    0.723593044,
    -1.129587469,
    0.657232737,
    1.644910855,
    -1.817280902,
    1.249658063,
    -1.778403899,
    0.801724355,
    0.633692689,
    -0.284644314,
    -0.319789663,
    0.000000000,
    0.000000000,
    1.032763031,
    0.268428979,
    0.602913323,
    0.000000000,
    0.000000000,
    1.001616361,
    -0.823749013,
    0.439731942,
    -0.885778255,
    0.000000000,
    0.752472096,
    -0.375388990,
    0.188977609,
    -0.077258216,
    0.247230734,
    1.023700575,
    0.001661628,
    0.521284240,
    -0.183867259,
    0.354324187,
];
