use thiserror::Error;

/// Failures while reading or writing RIFF/WAVE files.
#[derive(Debug, Error)]
pub enum WavError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed RIFF/WAVE header: {0}")]
    MalformedHeader(String),
    #[error("unsupported WAV encoding: format tag {format_tag}, {bits_per_sample} bits per sample (expected PCM16 or float32)")]
    UnsupportedCodec { format_tag: u16, bits_per_sample: u16 },
    #[error("WAV data chunk is empty")]
    EmptyData,
    #[error("unsupported channel count {0} (1 to 8 accepted)")]
    ChannelCount(u16),
}

/// Failures of the scoring pipeline and its entry points.
#[derive(Debug, Error)]
pub enum PesqError {
    #[error(transparent)]
    Wav(#[from] WavError),
    #[error("unsupported sample rate {0} Hz: resample to 8000 or 16000 Hz before scoring")]
    InvalidRate(u32),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("sample rate mismatch: configuration expects {expected} Hz, signal is {actual} Hz")]
    RateMismatch { expected: u32, actual: u32 },
    #[error("{what} is {seconds:.3} s long; scoring requires between 0.25 s and 64 s")]
    Duration { what: &'static str, seconds: f64 },
    #[error("expected a mono signal, got {0} channels")]
    NotMono(usize),
    #[error("channel count mismatch: reference has {reference}, degraded has {degraded}")]
    ChannelMismatch { reference: usize, degraded: usize },
    #[error("interleave strategy needs at least two channels")]
    InterleaveMono,
    #[error("channels have unequal lengths")]
    RaggedChannels,
    #[error("silent input: {0} has no power in the 350-3250 Hz band")]
    SilentInput(&'static str),
    #[error("no speech activity detected in the reference")]
    NoSpeechActivity,
    #[error("no utterances detected")]
    NoUtterances,
    #[error("score vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("at least two items are required, got {0}")]
    TooFewItems(usize),
    #[error("non-finite score at index {0}")]
    NonFinite(usize),
    #[error("manifest error: {0}")]
    Manifest(String),
}

pub type Result<T, E = PesqError> = std::result::Result<T, E>;
