//! Minimal RIFF/WAVE reader and writer (little-endian PCM16 and float32).

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::WavError;
use crate::scalar::Real;
use crate::signal::{AudioSignal, MAX_CHANNELS};

const FORMAT_PCM: u16 = 1;
const FORMAT_FLOAT: u16 = 3;
const FORMAT_EXTENSIBLE: u16 = 0xFFFE;

/// Float samples are mapped onto the 16-bit nominal scale with this factor.
pub const FLOAT_SCALE: f64 = 32768.0;

/// Sample encoding written by [`write_wav`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WavEncoding {
    Pcm16,
    Float32,
}

#[derive(Debug, Clone, Copy)]
struct Format {
    tag: u16,
    channels: u16,
    rate: u32,
    bits: u16,
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

fn parse_fmt(body: &[u8]) -> Result<Format, WavError> {
    if body.len() < 16 {
        return Err(WavError::MalformedHeader(format!("fmt chunk of {} bytes", body.len())));
    }
    let mut tag = u16_at(body, 0);
    let channels = u16_at(body, 2);
    let rate = u32_at(body, 4);
    let bits = u16_at(body, 14);
    if tag == FORMAT_EXTENSIBLE {
        // cbSize(2) validBits(2) channelMask(4) then the sub-format GUID
        if body.len() < 26 {
            return Err(WavError::MalformedHeader("truncated WAVE_FORMAT_EXTENSIBLE".into()));
        }
        tag = u16_at(body, 24);
    }
    Ok(Format {
        tag,
        channels,
        rate,
        bits,
    })
}

/// Decodes an in-memory RIFF/WAVE image.
pub fn parse_wav<T: Real>(bytes: &[u8]) -> Result<AudioSignal<T>, WavError> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(WavError::MalformedHeader("missing RIFF/WAVE signature".into()));
    }
    let mut pos = 12;
    let mut format = None;
    let mut data: Option<&[u8]> = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4) as usize;
        let start = pos + 8;
        // Some writers leave the data size unset; clamp to what is present.
        let end = start.saturating_add(size).min(bytes.len());
        match id {
            b"fmt " => format = Some(parse_fmt(&bytes[start..end])?),
            b"data" => {
                data = Some(&bytes[start..end]);
                break;
            }
            _ => {}
        }
        pos = start.saturating_add(size).saturating_add(size & 1);
    }
    let format = format.ok_or_else(|| WavError::MalformedHeader("no fmt chunk".into()))?;
    let data = data.ok_or_else(|| WavError::MalformedHeader("no data chunk".into()))?;

    if format.channels == 0 || usize::from(format.channels) > MAX_CHANNELS {
        return Err(WavError::ChannelCount(format.channels));
    }
    let channels = usize::from(format.channels);
    let samples: Vec<T> = match (format.tag, format.bits) {
        (FORMAT_PCM, 16) => data
            .chunks_exact(2)
            .map(|c| T::lit(f64::from(i16::from_le_bytes([c[0], c[1]]))))
            .collect(),
        (FORMAT_FLOAT, 32) => data
            .chunks_exact(4)
            .map(|c| T::lit(f64::from(f32::from_le_bytes([c[0], c[1], c[2], c[3]])) * FLOAT_SCALE))
            .collect(),
        (tag, bits) => {
            return Err(WavError::UnsupportedCodec {
                format_tag: tag,
                bits_per_sample: bits,
            })
        }
    };
    let frames = samples.len() / channels;
    if frames == 0 {
        return Err(WavError::EmptyData);
    }
    AudioSignal::from_interleaved(format.rate, channels, &samples[..frames * channels])
        .map_err(|e| WavError::MalformedHeader(e.to_string()))
}

/// Reads a PCM16 or float32 WAV file onto the 16-bit nominal scale.
pub fn read_wav<T: Real>(path: impl AsRef<Path>) -> Result<AudioSignal<T>, WavError> {
    parse_wav(&fs::read(path)?)
}

/// Encodes a signal as a canonical 44-byte-header RIFF/WAVE image.
///
/// PCM16 samples are rounded to the nearest integer and saturated; float32
/// samples are divided by [`FLOAT_SCALE`].
pub fn encode_wav<T: Real>(signal: &AudioSignal<T>, encoding: WavEncoding) -> Vec<u8> {
    let channels = signal.channel_count() as u16;
    let (tag, bits) = match encoding {
        WavEncoding::Pcm16 => (FORMAT_PCM, 16u16),
        WavEncoding::Float32 => (FORMAT_FLOAT, 32u16),
    };
    let block_align = channels * bits / 8;
    let samples = signal.interleaved_samples();
    let data_len = samples.len() * usize::from(bits / 8);

    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&((36 + data_len) as u32).to_le_bytes());
    out.extend_from_slice(b"WAVEfmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&tag.to_le_bytes());
    out.extend_from_slice(&channels.to_le_bytes());
    out.extend_from_slice(&signal.rate().to_le_bytes());
    out.extend_from_slice(&(signal.rate() * u32::from(block_align)).to_le_bytes());
    out.extend_from_slice(&block_align.to_le_bytes());
    out.extend_from_slice(&bits.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for s in samples {
        match encoding {
            WavEncoding::Pcm16 => out.extend_from_slice(&to_i16(s.as_f64()).to_le_bytes()),
            WavEncoding::Float32 => out.extend_from_slice(&((s.as_f64() / FLOAT_SCALE) as f32).to_le_bytes()),
        }
    }
    out
}

pub fn write_wav<T: Real>(
    path: impl AsRef<Path>,
    signal: &AudioSignal<T>,
    encoding: WavEncoding,
) -> Result<(), WavError> {
    let mut f = fs::File::create(path)?;
    f.write_all(&encode_wav(signal, encoding))?;
    Ok(())
}

/// Rounds and saturates to the 16-bit range.
pub fn to_i16(x: f64) -> i16 {
    x.round().clamp(-32768.0, 32767.0) as i16
}
