// Copyright 2026 The aqagen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! RIFF WAV input and output.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use crate::audio::{to_i16, Waveform};

#[derive(Debug, thiserror::Error)]
pub enum WavError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Codec {
        path: String,
        #[source]
        source: hound::Error,
    },
    #[error("{path}: unsupported format ({reason})")]
    Unsupported { path: String, reason: String },
}

/// A decoded file before any conversion to the pipeline's sample rate.
#[derive(Debug, Clone)]
pub struct DecodedWav {
    pub samples: Vec<f64>,
    pub rate: u32,
    pub bits: u16,
}

fn codec_err(path: &Path) -> impl FnOnce(hound::Error) -> WavError + '_ {
    move |source| match source {
        hound::Error::IoError(source) => WavError::Io {
            path: path.display().to_string(),
            source,
        },
        other => WavError::Codec {
            path: path.display().to_string(),
            source: other,
        },
    }
}

/// Reads a mono integer PCM file (16 or 24 bit). Samples are normalized so
/// that full scale maps to [-1, +1).
pub fn read_wav(path: &Path) -> Result<DecodedWav, WavError> {
    let reader = hound::WavReader::open(path).map_err(codec_err(path))?;
    let spec = reader.spec();
    let unsupported = |reason: String| WavError::Unsupported {
        path: path.display().to_string(),
        reason,
    };
    if spec.channels != 1 {
        return Err(unsupported(format!("{} channels, expected mono", spec.channels)));
    }
    if spec.sample_format != hound::SampleFormat::Int || !matches!(spec.bits_per_sample, 16 | 24) {
        return Err(unsupported(format!(
            "{:?} {}-bit, expected 16- or 24-bit PCM",
            spec.sample_format, spec.bits_per_sample
        )));
    }
    let scale = (1i64 << (spec.bits_per_sample - 1)) as f64;
    let samples = reader
        .into_samples::<i32>()
        .map(|s| s.map(|v| v as f64 / scale))
        .collect::<Result<Vec<_>, _>>()
        .map_err(codec_err(path))?;
    Ok(DecodedWav {
        samples,
        rate: spec.sample_rate,
        bits: spec.bits_per_sample,
    })
}

/// Writes 16-bit mono PCM, rounding each sample to the nearest code.
pub fn write_wav(audio: &Waveform, path: &Path) -> Result<(), WavError> {
    let file = File::create(path).map_err(|source| WavError::Io {
        path: path.display().to_string(),
        source,
    })?;
    write_wav_to(audio, BufWriter::new(file)).map_err(codec_err(path))
}

/// Encodes 16-bit mono PCM into any seekable sink.
pub fn write_wav_to<W: std::io::Write + std::io::Seek>(audio: &Waveform, sink: W) -> Result<(), hound::Error> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: audio.rate(),
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut writer = hound::WavWriter::new(sink, spec)?;
    {
        let mut w16 = writer.get_i16_writer(audio.len() as u32);
        for &x in audio.samples() {
            w16.write_sample(to_i16(x));
        }
        w16.flush()?;
    }
    writer.finalize()
}

/// Encodes to an in-memory WAV file.
pub fn encode_wav(audio: &Waveform) -> Vec<u8> {
    let mut cursor = std::io::Cursor::new(Vec::new());
    write_wav_to(audio, &mut cursor).expect("in-memory WAV encoding cannot fail");
    cursor.into_inner()
}
