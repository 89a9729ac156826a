//! WAV reading and writing.

use std::path::{Path, PathBuf};

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};
use ndarray::{Array2, ArrayView2, Axis};

use crate::error::{Error, Result};

/// Multichannel audio, `channels x samples`, scaled to `[-1, 1]` for integer formats.
#[derive(Debug, Clone, PartialEq)]
pub struct Audio {
    pub samples: Array2<f64>,
    pub fs: u32,
}

impl Audio {
    pub fn channels(&self) -> usize {
        self.samples.nrows()
    }

    pub fn len(&self) -> usize {
        self.samples.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.ncols() == 0
    }
}

fn wav_err(path: &Path) -> impl FnOnce(hound::Error) -> Error + '_ {
    move |source| Error::Wav {
        path: path.to_path_buf(),
        source,
    }
}

pub fn read_wav(path: &Path) -> Result<Audio> {
    let mut reader = WavReader::open(path).map_err(wav_err(path))?;
    let spec = reader.spec();
    let channels = spec.channels as usize;
    let interleaved: Vec<f64> = match spec.sample_format {
        SampleFormat::Float => reader
            .samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<std::result::Result<_, _>>()
            .map_err(wav_err(path))?,
        SampleFormat::Int => {
            let scale = 1.0 / (1u64 << (spec.bits_per_sample - 1)) as f64;
            reader
                .samples::<i32>()
                .map(|s| s.map(|v| v as f64 * scale))
                .collect::<std::result::Result<_, _>>()
                .map_err(wav_err(path))?
        }
    };
    let frames = interleaved.len() / channels.max(1);
    let samples = Array2::from_shape_vec((frames, channels), interleaved)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?
        .reversed_axes()
        .as_standard_layout()
        .into_owned();
    Ok(Audio { samples, fs: spec.sample_rate })
}

/// Reads either one multichannel file or a set of files whose channels are
/// concatenated in lexicographic path order.
pub fn read_channels(paths: &[PathBuf]) -> Result<Audio> {
    match paths {
        [] => Err(Error::InvalidInput("no input files given".into())),
        [single] => read_wav(single),
        _ => {
            let mut sorted = paths.to_vec();
            sorted.sort();
            let parts = sorted.iter().map(|p| read_wav(p)).collect::<Result<Vec<_>>>()?;
            let fs = parts[0].fs;
            let len = parts[0].len();
            for (p, a) in sorted.iter().zip(&parts) {
                if a.fs != fs || a.len() != len {
                    return Err(Error::InvalidInput(format!(
                        "{} has {} samples at {} Hz, expected {len} at {fs} Hz",
                        p.display(),
                        a.len(),
                        a.fs
                    )));
                }
            }
            let views: Vec<ArrayView2<'_, f64>> = parts.iter().map(|a| a.samples.view()).collect();
            let samples = ndarray::concatenate(Axis(0), &views)
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
            Ok(Audio { samples, fs })
        }
    }
}

/// Writes 32-bit float PCM.
pub fn write_wav(path: &Path, samples: ArrayView2<'_, f64>, fs: u32) -> Result<()> {
    let spec = WavSpec {
        channels: samples.nrows() as u16,
        sample_rate: fs,
        bits_per_sample: 32,
        sample_format: SampleFormat::Float,
    };
    let mut writer = WavWriter::create(path, spec).map_err(wav_err(path))?;
    for t in 0..samples.ncols() {
        for ch in 0..samples.nrows() {
            writer.write_sample(samples[[ch, t]] as f32).map_err(wav_err(path))?;
        }
    }
    writer.finalize().map_err(wav_err(path))
}
