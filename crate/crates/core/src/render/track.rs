//! Loading layer media into loop buffers at the scene sample rate.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use super::synth::{self, SYNTH_PREFIX};
use crate::scene::{LayerId, SceneDescriptor};

#[derive(Debug, Error)]
pub enum TrackError {
    #[error("layer `{layer}`: cannot read {}: {source}", .path.display())]
    Read {
        layer: LayerId,
        path: PathBuf,
        #[source]
        source: hound::Error,
    },
    #[error("layer `{layer}`: {} has {channels} channels, expected mono", .path.display())]
    NotMono {
        layer: LayerId,
        path: PathBuf,
        channels: u16,
    },
    #[error("layer `{layer}`: unsupported sample format ({bits}-bit {format:?})")]
    Format {
        layer: LayerId,
        bits: u16,
        format: hound::SampleFormat,
    },
    #[error("layer `{layer}`: unknown synthetic source `{name}`")]
    UnknownSynth { layer: LayerId, name: String },
}

/// Mono loop buffer. Always at least one sample long.
#[derive(Debug, Clone, PartialEq)]
pub struct Track {
    samples: Arc<[f32]>,
}

impl Track {
    pub fn new(samples: Vec<f32>) -> Self {
        let samples = if samples.is_empty() { vec![0.0] } else { samples };
        Self {
            samples: samples.into(),
        }
    }

    pub fn samples(&self) -> &[f32] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// The three layer tracks, indexed by [`LayerId::index`].
#[derive(Debug, Clone, PartialEq)]
pub struct Tracks {
    pub layers: [Track; 3],
}

impl Tracks {
    pub fn get(&self, layer: LayerId) -> &Track {
        &self.layers[layer.index()]
    }

    /// Loads every layer of `scene`.
    pub fn load(scene: &SceneDescriptor) -> Result<Tracks, TrackError> {
        let sr = scene.constants.sample_rate;
        let load = |id: LayerId| -> Result<Track, TrackError> {
            let layer = scene.layer(id);
            let frames = loop_frames(layer.duration, sr);
            let samples = match layer.media.strip_prefix(SYNTH_PREFIX) {
                Some(name) => synth::generate(name, sr, frames).ok_or_else(|| TrackError::UnknownSynth {
                    layer: id,
                    name: name.to_string(),
                })?,
                None => {
                    let path = resolve(scene.base_dir.as_deref(), &layer.media);
                    let (raw, file_rate) = read_mono_wav(id, &path)?;
                    fit_length(resample_linear(&raw, file_rate, sr), frames)
                }
            };
            Ok(Track::new(samples))
        };
        Ok(Tracks {
            layers: [load(LayerId::Natural)?, load(LayerId::Human)?, load(LayerId::Radio)?],
        })
    }
}

/// Loop length in samples for a layer duration.
pub fn loop_frames(duration: f64, sample_rate: u32) -> usize {
    ((duration * f64::from(sample_rate)).round() as usize).max(1)
}

fn resolve(base: Option<&Path>, media: &str) -> PathBuf {
    let p = Path::new(media);
    match base {
        Some(base) if p.is_relative() => base.join(p),
        _ => p.to_path_buf(),
    }
}

fn read_mono_wav(layer: LayerId, path: &Path) -> Result<(Vec<f32>, u32), TrackError> {
    let read_err = |source| TrackError::Read {
        layer,
        path: path.to_path_buf(),
        source,
    };
    let mut reader = hound::WavReader::open(path).map_err(read_err)?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(TrackError::NotMono {
            layer,
            path: path.to_path_buf(),
            channels: spec.channels,
        });
    }
    let samples = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Int, 16) => reader
            .samples::<i16>()
            .map(|s| s.map(|v| f32::from(v) / 32768.0))
            .collect::<Result<Vec<_>, _>>()
            .map_err(read_err)?,
        (hound::SampleFormat::Float, 32) => reader
            .samples::<f32>()
            .collect::<Result<Vec<_>, _>>()
            .map_err(read_err)?,
        (format, bits) => return Err(TrackError::Format { layer, bits, format }),
    };
    Ok((samples, spec.sample_rate))
}

/// Linear-interpolation resampling from `from` Hz to `to` Hz.
pub fn resample_linear(input: &[f32], from: u32, to: u32) -> Vec<f32> {
    if from == to || input.is_empty() {
        return input.to_vec();
    }
    let ratio = f64::from(from) / f64::from(to);
    let out_len = ((input.len() as f64) / ratio).round() as usize;
    (0..out_len)
        .map(|i| {
            let pos = i as f64 * ratio;
            let idx = pos.floor() as usize;
            let frac = pos - idx as f64;
            let a = f64::from(input[idx.min(input.len() - 1)]);
            let b = f64::from(input[(idx + 1).min(input.len() - 1)]);
            (a + (b - a) * frac) as f32
        })
        .collect()
}

/// Truncates or zero-pads to exactly `frames` samples.
pub fn fit_length(mut samples: Vec<f32>, frames: usize) -> Vec<f32> {
    samples.resize(frames, 0.0);
    samples
}
