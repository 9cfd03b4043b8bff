//! Offline rendering of a timeline to 16-bit stereo WAV.

use std::io::Cursor;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use super::block::AudioBlock;
use super::mixdown::Renderer;
use super::timeline::{time_to_frame, Timeline};
use super::track::TrackError;
use crate::scene::{SceneDescriptor, Scheme};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error(transparent)]
    Track(#[from] TrackError),
    #[error("writing output: {0}")]
    Wav(#[from] hound::Error),
}

/// Renders a timeline from the scene's initial state under `scheme`.
///
/// Events land on `round(t * sample_rate)`; the output is a pure function
/// of the inputs and does not depend on the block size.
pub fn render_timeline(renderer: &Renderer, timeline: &Timeline, scheme: Scheme) -> AudioBlock {
    render_timeline_blocks(renderer, timeline, scheme, renderer.scene().constants.block_frames)
}

pub fn render_timeline_blocks(
    renderer: &Renderer,
    timeline: &Timeline,
    scheme: Scheme,
    block_frames: usize,
) -> AudioBlock {
    let sr = renderer.sample_rate();
    let total = time_to_frame(timeline.duration(), sr);
    let mut mix = renderer.initial_state(scheme);

    let mut control = mix.control;
    for e in timeline.events() {
        control.apply(&e.event);
        renderer.schedule(&mut mix, time_to_frame(e.t, sr), control);
    }

    let block_frames = block_frames.max(1) as u64;
    let mut out = AudioBlock::default();
    while mix.render.clock < total {
        let frames = block_frames.min(total - mix.render.clock) as usize;
        out.append(&renderer.render(&mut mix, frames));
    }
    out
}

/// Loads the scene's media and renders; fails on unreadable tracks.
pub fn render_scene_timeline(
    scene: SceneDescriptor,
    timeline: &Timeline,
    scheme: Scheme,
) -> Result<AudioBlock, RenderError> {
    let renderer = Renderer::load(Arc::new(scene))?;
    Ok(render_timeline(&renderer, timeline, scheme))
}

pub fn quantize_i16(x: f64) -> i16 {
    (x.clamp(-1.0, 1.0) * 32767.0).round() as i16
}

/// Interleaved `L R L R ...` 16-bit samples.
pub fn to_pcm16(block: &AudioBlock) -> Vec<i16> {
    block
        .left
        .iter()
        .zip(&block.right)
        .flat_map(|(&l, &r)| [quantize_i16(l), quantize_i16(r)])
        .collect()
}

fn wav_spec(sample_rate: u32) -> hound::WavSpec {
    hound::WavSpec {
        channels: 2,
        sample_rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    }
}

pub fn wav_bytes(block: &AudioBlock, sample_rate: u32) -> Result<Vec<u8>, RenderError> {
    let mut cursor = Cursor::new(Vec::new());
    {
        let mut w = hound::WavWriter::new(&mut cursor, wav_spec(sample_rate))?;
        for s in to_pcm16(block) {
            w.write_sample(s)?;
        }
        w.finalize()?;
    }
    Ok(cursor.into_inner())
}

pub fn write_wav(path: impl AsRef<Path>, block: &AudioBlock, sample_rate: u32) -> Result<(), RenderError> {
    let mut w = hound::WavWriter::create(path, wav_spec(sample_rate))?;
    for s in to_pcm16(block) {
        w.write_sample(s)?;
    }
    w.finalize()?;
    Ok(())
}

/// Mono WAV of one track at the scene rate (served to clients that mix
/// locally).
pub fn mono_wav_bytes(samples: &[f32], sample_rate: u32) -> Result<Vec<u8>, RenderError> {
    let spec = hound::WavSpec {
        channels: 1,
        ..wav_spec(sample_rate)
    };
    let mut cursor = Cursor::new(Vec::new());
    {
        let mut w = hound::WavWriter::new(&mut cursor, spec)?;
        for &s in samples {
            w.write_sample(quantize_i16(f64::from(s)))?;
        }
        w.finalize()?;
    }
    Ok(cursor.into_inner())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantization_endpoints() {
        assert_eq!(quantize_i16(0.0), 0);
        assert_eq!(quantize_i16(1.0), 32767);
        assert_eq!(quantize_i16(-1.0), -32767);
        assert_eq!(quantize_i16(2.0), 32767);
    }

    #[test]
    fn wav_header_and_length() {
        let block = AudioBlock::silent(10);
        let bytes = wav_bytes(&block, 48_000).unwrap();
        assert_eq!(&bytes[..4], b"RIFF");
        assert_eq!(bytes.len(), 44 + 10 * 4);
        let r = hound::WavReader::new(Cursor::new(bytes)).unwrap();
        assert_eq!(r.spec().channels, 2);
        assert_eq!(r.spec().sample_rate, 48_000);
    }
}
