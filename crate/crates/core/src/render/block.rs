//! The per-block mixing kernel.

use serde::{Deserialize, Serialize};

/// Stereo output block, samples in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AudioBlock {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl AudioBlock {
    pub fn silent(frames: usize) -> Self {
        Self {
            left: vec![0.0; frames],
            right: vec![0.0; frames],
        }
    }

    pub fn frames(&self) -> usize {
        self.left.len()
    }

    pub fn append(&mut self, other: &AudioBlock) {
        self.left.extend_from_slice(&other.left);
        self.right.extend_from_slice(&other.right);
    }
}

/// Smoothed gain and loop position of one source.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VoiceState {
    pub gain: f64,
    /// Sample index into the source's track, in `[0, track length)`.
    pub cursor: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RenderState {
    pub voices: Vec<VoiceState>,
    /// Samples rendered since the session started.
    pub clock: u64,
}

impl RenderState {
    pub fn new(sources: usize) -> Self {
        Self {
            voices: vec![VoiceState::default(); sources],
            clock: 0,
        }
    }
}

/// What one source should do during a block.
#[derive(Debug, Clone, Copy)]
pub struct Voice<'a> {
    pub track: &'a [f32],
    /// Linear gain the smoothed gain ramps toward.
    pub target: f64,
    /// Constant-power `(L, R)` pair.
    pub pan: (f64, f64),
}

/// Moves `gain` toward `target` by at most `step`.
#[inline]
pub fn ramp_toward(gain: f64, target: f64, step: f64) -> f64 {
    let delta = target - gain;
    if delta.abs() <= step {
        target
    } else if delta > 0.0 {
        gain + step
    } else {
        gain - step
    }
}

/// Renders `frames` samples of every voice into a stereo block.
///
/// Each voice's smoothed gain is ramped once per frame before the frame is
/// produced, so a 0→1 step reaches `k+1 / ramp_samples` at frame `k`. Cursors
/// wrap at the end of their track.
pub fn render_block(state: &mut RenderState, voices: &[Voice<'_>], frames: usize, ramp_samples: u32) -> AudioBlock {
    assert_eq!(state.voices.len(), voices.len(), "one voice per source");
    let step = 1.0 / f64::from(ramp_samples.max(1));
    let mut out = AudioBlock::silent(frames);

    for (vs, voice) in state.voices.iter_mut().zip(voices) {
        let len = voice.track.len();
        if vs.gain == 0.0 && voice.target == 0.0 {
            vs.cursor = (vs.cursor + frames) % len;
            continue;
        }
        let (pl, pr) = voice.pan;
        let mut gain = vs.gain;
        let mut cursor = vs.cursor;
        for (l, r) in out.left.iter_mut().zip(out.right.iter_mut()) {
            gain = ramp_toward(gain, voice.target, step);
            let x = f64::from(voice.track[cursor]) * gain;
            *l += x * pl;
            *r += x * pr;
            cursor += 1;
            if cursor == len {
                cursor = 0;
            }
        }
        vs.gain = gain;
        vs.cursor = cursor;
    }

    for s in out.left.iter_mut().chain(out.right.iter_mut()) {
        *s = s.clamp(-1.0, 1.0);
    }
    state.clock += frames as u64;
    out
}
