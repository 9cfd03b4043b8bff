//! Scene-aware rendering: turns control state into per-source targets and
//! applies scheduled control changes at their exact sample.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::block::{render_block, AudioBlock, RenderState, Voice};
use super::pan::{distance_attenuation, pan_gains, source_azimuth};
use super::timeline::ControlSnapshot;
use super::track::{TrackError, Tracks};
use crate::geometry::{Pose, Vec3};
use crate::interaction::active_gains;
use crate::scene::{LayerId, SceneDescriptor, Scheme};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderSource {
    pub layer: LayerId,
    pub scheme: Scheme,
    pub position: Vec3,
}

/// Immutable render context shared by every session of a scene.
#[derive(Debug, Clone)]
pub struct Renderer {
    scene: Arc<SceneDescriptor>,
    tracks: Tracks,
    sources: Vec<RenderSource>,
    ramp_samples: u32,
}

/// A control change that takes effect at `frame`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduledControl {
    pub frame: u64,
    pub control: ControlSnapshot,
}

/// Mutable side of a mix: voice states, the control snapshot in force and
/// changes queued for later samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixState {
    pub render: RenderState,
    pub control: ControlSnapshot,
    pub pending: VecDeque<ScheduledControl>,
}

impl Renderer {
    pub fn new(scene: Arc<SceneDescriptor>, tracks: Tracks) -> Self {
        let sources = scene
            .sources
            .iter()
            .map(|s| RenderSource {
                layer: s.layer,
                scheme: s.scheme,
                position: scene.source_world(s),
            })
            .collect();
        let ramp_samples = scene.constants.ramp_samples();
        Self {
            scene,
            tracks,
            sources,
            ramp_samples,
        }
    }

    /// Loads the scene's tracks and builds a renderer.
    pub fn load(scene: Arc<SceneDescriptor>) -> Result<Self, TrackError> {
        let tracks = Tracks::load(&scene)?;
        Ok(Self::new(scene, tracks))
    }

    pub fn scene(&self) -> &SceneDescriptor {
        &self.scene
    }

    pub fn scene_arc(&self) -> &Arc<SceneDescriptor> {
        &self.scene
    }

    pub fn tracks(&self) -> &Tracks {
        &self.tracks
    }

    pub fn sources(&self) -> &[RenderSource] {
        &self.sources
    }

    pub fn ramp_samples(&self) -> u32 {
        self.ramp_samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.scene.constants.sample_rate
    }

    pub fn initial_control(&self, scheme: Scheme) -> ControlSnapshot {
        ControlSnapshot::new(scheme, self.scene.listener_start)
    }

    pub fn initial_state(&self, scheme: Scheme) -> MixState {
        MixState {
            render: RenderState::new(self.sources.len()),
            control: self.initial_control(scheme),
            pending: VecDeque::new(),
        }
    }

    /// Per-source target gains: the active scheme's layer gain times
    /// distance attenuation; sources of the inactive scheme are silent.
    pub fn targets(&self, control: &ControlSnapshot) -> Vec<f64> {
        let gains = active_gains(control.scheme, &control.mixer, &control.listener, &self.scene);
        let d_ref = self.scene.constants.d_ref;
        self.sources
            .iter()
            .map(|s| {
                if s.scheme != control.scheme {
                    return 0.0;
                }
                let d = control.listener.position.distance(s.position);
                gains.get(s.layer) * distance_attenuation(d, d_ref)
            })
            .collect()
    }

    pub fn pans(&self, listener: &Pose) -> Vec<(f64, f64)> {
        self.sources
            .iter()
            .map(|s| pan_gains(source_azimuth(listener, s.position)))
            .collect()
    }

    /// One call of the mixing kernel with fixed targets and listener.
    pub fn render_block(&self, state: &mut RenderState, targets: &[f64], listener: &Pose, frames: usize) -> AudioBlock {
        let pans = self.pans(listener);
        let voices: Vec<Voice<'_>> = self
            .sources
            .iter()
            .zip(targets.iter().zip(pans))
            .map(|(s, (&target, pan))| Voice {
                track: self.tracks.get(s.layer).samples(),
                target,
                pan,
            })
            .collect();
        render_block(state, &voices, frames, self.ramp_samples)
    }

    /// Queues a control change for `frame` (or the next sample to be
    /// rendered, if `frame` has already passed).
    pub fn schedule(&self, mix: &mut MixState, frame: u64, control: ControlSnapshot) {
        let frame = frame.max(mix.render.clock);
        debug_assert!(mix.pending.back().is_none_or(|p| p.frame <= frame));
        mix.pending.push_back(ScheduledControl { frame, control });
    }

    /// Renders `frames` samples, splitting at scheduled control changes so
    /// every change lands on its own sample regardless of block size.
    pub fn render(&self, mix: &mut MixState, frames: usize) -> AudioBlock {
        let end = mix.render.clock + frames as u64;
        let mut out = AudioBlock {
            left: Vec::with_capacity(frames),
            right: Vec::with_capacity(frames),
        };
        loop {
            while let Some(next) = mix.pending.front() {
                if next.frame > mix.render.clock {
                    break;
                }
                mix.control = next.control;
                mix.pending.pop_front();
            }
            let clock = mix.render.clock;
            if clock >= end {
                break;
            }
            let seg_end = mix.pending.front().map_or(end, |p| p.frame.min(end));
            let seg = (seg_end - clock) as usize;
            let targets = self.targets(&mix.control);
            let block = self.render_block(&mut mix.render, &targets, &mix.control.listener, seg);
            out.append(&block);
        }
        out
    }
}
