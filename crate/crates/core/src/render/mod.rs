//! Deterministic block-based stereo renderer.

mod block;
mod mixdown;
mod offline;
mod pan;
pub mod synth;
mod timeline;
mod track;

pub use block::{ramp_toward, render_block, AudioBlock, RenderState, Voice, VoiceState};
pub use mixdown::{MixState, RenderSource, Renderer, ScheduledControl};
pub use offline::{
    mono_wav_bytes, quantize_i16, render_scene_timeline, render_timeline, render_timeline_blocks, to_pcm16, wav_bytes,
    write_wav, RenderError,
};
pub use pan::{distance_attenuation, pan_gains, source_azimuth, OVERHEAD_EPS};
pub use timeline::{time_to_frame, ControlEvent, ControlSnapshot, PoseUpdate, TimedEvent, Timeline, TimelineError};
pub use track::{fit_length, loop_frames, resample_linear, Track, TrackError, Tracks};
