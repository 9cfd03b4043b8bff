//! Per-user sessions: protocol handling, telemetry, audio streaming and
//! replayable logs.
//!
//! Every state change is a function of (state, message, receipt time), so a
//! session log replayed through [`replay_log`] lands on exactly the live
//! final state.

mod log;
mod protocol;
mod stream;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Pose;
use crate::interaction::{
    active_gains, select_scheme, update_proximity, update_touch, InteractionEvent, MixerState, ProximityState,
};
use crate::render::{time_to_frame, ControlSnapshot, MixState, PoseUpdate, Renderer};
use crate::scene::{SceneDescriptor, Scheme};

pub use log::{scene_hash, LogError, LogHeader, LogRecord, SessionLog, LOG_FORMAT};
pub use protocol::{
    parse_client_message, AudioChunk, AudioMode, ClientMessage, ErrorCode, ErrorReply, LayerSummary, PanelSummary,
    ProtocolError, SceneSummary, ServerMessage, SourceSummary, Telemetry, Welcome, CLIENT_TYPES,
};
pub use stream::ChunkQueue;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionState {
    pub id: String,
    pub audio_mode: AudioMode,
    pub scheme: Scheme,
    pub mixer: MixerState,
    pub pose: Pose,
    pub proximity: ProximityState,
    pub mix: MixState,
    /// Seconds since the session started; never decreases.
    pub clock: f64,
    /// Sequence number of the next audio chunk.
    pub next_seq: u64,
    pub closed: bool,
}

impl SessionState {
    /// Fresh session: scheme A, sliders at the bottom, listener at the
    /// scene's start pose.
    pub fn new(id: impl Into<String>, renderer: &Renderer, audio_mode: AudioMode) -> Self {
        let mix = renderer.initial_state(Scheme::A);
        Self {
            id: id.into(),
            audio_mode,
            scheme: mix.control.scheme,
            mixer: mix.control.mixer,
            pose: mix.control.listener,
            proximity: ProximityState::default(),
            mix,
            clock: 0.0,
            next_seq: 0,
            closed: false,
        }
    }

    pub fn control(&self) -> ControlSnapshot {
        ControlSnapshot {
            scheme: self.scheme,
            mixer: self.mixer,
            listener: self.pose,
        }
    }

    pub fn telemetry(&self, scene: &SceneDescriptor, events: Vec<InteractionEvent>) -> Telemetry {
        Telemetry {
            clock: self.clock,
            scheme: self.scheme,
            gains: active_gains(self.scheme, &self.mixer, &self.pose, scene).g,
            sliders: self.mixer.sliders,
            glow: self.proximity.glow(),
            touch: self.proximity.touching,
            listener: PoseUpdate::from_pose(&self.pose),
            events,
            dropped: 0,
        }
    }

    fn advance_clock(&mut self, t: f64) {
        if t.is_finite() && t > self.clock {
            self.clock = t;
        }
    }

    /// Hands the current control state to the renderer, effective at the
    /// current clock.
    fn publish_control(&mut self, renderer: &Renderer) {
        let control = self.control();
        match self.audio_mode {
            AudioMode::Pcm => {
                let frame = time_to_frame(self.clock, renderer.sample_rate());
                renderer.schedule(&mut self.mix, frame, control);
            }
            // nothing is rendered, so there is no sample to schedule against
            AudioMode::Gains => self.mix.control = control,
        }
    }

    fn update_geometry(&mut self, scene: &SceneDescriptor) -> Vec<InteractionEvent> {
        let c = &scene.constants;
        let mut events = Vec::new();
        let listener = self.pose.position;
        for panel in 0..scene.panels.len() {
            let d = listener.distance(scene.panel_source_world(panel));
            let (next, ev) = update_proximity(self.proximity, panel, d, c.glow_on, c.glow_off, self.clock);
            self.proximity = next;
            events.extend(ev);
        }
        let d_mesh = scene.point_mesh_distance(listener);
        let (next, ev) = update_touch(self.proximity, d_mesh, c.touch_eps, self.clock);
        self.proximity = next;
        events.extend(ev);
        events
    }

    fn error(&self, code: ErrorCode, message: impl Into<String>) -> ServerMessage {
        ServerMessage::Error(ErrorReply {
            clock: self.clock,
            code,
            message: message.into(),
        })
    }
}

/// Applies one validated client message received at session time `t`.
pub fn handle_message(
    state: &mut SessionState,
    msg: &ClientMessage,
    t: f64,
    renderer: &Renderer,
) -> Vec<ServerMessage> {
    if state.closed {
        return vec![state.error(ErrorCode::SessionClosed, "session has ended")];
    }
    state.advance_clock(t);
    let scene = renderer.scene();
    match msg {
        ClientMessage::Hello { .. } => {
            vec![ServerMessage::Welcome(Box::new(Welcome {
                clock: state.clock,
                session: state.id.clone(),
                audio_mode: state.audio_mode,
                scene: SceneSummary::new(scene, scene_hash(scene)),
                state: state.telemetry(scene, Vec::new()),
            }))]
        }
        ClientMessage::Pose(p) => {
            state.pose = p.to_pose();
            let events = state.update_geometry(scene);
            state.publish_control(renderer);
            vec![ServerMessage::Telemetry(state.telemetry(scene, events))]
        }
        ClientMessage::Slider { layer, value } => {
            state.mixer.set(*layer, *value);
            state.publish_control(renderer);
            vec![ServerMessage::Telemetry(state.telemetry(scene, Vec::new()))]
        }
        ClientMessage::Scheme { value } => {
            (state.scheme, state.mixer) = select_scheme(state.scheme, state.mixer, *value);
            state.publish_control(renderer);
            vec![ServerMessage::Telemetry(state.telemetry(scene, Vec::new()))]
        }
        ClientMessage::Bye => {
            state.closed = true;
            Vec::new()
        }
    }
}

/// Heartbeat at session time `t`: renders every whole block that has
/// become due (PCM mode) and reports telemetry.
pub fn tick(state: &mut SessionState, t: f64, renderer: &Renderer) -> Vec<ServerMessage> {
    if state.closed {
        return Vec::new();
    }
    state.advance_clock(t);
    let mut out = stream_audio(state, renderer)
        .into_iter()
        .map(ServerMessage::Audio)
        .collect::<Vec<_>>();
    out.push(ServerMessage::Telemetry(state.telemetry(renderer.scene(), Vec::new())));
    out
}

/// Renders the blocks due by the session clock as sequenced chunks. Empty in
/// gains mode.
pub fn stream_audio(state: &mut SessionState, renderer: &Renderer) -> Vec<AudioChunk> {
    if state.audio_mode == AudioMode::Gains {
        return Vec::new();
    }
    let block = renderer.scene().constants.block_frames as u64;
    let due = (state.clock * f64::from(renderer.sample_rate())).floor() as u64;
    let mut chunks = Vec::new();
    while state.mix.render.clock + block <= due {
        let audio = renderer.render(&mut state.mix, block as usize);
        chunks.push(AudioChunk::encode(state.clock, state.next_seq, &audio));
        state.next_seq += 1;
    }
    chunks
}

/// A live session: state plus the log of everything that changed it.
#[derive(Debug, Clone)]
pub struct Session {
    renderer: Arc<Renderer>,
    state: SessionState,
    log: SessionLog,
}

impl Session {
    pub fn new(id: impl Into<String>, renderer: Arc<Renderer>, audio_mode: AudioMode) -> Self {
        let id = id.into();
        let state = SessionState::new(id.clone(), &renderer, audio_mode);
        let log = SessionLog::new(id, scene_hash(renderer.scene()), audio_mode);
        Self { renderer, state, log }
    }

    pub fn id(&self) -> &str {
        &self.state.id
    }

    pub fn state(&self) -> &SessionState {
        &self.state
    }

    pub fn log(&self) -> &SessionLog {
        &self.log
    }

    pub fn renderer(&self) -> &Arc<Renderer> {
        &self.renderer
    }

    /// Parses, applies and logs one raw message. Rejected messages leave the
    /// state and the log untouched. Returns the responses and the record
    /// that was logged, if any.
    pub fn receive_text(&mut self, text: &str, t: f64) -> (Vec<ServerMessage>, Option<LogRecord>) {
        match parse_client_message(text) {
            Ok(msg) => self.receive(msg, t),
            Err(e) => (vec![self.state.error(e.code, e.message)], None),
        }
    }

    pub fn receive(&mut self, msg: ClientMessage, t: f64) -> (Vec<ServerMessage>, Option<LogRecord>) {
        if self.state.closed {
            return (handle_message(&mut self.state, &msg, t, &self.renderer), None);
        }
        let out = handle_message(&mut self.state, &msg, t, &self.renderer);
        let record = LogRecord::Message { t, msg };
        self.log.records.push(record.clone());
        (out, Some(record))
    }

    pub fn tick(&mut self, t: f64) -> (Vec<ServerMessage>, Option<LogRecord>) {
        if self.state.closed {
            return (Vec::new(), None);
        }
        let out = tick(&mut self.state, t, &self.renderer);
        let record = LogRecord::Tick { t };
        self.log.records.push(record.clone());
        (out, Some(record))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ReplayError {
    #[error("log was recorded against scene {logged}, this scene is {actual}")]
    SceneMismatch { logged: String, actual: String },
    #[error(transparent)]
    Log(#[from] LogError),
}

/// Re-runs a session log and returns the final state.
pub fn replay_log(renderer: &Renderer, log: &SessionLog) -> Result<SessionState, ReplayError> {
    let actual = scene_hash(renderer.scene());
    if log.header.scene_hash != actual {
        return Err(ReplayError::SceneMismatch {
            logged: log.header.scene_hash.clone(),
            actual,
        });
    }
    let mut state = SessionState::new(log.header.session.clone(), renderer, log.header.audio_mode);
    for record in &log.records {
        match record {
            LogRecord::Message { t, msg } => {
                handle_message(&mut state, msg, *t, renderer);
            }
            LogRecord::Tick { t } => {
                tick(&mut state, *t, renderer);
            }
        }
    }
    Ok(state)
}

/// Parses a JSON-lines log and replays it.
pub fn replay_log_text(renderer: &Renderer, text: &str) -> Result<SessionState, ReplayError> {
    replay_log(renderer, &SessionLog::parse(text)?)
}
