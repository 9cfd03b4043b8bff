//! JSON messages exchanged with clients, tagged by `"type"`.

use base64::Engine;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::geometry::Vec3;
use crate::interaction::InteractionEvent;
use crate::render::{to_pcm16, AudioBlock, ControlEvent, PoseUpdate};
use crate::scene::{LayerId, SceneConstants, SceneDescriptor, Scheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AudioMode {
    /// The server renders the mix and streams PCM.
    #[default]
    Pcm,
    /// Telemetry only; the client mixes the layer files itself.
    Gains,
}

impl std::str::FromStr for AudioMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pcm" => Ok(AudioMode::Pcm),
            "gains" => Ok(AudioMode::Gains),
            other => Err(format!("unknown audio mode `{other}` (expected pcm or gains)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ClientMessage {
    Hello {
        /// Session id to take over after a reconnect.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        resume: Option<String>,
    },
    Pose(PoseUpdate),
    Slider {
        layer: LayerId,
        value: f64,
    },
    Scheme {
        value: Scheme,
    },
    Bye,
}

impl ClientMessage {
    pub fn control_event(&self) -> Option<ControlEvent> {
        match *self {
            ClientMessage::Pose(p) => Some(ControlEvent::Pose(p)),
            ClientMessage::Slider { layer, value } => Some(ControlEvent::Slider { layer, value }),
            ClientMessage::Scheme { value } => Some(ControlEvent::Scheme { value }),
            ClientMessage::Hello { .. } | ClientMessage::Bye => None,
        }
    }
}

pub const CLIENT_TYPES: [&str; 5] = ["hello", "pose", "slider", "scheme", "bye"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    Malformed,
    UnknownType,
    SessionClosed,
    UnknownSession,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolError {
    pub code: ErrorCode,
    pub message: String,
}

impl ProtocolError {
    fn malformed(message: impl Into<String>) -> Self {
        Self {
            code: ErrorCode::Malformed,
            message: message.into(),
        }
    }
}

/// Parses and validates one client message.
pub fn parse_client_message(text: &str) -> Result<ClientMessage, ProtocolError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| ProtocolError::malformed(format!("invalid JSON: {e}")))?;
    let kind = value
        .get("type")
        .ok_or_else(|| ProtocolError::malformed("missing `type`"))?
        .as_str()
        .ok_or_else(|| ProtocolError::malformed("`type` must be a string"))?
        .to_string();
    if !CLIENT_TYPES.contains(&kind.as_str()) {
        return Err(ProtocolError {
            code: ErrorCode::UnknownType,
            message: format!("unknown message type `{kind}`"),
        });
    }
    let msg: ClientMessage =
        serde_json::from_value(value).map_err(|e| ProtocolError::malformed(format!("bad `{kind}` message: {e}")))?;
    match &msg {
        ClientMessage::Pose(p) if !p.is_finite() => Err(ProtocolError::malformed("pose values must be finite")),
        ClientMessage::Slider { value, .. } if !value.is_finite() => {
            Err(ProtocolError::malformed("slider value must be finite"))
        }
        _ => Ok(msg),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelSummary {
    pub layer: LayerId,
    /// World coordinates.
    pub center: Vec3,
    pub side: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSummary {
    pub layer: LayerId,
    pub scheme: Scheme,
    pub position: Vec3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerSummary {
    pub id: LayerId,
    pub duration: f64,
}

/// What a client needs to draw the plan view. All positions are world
/// coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSummary {
    pub hash: String,
    pub anchor: Vec3,
    /// Axis-aligned bounds of the hologram, `[min, max]`.
    pub hologram_bounds: [Vec3; 2],
    /// Hologram triangles projected onto the floor, as `[x, z]` triples.
    pub footprint: Vec<[[f64; 2]; 3]>,
    pub layers: Vec<LayerSummary>,
    pub sources: Vec<SourceSummary>,
    pub panels: Vec<PanelSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixer: Option<Vec3>,
    pub listener_start: PoseUpdate,
    pub constants: SceneConstants,
}

impl SceneSummary {
    pub fn new(scene: &SceneDescriptor, hash: String) -> Self {
        let mut lo = Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut hi = -lo;
        let mut footprint = Vec::with_capacity(scene.hologram.mesh.len());
        for t in scene.hologram.world_triangles(&scene.anchor) {
            for v in [t.a, t.b, t.c] {
                lo = Vec3::new(lo.x.min(v.x), lo.y.min(v.y), lo.z.min(v.z));
                hi = Vec3::new(hi.x.max(v.x), hi.y.max(v.y), hi.z.max(v.z));
            }
            footprint.push([[t.a.x, t.a.z], [t.b.x, t.b.z], [t.c.x, t.c.z]]);
        }
        SceneSummary {
            hash,
            anchor: scene.anchor.origin,
            hologram_bounds: [lo, hi],
            footprint,
            layers: scene
                .layers
                .iter()
                .map(|l| LayerSummary {
                    id: l.id,
                    duration: l.duration,
                })
                .collect(),
            sources: scene
                .sources
                .iter()
                .map(|s| SourceSummary {
                    layer: s.layer,
                    scheme: s.scheme,
                    position: scene.source_world(s),
                })
                .collect(),
            panels: (0..scene.panels.len())
                .map(|i| PanelSummary {
                    layer: scene.panels[i].source,
                    center: scene.panel_center_world(i),
                    side: scene.panels[i].side,
                })
                .collect(),
            mixer: scene.mixer.map(|m| scene.anchor.to_world(m.position_local)),
            listener_start: PoseUpdate::from_pose(&scene.listener_start),
            constants: scene.constants,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Welcome {
    pub clock: f64,
    pub session: String,
    pub audio_mode: AudioMode,
    pub scene: SceneSummary,
    pub state: Telemetry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Telemetry {
    pub clock: f64,
    pub scheme: Scheme,
    pub gains: [f64; 3],
    pub sliders: [f64; 3],
    pub glow: [bool; 3],
    pub touch: bool,
    pub listener: PoseUpdate,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub events: Vec<InteractionEvent>,
    /// Audio chunks dropped so far because the client fell behind.
    #[serde(default)]
    pub dropped: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AudioChunk {
    pub clock: f64,
    pub seq: u64,
    pub frames: usize,
    /// Base64 of interleaved little-endian 16-bit stereo samples.
    pub pcm: String,
}

impl AudioChunk {
    pub fn encode(clock: f64, seq: u64, block: &AudioBlock) -> Self {
        let bytes: Vec<u8> = to_pcm16(block).iter().flat_map(|s| s.to_le_bytes()).collect();
        Self {
            clock,
            seq,
            frames: block.frames(),
            pcm: base64::engine::general_purpose::STANDARD.encode(bytes),
        }
    }

    /// Interleaved samples carried by the chunk.
    pub fn decode_pcm(&self) -> Result<Vec<i16>, base64::DecodeError> {
        let bytes = base64::engine::general_purpose::STANDARD.decode(&self.pcm)?;
        Ok(bytes
            .chunks_exact(2)
            .map(|b| i16::from_le_bytes([b[0], b[1]]))
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReply {
    pub clock: f64,
    pub code: ErrorCode,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ServerMessage {
    Welcome(Box<Welcome>),
    Telemetry(Telemetry),
    Audio(AudioChunk),
    Error(ErrorReply),
}

impl ServerMessage {
    pub fn clock(&self) -> f64 {
        match self {
            ServerMessage::Welcome(w) => w.clock,
            ServerMessage::Telemetry(t) => t.clock,
            ServerMessage::Audio(a) => a.clock,
            ServerMessage::Error(e) => e.clock,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("server messages serialize")
    }
}
