//! Installation scene: the sculpture hologram, its anchor, the three sound
//! layers, the audio sources of both interaction schemes and the floor panels.
//!
//! A [`SceneDescriptor`] is immutable once loaded and is shared freely
//! between sessions and render threads.

mod bundled;
mod document;
mod obj;

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::geometry::{AnchorFrame, Pose, Triangle, Vec3};

pub use bundled::{example_scene, EXAMPLE_MESH_OBJ, EXAMPLE_SCENE_JSON};
pub use document::{load_scene, load_scene_file, load_scene_with, serialize_scene, SceneError, Violation};
pub use obj::{parse_obj, ObjError};

/// Smallest triangle area accepted in a hologram mesh, in square meters.
pub const MIN_TRIANGLE_AREA: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayerId {
    Natural,
    Human,
    Radio,
}

impl LayerId {
    pub const ALL: [LayerId; 3] = [LayerId::Natural, LayerId::Human, LayerId::Radio];

    pub fn index(self) -> usize {
        match self {
            LayerId::Natural => 0,
            LayerId::Human => 1,
            LayerId::Radio => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LayerId::Natural => "natural",
            LayerId::Human => "human",
            LayerId::Radio => "radio",
        }
    }
}

impl fmt::Display for LayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Interaction scheme: `A` is the slider mixer, `B` the locative sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Scheme {
    #[default]
    A,
    B,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::A => "A",
            Scheme::B => "B",
        })
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(Scheme::A),
            "B" | "b" => Ok(Scheme::B),
            other => Err(format!("unknown scheme `{other}` (expected A or B)")),
        }
    }
}

/// Unrendered model of the physical sculpture, in anchor-local coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct InvisibleHologram {
    pub mesh: Vec<Triangle>,
    pub visible: bool,
}

impl InvisibleHologram {
    /// Triangles transformed into world coordinates.
    pub fn world_triangles<'a>(&'a self, anchor: &'a AnchorFrame) -> impl Iterator<Item = Triangle> + 'a {
        self.mesh.iter().map(move |t| t.transformed(anchor))
    }

    /// Exact minimum distance from a world-space point to the mesh surface.
    pub fn distance(&self, p: Vec3, anchor: &AnchorFrame) -> f64 {
        point_mesh_distance(p, self, anchor)
    }
}

/// Minimum Euclidean distance from `p` to any hologram triangle, with the
/// triangles placed in the world by `anchor`.
pub fn point_mesh_distance(p: Vec3, hologram: &InvisibleHologram, anchor: &AnchorFrame) -> f64 {
    hologram
        .world_triangles(anchor)
        .map(|t| t.distance(p))
        .fold(f64::INFINITY, f64::min)
}

/// One of the three recordings. `media` is a path to a mono WAV file
/// (relative paths resolve against the scene file's directory) or a
/// `synth:<layer>` generator name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AudioLayer {
    pub id: LayerId,
    pub media: String,
    /// Loop length in seconds.
    pub duration: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceNode {
    pub layer: LayerId,
    pub position_local: Vec3,
    pub scheme: Scheme,
}

/// Square drawn on the floor under a scheme-B source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FloorPanel {
    /// Anchor-local, on the floor (`y = 0`).
    pub center: Vec3,
    pub side: f64,
    pub source: LayerId,
}

/// Where the scheme-A slider frame sits, anchor-local.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixerPlacement {
    pub position_local: Vec3,
    #[serde(default)]
    pub yaw: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SliderCurve {
    #[default]
    Linear,
    Squared,
}

impl SliderCurve {
    pub fn apply(self, slider: f64) -> f64 {
        match self {
            SliderCurve::Linear => slider,
            SliderCurve::Squared => slider * slider,
        }
    }
}

/// Tunable constants, all with shipped defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SceneConstants {
    /// Panel glows when the listener comes closer than this (m).
    pub glow_on: f64,
    /// Glow ends once the listener is farther than this (m).
    pub glow_off: f64,
    /// Scheme-B full-gain radius (m).
    pub r_inner: f64,
    /// Scheme-B silence radius (m).
    pub r_outer: f64,
    /// Hologram touch distance (m).
    pub touch_eps: f64,
    /// Reference distance of the inverse-distance law (m).
    pub d_ref: f64,
    pub ramp_ms: f64,
    pub sample_rate: u32,
    pub block_frames: usize,
    pub slider_curve: SliderCurve,
}

impl Default for SceneConstants {
    fn default() -> Self {
        Self {
            glow_on: 1.5,
            glow_off: 1.65,
            r_inner: 0.75,
            r_outer: 3.0,
            touch_eps: 0.1,
            d_ref: 1.0,
            ramp_ms: 20.0,
            sample_rate: 48_000,
            block_frames: 128,
            slider_curve: SliderCurve::Linear,
        }
    }
}

impl SceneConstants {
    /// Length of a full 0→1 gain ramp in samples (at least 1).
    pub fn ramp_samples(&self) -> u32 {
        ((self.ramp_ms * f64::from(self.sample_rate) / 1000.0).round() as u32).max(1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneDescriptor {
    pub anchor: AnchorFrame,
    pub hologram: InvisibleHologram,
    /// Exactly three, one per [`LayerId`], in document order.
    pub layers: Vec<AudioLayer>,
    /// One scheme-A and one scheme-B source per layer.
    pub sources: Vec<SourceNode>,
    /// One per scheme-B source, in document order ("panel 1" is index 0).
    pub panels: Vec<FloorPanel>,
    pub mixer: Option<MixerPlacement>,
    /// Listener pose before any pose update arrives (world coordinates).
    pub listener_start: Pose,
    pub constants: SceneConstants,
    /// Directory relative media paths resolve against. Not part of the
    /// scene content.
    pub base_dir: Option<PathBuf>,
}

impl SceneDescriptor {
    pub fn layer(&self, id: LayerId) -> &AudioLayer {
        self.layers
            .iter()
            .find(|l| l.id == id)
            .expect("validated scene has every layer")
    }

    pub fn source(&self, layer: LayerId, scheme: Scheme) -> &SourceNode {
        self.sources
            .iter()
            .find(|s| s.layer == layer && s.scheme == scheme)
            .expect("validated scene has one source per layer and scheme")
    }

    pub fn source_world(&self, source: &SourceNode) -> Vec3 {
        self.anchor.to_world(source.position_local)
    }

    /// World positions of the scheme-B sources indexed by layer.
    pub fn scheme_b_sources_world(&self) -> [Vec3; 3] {
        LayerId::ALL.map(|id| self.source_world(self.source(id, Scheme::B)))
    }

    pub fn panel_center_world(&self, panel: usize) -> Vec3 {
        self.anchor.to_world(self.panels[panel].center)
    }

    /// World position of the scheme-B source a panel marks.
    pub fn panel_source_world(&self, panel: usize) -> Vec3 {
        let layer = self.panels[panel].source;
        self.source_world(self.source(layer, Scheme::B))
    }

    pub fn point_mesh_distance(&self, p: Vec3) -> f64 {
        point_mesh_distance(p, &self.hologram, &self.anchor)
    }

    /// Listener pose used when a scene omits `listener_start`: standing 2 m
    /// in front of the sculpture at eye height, facing it.
    pub fn default_listener_start(anchor: &AnchorFrame) -> Pose {
        let position = anchor.to_world(Vec3::new(0.0, 1.6, 2.0));
        let target = Vec3::new(anchor.origin.x, position.y, anchor.origin.z);
        Pose::new(position, Pose::yaw_towards(position, target), 0.0)
    }
}
