//! Scene file format: JSON with top-level `anchor`, `hologram`, `layers`,
//! `sources`, `panels` and `constants` (plus optional `mixer` and
//! `listener_start`). Unknown keys are rejected.

use std::collections::HashSet;
use std::fmt;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::obj::parse_obj;
use super::{
    AudioLayer, FloorPanel, InvisibleHologram, LayerId, MixerPlacement, SceneConstants, SceneDescriptor, Scheme,
    SourceNode, MIN_TRIANGLE_AREA,
};
use crate::geometry::{AnchorFrame, Pose, Triangle};

/// Tolerance for "same position" checks between sources and panels.
const POSITION_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid scene: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("hologram.mesh_path `{path}`: {message}")]
    Mesh { path: String, message: String },
    #[error("reading {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl SceneError {
    pub fn violations(&self) -> &[Violation] {
        match self {
            SceneError::Invalid(v) => v,
            _ => &[],
        }
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneDocument {
    #[serde(default)]
    anchor: AnchorFrame,
    hologram: HologramDocument,
    layers: Vec<AudioLayer>,
    sources: Vec<SourceNode>,
    panels: Vec<FloorPanel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mixer: Option<MixerPlacement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    listener_start: Option<Pose>,
    #[serde(default)]
    constants: SceneConstants,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HologramDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    triangles: Option<Vec<Triangle>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mesh_path: Option<String>,
    #[serde(default)]
    visible: bool,
}

/// Parses a scene document whose hologram is inline, or whose `mesh_path`
/// is relative to the working directory.
pub fn load_scene(document: &str) -> Result<SceneDescriptor, SceneError> {
    load_scene_with(document, None, |p| std::fs::read_to_string(p))
}

/// Loads a scene file; `mesh_path` and relative media resolve against the
/// file's directory.
pub fn load_scene_file(path: impl AsRef<Path>) -> Result<SceneDescriptor, SceneError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| SceneError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let mesh_base = base.clone();
    load_scene_with(&text, Some(base), move |p| std::fs::read_to_string(mesh_base.join(p)))
}

/// Parses a scene document, fetching `mesh_path` contents through `read_mesh`.
pub fn load_scene_with<F>(
    document: &str,
    base_dir: Option<PathBuf>,
    read_mesh: F,
) -> Result<SceneDescriptor, SceneError>
where
    F: Fn(&str) -> io::Result<String>,
{
    let mut de = serde_json::Deserializer::from_str(document);
    let doc: SceneDocument = serde_path_to_error::deserialize(&mut de).map_err(|e| SceneError::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    de.end().map_err(|e| SceneError::Parse {
        path: ".".into(),
        message: e.to_string(),
    })?;

    let mesh = match (doc.hologram.triangles, doc.hologram.mesh_path) {
        (Some(triangles), None) => triangles,
        (None, Some(mesh_path)) => {
            let text = read_mesh(&mesh_path).map_err(|e| SceneError::Mesh {
                path: mesh_path.clone(),
                message: e.to_string(),
            })?;
            parse_obj(&text).map_err(|e| SceneError::Mesh {
                path: mesh_path.clone(),
                message: e.to_string(),
            })?
        }
        (Some(_), Some(_)) => {
            return Err(invalid("hologram", "give either `triangles` or `mesh_path`, not both"));
        }
        (None, None) => {
            return Err(invalid("hologram", "missing `triangles` or `mesh_path`"));
        }
    };

    let listener_start = doc
        .listener_start
        .unwrap_or_else(|| SceneDescriptor::default_listener_start(&doc.anchor));

    let scene = SceneDescriptor {
        anchor: doc.anchor,
        hologram: InvisibleHologram {
            mesh,
            visible: doc.hologram.visible,
        },
        layers: doc.layers,
        sources: doc.sources,
        panels: doc.panels,
        mixer: doc.mixer,
        listener_start,
        constants: doc.constants,
        base_dir,
    };

    let violations = validate(&scene);
    if violations.is_empty() {
        Ok(scene)
    } else {
        Err(SceneError::Invalid(violations))
    }
}

/// Canonical JSON form of a scene: hologram inlined, every constant and the
/// listener start written out. Loading the result yields the same scene.
pub fn serialize_scene(scene: &SceneDescriptor) -> String {
    let doc = SceneDocument {
        anchor: scene.anchor,
        hologram: HologramDocument {
            triangles: Some(scene.hologram.mesh.clone()),
            mesh_path: None,
            visible: scene.hologram.visible,
        },
        layers: scene.layers.clone(),
        sources: scene.sources.clone(),
        panels: scene.panels.clone(),
        mixer: scene.mixer,
        listener_start: Some(scene.listener_start),
        constants: scene.constants,
    };
    serde_json::to_string(&doc).expect("scene document serializes")
}

fn invalid(path: &str, message: &str) -> SceneError {
    SceneError::Invalid(vec![Violation {
        path: path.into(),
        message: message.into(),
    }])
}

#[derive(Default)]
struct Report(Vec<Violation>);

impl Report {
    fn check(&mut self, ok: bool, path: impl Into<String>, message: impl Into<String>) {
        if !ok {
            self.0.push(Violation {
                path: path.into(),
                message: message.into(),
            });
        }
    }
}

fn in_yaw_range(yaw: f64) -> bool {
    (-180.0..180.0).contains(&yaw)
}

pub(crate) fn validate(scene: &SceneDescriptor) -> Vec<Violation> {
    let mut r = Report::default();

    r.check(
        scene.anchor.origin.is_finite(),
        "anchor.origin",
        "coordinates must be finite",
    );
    r.check(in_yaw_range(scene.anchor.yaw), "anchor.yaw", "must be in [-180, 180)");

    let holo = &scene.hologram;
    r.check(
        !holo.visible,
        "hologram.visible",
        "the hologram is never rendered; must be false",
    );
    r.check(!holo.mesh.is_empty(), "hologram", "mesh needs at least one triangle");
    for (i, t) in holo.mesh.iter().enumerate() {
        if !t.is_finite() {
            r.check(
                false,
                format!("hologram.triangles[{i}]"),
                "vertex coordinates must be finite",
            );
        } else {
            r.check(
                t.area() > MIN_TRIANGLE_AREA,
                format!("hologram.triangles[{i}]"),
                format!("degenerate triangle (area {:.3e} m^2)", t.area()),
            );
        }
    }

    r.check(
        scene.layers.len() == 3,
        "layers",
        format!("expected exactly 3 layers, found {}", scene.layers.len()),
    );
    let mut seen = HashSet::new();
    for (i, layer) in scene.layers.iter().enumerate() {
        r.check(
            seen.insert(layer.id),
            format!("layers[{i}].id"),
            format!("duplicate layer id `{}`", layer.id),
        );
        r.check(
            layer.duration.is_finite() && layer.duration > 0.0,
            format!("layers[{i}].duration"),
            "must be > 0",
        );
        r.check(
            !layer.media.trim().is_empty(),
            format!("layers[{i}].media"),
            "must not be empty",
        );
    }

    for (i, s) in scene.sources.iter().enumerate() {
        r.check(
            s.position_local.is_finite(),
            format!("sources[{i}].position_local"),
            "coordinates must be finite",
        );
    }
    for scheme in [Scheme::A, Scheme::B] {
        for id in LayerId::ALL {
            let n = scene
                .sources
                .iter()
                .filter(|s| s.layer == id && s.scheme == scheme)
                .count();
            r.check(
                n == 1,
                "sources",
                format!("expected one scheme-{scheme} source for layer `{id}`, found {n}"),
            );
        }
    }

    let a_positions: Vec<_> = scene
        .sources
        .iter()
        .filter(|s| s.scheme == Scheme::A)
        .map(|s| s.position_local)
        .collect();
    if let Some(first) = a_positions.first() {
        r.check(
            a_positions.iter().all(|p| p.distance(*first) <= POSITION_EPS),
            "sources",
            "scheme-A sources must be co-located at the sculpture",
        );
    }

    let b_positions: Vec<_> = scene
        .sources
        .iter()
        .filter(|s| s.scheme == Scheme::B)
        .map(|s| s.position_local)
        .collect();
    if b_positions.len() == 3 {
        let tri = Triangle::new(b_positions[0], b_positions[1], b_positions[2]);
        r.check(
            tri.is_finite() && tri.area() > MIN_TRIANGLE_AREA,
            "sources",
            "scheme-B sources must form a non-degenerate triangle",
        );
    }

    r.check(
        scene.panels.len() == 3,
        "panels",
        format!("expected exactly 3 panels, found {}", scene.panels.len()),
    );
    let mut panel_layers = HashSet::new();
    for (i, p) in scene.panels.iter().enumerate() {
        let path = format!("panels[{i}]");
        r.check(
            p.side.is_finite() && p.side > 0.0,
            format!("{path}.side"),
            "must be > 0",
        );
        r.check(
            p.center.is_finite(),
            format!("{path}.center"),
            "coordinates must be finite",
        );
        r.check(
            p.center.y == 0.0,
            format!("{path}.center"),
            "must lie on the floor (y = 0)",
        );
        r.check(
            panel_layers.insert(p.source),
            format!("{path}.source"),
            format!("second panel for layer `{}`", p.source),
        );
        if let Some(src) = scene
            .sources
            .iter()
            .find(|s| s.layer == p.source && s.scheme == Scheme::B)
        {
            let dx = (src.position_local.x - p.center.x).abs();
            let dz = (src.position_local.z - p.center.z).abs();
            r.check(
                dx <= POSITION_EPS && dz <= POSITION_EPS,
                format!("{path}.center"),
                "must sit directly below its scheme-B source",
            );
        }
    }

    if let Some(m) = &scene.mixer {
        r.check(
            m.position_local.is_finite(),
            "mixer.position_local",
            "coordinates must be finite",
        );
        r.check(in_yaw_range(m.yaw), "mixer.yaw", "must be in [-180, 180)");
    }

    r.check(
        scene.listener_start.is_valid(),
        "listener_start",
        "position must be finite, yaw in [-180, 180), pitch in [-89, 89]",
    );

    let c = &scene.constants;
    let positive = [
        ("glow_on", c.glow_on),
        ("glow_off", c.glow_off),
        ("r_inner", c.r_inner),
        ("r_outer", c.r_outer),
        ("touch_eps", c.touch_eps),
        ("d_ref", c.d_ref),
        ("ramp_ms", c.ramp_ms),
    ];
    for (name, v) in positive {
        r.check(v.is_finite() && v > 0.0, format!("constants.{name}"), "must be > 0");
    }
    r.check(c.sample_rate > 0, "constants.sample_rate", "must be > 0");
    r.check(c.block_frames > 0, "constants.block_frames", "must be > 0");
    r.check(
        c.glow_off > c.glow_on,
        "constants.glow_off",
        format!("must exceed glow_on ({} <= {})", c.glow_off, c.glow_on),
    );
    r.check(
        c.r_outer > c.r_inner,
        "constants.r_outer",
        format!("must exceed r_inner ({} <= {})", c.r_outer, c.r_inner),
    );

    r.0
}
