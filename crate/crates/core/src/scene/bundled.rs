//! The example installation shipped with the crate: two intersecting
//! 80 cm cones inside a 4 m equilateral triangle of scheme-B sources, with
//! synthetic stand-ins for the three recordings.

use std::io;

use super::{load_scene_with, SceneDescriptor};

pub const EXAMPLE_SCENE_JSON: &str = include_str!("../../../../scenes/listening.json");
pub const EXAMPLE_MESH_OBJ: &str = include_str!("../../../../scenes/cones.obj");

pub fn example_scene() -> SceneDescriptor {
    load_scene_with(EXAMPLE_SCENE_JSON, None, |path| match path {
        "cones.obj" => Ok(EXAMPLE_MESH_OBJ.to_string()),
        other => Err(io::Error::new(io::ErrorKind::NotFound, other.to_string())),
    })
    .expect("bundled example scene is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::Scheme;

    #[test]
    fn example_geometry() {
        let scene = example_scene();
        assert_eq!(scene.hologram.mesh.len(), 32);
        let b: Vec<_> = scene.sources.iter().filter(|s| s.scheme == Scheme::B).collect();
        for i in 0..3 {
            let side = b[i].position_local.distance(b[(i + 1) % 3].position_local);
            assert!((side - 4.0).abs() < 1e-9, "side {side}");
        }
    }
}
