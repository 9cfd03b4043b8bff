//! Scene engine for an augmented-reality sound installation built around a
//! physical sculpture.
//!
//! The sculpture is represented by an invisible proximity mesh pinned into
//! the room by an anchor transform. Three sound layers are mixed either with
//! sliders (scheme A) or by where the listener stands relative to three
//! sources on a triangle around the sculpture (scheme B). The renderer turns
//! that into a deterministic stereo mix, offline or block by block for live
//! sessions.

pub mod geometry;
pub mod interaction;
pub mod render;
pub mod scene;
pub mod session;

pub use geometry::{anchor_to_world, AnchorFrame, Pose, Triangle, Vec3};
pub use scene::{load_scene, load_scene_file, point_mesh_distance, LayerId, SceneDescriptor, Scheme};
