//! The two interaction schemes as pure functions from user state to
//! per-layer gains, plus the proximity and touch state machines.

mod proximity;

use serde::{Deserialize, Serialize};

use crate::geometry::{Pose, Vec3};
use crate::scene::{LayerId, SceneDescriptor, SliderCurve};

pub use crate::scene::Scheme;
pub use proximity::{
    update_proximity, update_touch, EventKind, EventTarget, InteractionEvent, Proximity, ProximityState,
};

/// Slider positions in `[0, 1]`, indexed by [`LayerId::index`]. All sliders
/// start at the bottom.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MixerState {
    pub sliders: [f64; 3],
}

impl MixerState {
    pub fn new(sliders: [f64; 3]) -> Self {
        Self {
            sliders: sliders.map(clamp_unit),
        }
    }

    pub fn get(&self, layer: LayerId) -> f64 {
        self.sliders[layer.index()]
    }

    /// Sets one slider, clamping into `[0, 1]`. Returns the stored value.
    pub fn set(&mut self, layer: LayerId, value: f64) -> f64 {
        let v = clamp_unit(value);
        self.sliders[layer.index()] = v;
        v
    }
}

fn clamp_unit(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(0.0, 1.0)
    }
}

/// Linear amplitude per layer, each in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LayerGains {
    pub g: [f64; 3],
}

impl LayerGains {
    pub const SILENT: LayerGains = LayerGains { g: [0.0; 3] };

    pub fn get(&self, layer: LayerId) -> f64 {
        self.g[layer.index()]
    }

    pub fn nonzero_count(&self) -> usize {
        self.g.iter().filter(|&&g| g != 0.0).count()
    }
}

/// Scheme A: each slider sets the level of its layer one to one.
pub fn scheme_a_gains(mixer: &MixerState) -> LayerGains {
    scheme_a_gains_with_curve(mixer, SliderCurve::Linear)
}

pub fn scheme_a_gains_with_curve(mixer: &MixerState, curve: SliderCurve) -> LayerGains {
    LayerGains {
        g: mixer.sliders.map(|s| curve.apply(clamp_unit(s))),
    }
}

/// Piecewise-linear rolloff: full gain inside `r_inner`, silent beyond
/// `r_outer`, linear in between.
pub fn rolloff_gain(d: f64, r_inner: f64, r_outer: f64) -> f64 {
    if d <= r_inner {
        1.0
    } else if d >= r_outer {
        0.0
    } else {
        (r_outer - d) / (r_outer - r_inner)
    }
}

/// Scheme B: each layer's gain follows the listener's 3-D distance to that
/// layer's source.
pub fn scheme_b_gains(listener: Vec3, sources: &[Vec3; 3], r_inner: f64, r_outer: f64) -> LayerGains {
    LayerGains {
        g: sources.map(|s| rolloff_gain(listener.distance(s), r_inner, r_outer)),
    }
}

/// Gains of whichever scheme is active. Scheme A ignores the pose, scheme B
/// ignores the sliders.
pub fn active_gains(scheme: Scheme, mixer: &MixerState, listener: &Pose, scene: &SceneDescriptor) -> LayerGains {
    match scheme {
        Scheme::A => scheme_a_gains_with_curve(mixer, scene.constants.slider_curve),
        Scheme::B => scheme_b_gains(
            listener.position,
            &scene.scheme_b_sources_world(),
            scene.constants.r_inner,
            scene.constants.r_outer,
        ),
    }
}

/// Switches scheme. Any actual change puts the sliders back at the bottom.
pub fn select_scheme(current: Scheme, mixer: MixerState, next: Scheme) -> (Scheme, MixerState) {
    if current == next {
        (current, mixer)
    } else {
        (next, MixerState::default())
    }
}

/// Index of the loudest layer; ties go to the lowest index.
pub fn loudest_layer(gains: &LayerGains) -> usize {
    let mut best = 0;
    for i in 1..3 {
        if gains.g[i] > gains.g[best] {
            best = i;
        }
    }
    best
}
