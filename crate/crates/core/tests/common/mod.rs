//! Independent reference implementations used to check the library. Nothing
//! here calls into the code paths it checks beyond reading scene data and
//! track samples.
#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use sonic_anchor::render::{ControlEvent, Renderer, Timeline};
use sonic_anchor::scene::{example_scene, LayerId, SceneDescriptor, Scheme};
use sonic_anchor::{AnchorFrame, Pose, Triangle, Vec3};

pub fn example_renderer() -> Arc<Renderer> {
    static R: OnceLock<Arc<Renderer>> = OnceLock::new();
    R.get_or_init(|| Arc::new(Renderer::load(Arc::new(example_scene())).expect("synthetic tracks load")))
        .clone()
}

/// `R_y(yaw)` applied as an explicit 3x3 matrix product, then translation.
pub fn rotation_matrix_oracle(anchor: &AnchorFrame, p: Vec3) -> Vec3 {
    let th = anchor.yaw.to_radians();
    let m = [[th.cos(), 0.0, th.sin()], [0.0, 1.0, 0.0], [-th.sin(), 0.0, th.cos()]];
    let v = [p.x, p.y, p.z];
    let r: Vec<f64> = m
        .iter()
        .map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum())
        .collect();
    Vec3::new(r[0] + anchor.origin.x, r[1] + anchor.origin.y, r[2] + anchor.origin.z)
}

/// Points on a barycentric grid with `n` subdivisions per edge:
/// `(n + 1)(n + 2) / 2` samples covering the triangle and its boundary.
pub fn sample_triangle(t: &Triangle, n: usize, out: &mut Vec<[f64; 3]>) {
    for i in 0..=n {
        for j in 0..=(n - i) {
            let u = i as f64 / n as f64;
            let v = j as f64 / n as f64;
            let w = 1.0 - u - v;
            out.push([
                w * t.a.x + u * t.b.x + v * t.c.x,
                w * t.a.y + u * t.b.y + v * t.c.y,
                w * t.a.z + u * t.b.z + v * t.c.z,
            ]);
        }
    }
}

/// Subdivisions that give at least 10^5 samples per triangle.
pub const DENSE_SUBDIVISIONS: usize = 446;

pub struct SampledMesh {
    pub points: Vec<[f64; 3]>,
}

impl SampledMesh {
    pub fn new(scene: &SceneDescriptor, n: usize) -> Self {
        let mut points = Vec::new();
        for t in &scene.hologram.mesh {
            let world = Triangle::new(
                rotation_matrix_oracle(&scene.anchor, t.a),
                rotation_matrix_oracle(&scene.anchor, t.b),
                rotation_matrix_oracle(&scene.anchor, t.c),
            );
            sample_triangle(&world, n, &mut points);
        }
        Self { points }
    }

    pub fn distance(&self, p: Vec3) -> f64 {
        self.points
            .iter()
            .map(|q| {
                let (dx, dy, dz) = (q[0] - p.x, q[1] - p.y, q[2] - p.z);
                dx * dx + dy * dy + dz * dz
            })
            .fold(f64::INFINITY, f64::min)
            .sqrt()
    }
}

/// The scheme-B law written out directly.
pub fn scheme_b_formula(listener: [f64; 3], sources: &[[f64; 3]; 3], r_inner: f64, r_outer: f64) -> [f64; 3] {
    sources.map(|s| {
        let d = ((listener[0] - s[0]).powi(2) + (listener[1] - s[1]).powi(2) + (listener[2] - s[2]).powi(2)).sqrt();
        if d <= r_inner {
            1.0
        } else if d >= r_outer {
            0.0
        } else {
            (r_outer - d) / (r_outer - r_inner)
        }
    })
}

/// Listener-relative azimuth by rotating the offset into the listener's
/// frame (right = +x', ahead = -z') with a 2-D rotation matrix.
pub fn azimuth_oracle(listener: &Pose, source: Vec3) -> f64 {
    let (dx, dz) = (source.x - listener.position.x, source.z - listener.position.z);
    if (dx * dx + dz * dz).sqrt() < 1e-6 {
        return 0.0;
    }
    let th = listener.yaw.to_radians();
    // rotate counter-clockwise (seen from above) by the yaw to undo the heading
    let right = th.cos() * dx + th.sin() * dz;
    let ahead = th.sin() * dx - th.cos() * dz;
    let mut az = right.atan2(ahead).to_degrees();
    if az >= 180.0 {
        az -= 360.0;
    }
    az
}

pub fn pan_oracle(az: f64) -> (f64, f64) {
    let folded = if az > 90.0 {
        180.0 - az
    } else if az < -90.0 {
        -180.0 - az
    } else {
        az
    };
    let angle_deg = (folded / 90.0 + 1.0) * 45.0;
    let rad = angle_deg * std::f64::consts::PI / 180.0;
    (rad.cos(), rad.sin())
}

/// Sample-by-sample renderer written without the block machinery: every
/// sample re-derives each source's target from scratch.
pub fn scalar_reference_render(
    scene: &SceneDescriptor,
    tracks: [&[f32]; 3],
    timeline: &Timeline,
    scheme: Scheme,
) -> (Vec<f64>, Vec<f64>) {
    let sr = f64::from(scene.constants.sample_rate);
    let total = (timeline.duration() * sr).round() as usize;
    let ramp = (scene.constants.ramp_ms * sr / 1000.0).round().max(1.0);
    let step = 1.0 / ramp;
    let c = &scene.constants;

    let sources: Vec<(usize, Scheme, Vec3)> = scene
        .sources
        .iter()
        .map(|s| {
            (
                s.layer.index(),
                s.scheme,
                rotation_matrix_oracle(&scene.anchor, s.position_local),
            )
        })
        .collect();
    let mut b_pos = [[0.0; 3]; 3];
    for (layer, sch, p) in &sources {
        if *sch == Scheme::B {
            b_pos[*layer] = [p.x, p.y, p.z];
        }
    }

    let mut scheme = scheme;
    let mut sliders = [0.0f64; 3];
    let mut pose = scene.listener_start;
    let mut gains = vec![0.0f64; sources.len()];
    let mut next_event = 0;
    let events = timeline.events();
    let (mut left, mut right) = (vec![0.0; total], vec![0.0; total]);

    for n in 0..total {
        while next_event < events.len() && (events[next_event].t * sr).round() as usize <= n {
            match events[next_event].event {
                ControlEvent::Pose(p) => {
                    let mut yaw = (p.yaw + 180.0).rem_euclid(360.0) - 180.0;
                    if yaw >= 180.0 {
                        yaw -= 360.0;
                    }
                    pose = Pose::new(Vec3::new(p.x, p.y, p.z), yaw, p.pitch.clamp(-89.0, 89.0));
                }
                ControlEvent::Slider { layer, value } => sliders[layer.index()] = value.clamp(0.0, 1.0),
                ControlEvent::Scheme { value } => {
                    if value != scheme {
                        scheme = value;
                        sliders = [0.0; 3];
                    }
                }
            }
            next_event += 1;
        }

        let lp = [pose.position.x, pose.position.y, pose.position.z];
        let layer_gains = match scheme {
            Scheme::A => sliders,
            Scheme::B => scheme_b_formula(lp, &b_pos, c.r_inner, c.r_outer),
        };
        let (mut l, mut r) = (0.0, 0.0);
        for (k, (layer, sch, pos)) in sources.iter().enumerate() {
            let d = pose.position.distance(*pos);
            let target = if *sch == scheme {
                layer_gains[*layer] * c.d_ref / d.max(c.d_ref)
            } else {
                0.0
            };
            let g = &mut gains[k];
            if (target - *g).abs() <= step {
                *g = target;
            } else if target > *g {
                *g += step;
            } else {
                *g -= step;
            }
            let track = tracks[*layer];
            let x = f64::from(track[n % track.len()]) * *g;
            let (pl, pr) = pan_oracle(azimuth_oracle(&pose, *pos));
            l += x * pl;
            r += x * pr;
        }
        left[n] = l.clamp(-1.0, 1.0);
        right[n] = r.clamp(-1.0, 1.0);
    }
    (left, right)
}

pub fn tracks_of(renderer: &Renderer) -> [&[f32]; 3] {
    LayerId::ALL.map(|id| renderer.tracks().get(id).samples())
}

/// Scripted walkthrough: start in scheme A working the sliders, switch to B
/// and walk panel 1 → panel 2 → panel 3 → back, turning to face the
/// sculpture, then a short return to A.
pub fn walkthrough(scene: &SceneDescriptor, duration: f64) -> Timeline {
    use sonic_anchor::render::{PoseUpdate, TimedEvent};
    let mut events = Vec::new();
    let push = |events: &mut Vec<TimedEvent>, t: f64, event: ControlEvent| events.push(TimedEvent { t, event });

    let a_end = duration * 0.2;
    let b_end = duration * 0.85;
    push(
        &mut events,
        0.05 * duration,
        ControlEvent::Slider {
            layer: LayerId::Natural,
            value: 0.8,
        },
    );
    push(
        &mut events,
        0.08 * duration,
        ControlEvent::Slider {
            layer: LayerId::Radio,
            value: 0.5,
        },
    );
    push(
        &mut events,
        0.12 * duration,
        ControlEvent::Slider {
            layer: LayerId::Natural,
            value: 0.2,
        },
    );
    push(
        &mut events,
        0.15 * duration,
        ControlEvent::Slider {
            layer: LayerId::Human,
            value: 1.0,
        },
    );
    push(&mut events, a_end, ControlEvent::Scheme { value: Scheme::B });

    let corners: Vec<Vec3> = (0..3).map(|i| scene.panel_center_world(i)).collect();
    let path = [corners[0], corners[1], corners[2], corners[0]];
    let centre = scene.anchor.origin;
    let steps = ((b_end - a_end) / 0.05) as usize;
    for k in 0..=steps {
        let t = a_end + (b_end - a_end) * k as f64 / steps as f64;
        let s = 3.0 * k as f64 / steps as f64;
        let seg = (s.floor() as usize).min(2);
        let f = s - seg as f64;
        let p = path[seg] * (1.0 - f) + path[seg + 1] * f;
        let pos = Vec3::new(p.x, 1.6, p.z);
        let yaw = Pose::yaw_towards(pos, Vec3::new(centre.x, 1.6, centre.z));
        push(
            &mut events,
            t,
            ControlEvent::Pose(PoseUpdate {
                x: pos.x,
                y: pos.y,
                z: pos.z,
                yaw,
                pitch: 0.0,
            }),
        );
    }
    push(&mut events, b_end, ControlEvent::Scheme { value: Scheme::A });
    push(
        &mut events,
        b_end + 0.02 * duration,
        ControlEvent::Slider {
            layer: LayerId::Radio,
            value: 1.0,
        },
    );
    Timeline::new(events, duration).expect("walkthrough timeline is valid")
}

pub fn block_rms(samples: &[f64], block: usize) -> Vec<f64> {
    samples
        .chunks(block)
        .map(|c| (c.iter().map(|x| x * x).sum::<f64>() / c.len() as f64).sqrt())
        .collect()
}
