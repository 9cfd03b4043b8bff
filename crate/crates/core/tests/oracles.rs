//! Operation examples checked against the independent references in
//! `common`.

mod common;

use common::*;
use sonic_anchor::interaction::scheme_b_gains;
use sonic_anchor::render::{
    pan_gains, render_block, render_timeline, source_azimuth, ControlEvent, RenderState, TimedEvent, Timeline, Voice,
};
use sonic_anchor::scene::{example_scene, Scheme};
use sonic_anchor::{anchor_to_world, AnchorFrame, Pose, Vec3};

#[test]
fn anchor_quarter_turn_against_matrix() {
    let anchor = AnchorFrame::new(Vec3::ZERO, 90.0);
    let p = Vec3::new(1.0, 0.0, 0.0);
    let expected = rotation_matrix_oracle(&anchor, p);
    // frozen from the oracle: R_y(90) (1,0,0) = (0,0,-1)
    assert!(expected.distance(Vec3::new(0.0, 0.0, -1.0)) < 1e-15);
    assert!(anchor_to_world(&anchor, p).distance(expected) < 1e-12);

    let anchor = AnchorFrame::new(Vec3::new(1.5, 0.0, -2.0), 20.0);
    for p in [Vec3::new(0.3, 1.0, -0.7), Vec3::new(-2.0, 0.0, 1.1547)] {
        assert!(anchor_to_world(&anchor, p).distance(rotation_matrix_oracle(&anchor, p)) < 1e-12);
    }
}

#[test]
fn pan_45_against_trig() {
    let (l, r) = pan_gains(45.0);
    let (ol, or) = pan_oracle(45.0);
    assert!((l - ol).abs() < 1e-15 && (r - or).abs() < 1e-15);
    assert!((l - 0.38268).abs() < 1e-5 && (r - 0.92388).abs() < 1e-5);
}

#[test]
fn azimuth_with_yaw_against_rotation() {
    let listener = Pose::new(Vec3::new(0.5, 1.6, -0.25), 45.0, 0.0);
    // ahead-left and friends
    let cases = [
        Vec3::new(-1.0, 1.0, -3.0),
        Vec3::new(0.5, 1.0, -3.0),
        Vec3::new(-2.0, 0.0, 1.0),
        Vec3::new(3.0, 2.0, -0.25),
    ];
    for s in cases {
        let got = source_azimuth(&listener, s);
        let want = azimuth_oracle(&listener, s);
        assert!((got - want).abs() < 1e-9, "{s:?}: {got} vs {want}");
    }
    // straight ahead along the 45 degree heading
    let ahead = Vec3::new(0.5 + 2.0, 1.6, -0.25 - 2.0);
    assert!(source_azimuth(&listener, ahead).abs() < 1e-9);
}

#[test]
fn edge_midpoint_mixes_two_layers() {
    let scene = example_scene();
    let sources = scene.scheme_b_sources_world();
    let mid = (sources[0] + sources[1]) * 0.5;
    let oracle = scheme_b_formula(
        [mid.x, mid.y, mid.z],
        &sources.map(|s| [s.x, s.y, s.z]),
        scene.constants.r_inner,
        scene.constants.r_outer,
    );
    // frozen from the formula: d = 2.0 to both ends -> 1/2.25 = 0.4444...
    assert!((oracle[0] - 0.444_444_444_444).abs() < 1e-9);
    assert!((oracle[1] - 0.444_444_444_444).abs() < 1e-9);
    assert_eq!(oracle[2], 0.0);
    let g = scheme_b_gains(mid, &sources, scene.constants.r_inner, scene.constants.r_outer);
    for (got, want) in g.g.iter().zip(oracle) {
        assert!((got - want).abs() < 1e-12);
    }
    let opposite = mid.distance(sources[2]);
    assert!((opposite - 3.464).abs() < 1e-3);
}

#[test]
fn ramp_block_against_per_sample_reference() {
    let track: Vec<f32> = (0..1500).map(|i| ((i * 37 % 101) as f32 / 101.0) - 0.5).collect();
    let mut state = RenderState::new(1);
    let voices = [Voice {
        track: &track,
        target: 1.0,
        pan: (0.6, 0.8),
    }];
    let mut out = Vec::new();
    for _ in 0..(3000 / 128 + 1) {
        let b = render_block(&mut state, &voices, 128, 960);
        out.extend(b.left.iter().zip(&b.right).map(|(&l, &r)| (l, r)));
    }
    for (k, &(l, r)) in out.iter().take(3000).enumerate() {
        let g = (k + 1).min(960) as f64 / 960.0;
        let x = f64::from(track[k % track.len()]) * g;
        assert!((l - x * 0.6).abs() < 1e-12, "frame {k}");
        assert!((r - x * 0.8).abs() < 1e-12, "frame {k}");
    }
}

#[test]
fn walk_between_panels_matches_reference_rms() {
    let renderer = example_renderer();
    let scene = renderer.scene();
    let a = scene.panel_center_world(0);
    let b = scene.panel_center_world(1);
    let mut events = vec![TimedEvent {
        t: 0.0,
        event: ControlEvent::Scheme { value: Scheme::B },
    }];
    for k in 0..=40 {
        let f = k as f64 / 40.0;
        let p = a * (1.0 - f) + b * f;
        events.push(TimedEvent {
            t: 0.05 * k as f64,
            event: ControlEvent::Pose(sonic_anchor::render::PoseUpdate {
                x: p.x,
                y: 1.6,
                z: p.z,
                yaw: 90.0,
                pitch: 0.0,
            }),
        });
    }
    let tl = Timeline::new(events, 2.5).unwrap();
    let got = render_timeline(&renderer, &tl, Scheme::A);
    let (rl, rr) = scalar_reference_render(scene, tracks_of(&renderer), &tl, Scheme::A);
    let block = scene.constants.block_frames;
    for (x, y) in block_rms(&got.left, block).iter().zip(block_rms(&rl, block)) {
        assert!((x - y).abs() <= 1e-6);
    }
    for (x, y) in block_rms(&got.right, block).iter().zip(block_rms(&rr, block)) {
        assert!((x - y).abs() <= 1e-6);
    }
    // the walk is audible, not a silent pass
    assert!(block_rms(&got.left, block).iter().any(|&r| r > 1e-3));
}
