mod common;

use common::example_renderer;
use sonic_anchor::render::{render_timeline, to_pcm16, TimedEvent, Timeline};
use sonic_anchor::scene::Scheme;
use sonic_anchor::session::{AudioMode, ServerMessage, Session};

const SCRIPT: &[(f64, &str)] = &[
    (0.0, r#"{"type":"hello"}"#),
    (0.05, r#"{"type":"slider","layer":"natural","value":0.8}"#),
    (0.31, r#"{"type":"slider","layer":"radio","value":0.5}"#),
    (0.52, r#"{"type":"pose","x":1.0,"y":1.6,"z":0.5,"yaw":30.0}"#),
    (0.70, r#"{"type":"scheme","value":"B"}"#),
    (0.83, r#"{"type":"pose","x":1.2,"y":1.6,"z":-3.0,"yaw":-10.0}"#),
    (1.01, r#"{"type":"pose","x":2.5,"y":1.6,"z":-1.5,"yaw":90.0}"#),
    (1.40, r#"{"type":"scheme","value":"A"}"#),
    (1.47, r#"{"type":"slider","layer":"human","value":1.0}"#),
];

fn collect_audio(out: &[ServerMessage], pcm: &mut Vec<i16>, seqs: &mut Vec<u64>) {
    for msg in out {
        if let ServerMessage::Audio(chunk) = msg {
            pcm.extend(chunk.decode_pcm().unwrap());
            seqs.push(chunk.seq);
        }
    }
}

#[test]
fn streamed_chunks_match_offline_render() {
    let renderer = example_renderer();
    let mut session = Session::new("stream", renderer.clone(), AudioMode::Pcm);
    let (mut pcm, mut seqs) = (Vec::new(), Vec::new());

    let mut events = Vec::new();
    let mut next_tick = 0.1;
    for &(t, text) in SCRIPT {
        while next_tick <= t {
            collect_audio(&session.tick(next_tick).0, &mut pcm, &mut seqs);
            next_tick += 0.1;
        }
        let (out, _) = session.receive_text(text, t);
        collect_audio(&out, &mut pcm, &mut seqs);
        let msg = sonic_anchor::session::parse_client_message(text).unwrap();
        if let Some(event) = msg.control_event() {
            events.push(TimedEvent { t, event });
        }
    }
    collect_audio(&session.tick(2.0).0, &mut pcm, &mut seqs);

    assert!(seqs.windows(2).all(|w| w[1] == w[0] + 1));
    let frames = pcm.len() / 2;
    assert_eq!(frames, 750 * 128);

    let timeline = Timeline::new(events, frames as f64 / 48_000.0).unwrap();
    let offline = to_pcm16(&render_timeline(&renderer, &timeline, Scheme::A));
    assert_eq!(offline.len(), pcm.len());
    let first_diff = offline.iter().zip(&pcm).position(|(a, b)| a != b);
    assert_eq!(first_diff, None, "live stream diverges from offline render");
    assert!(pcm.iter().any(|&s| s != 0));
}

#[test]
fn sessions_are_isolated() {
    let renderer = example_renderer();
    let mut loud = Session::new("loud", renderer.clone(), AudioMode::Pcm);
    let mut quiet = Session::new("quiet", renderer.clone(), AudioMode::Pcm);
    let mut alone = Session::new("alone", renderer.clone(), AudioMode::Pcm);

    loud.receive_text(r#"{"type":"slider","layer":"human","value":1.0}"#, 0.01);
    loud.receive_text(r#"{"type":"scheme","value":"B"}"#, 0.2);

    let (mut a, mut b, mut seqs) = (Vec::new(), Vec::new(), Vec::new());
    for k in 1..=5 {
        let t = k as f64 * 0.1;
        loud.tick(t);
        collect_audio(&quiet.tick(t).0, &mut a, &mut seqs);
        collect_audio(&alone.tick(t).0, &mut b, &mut seqs);
    }
    assert_eq!(quiet.state().mixer.sliders, [0.0; 3]);
    assert_eq!(quiet.state().scheme, Scheme::A);
    assert!(a.iter().all(|&s| s == 0));
    assert_eq!(a, b);
    assert_eq!(quiet.state().mix, alone.state().mix);
}

#[test]
fn telemetry_gains_track_state_after_every_message() {
    use rand::{Rng, SeedableRng};
    use sonic_anchor::interaction::active_gains;

    let renderer = example_renderer();
    let scene = renderer.scene();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut session = Session::new("telemetry", renderer.clone(), AudioMode::Gains);
    let mut checked = 0;
    for k in 0..2000 {
        let t = k as f64 * 0.01;
        let text = match rng.gen_range(0..4) {
            0 => format!(
                r#"{{"type":"slider","layer":"{}","value":{}}}"#,
                ["natural", "human", "radio"][rng.gen_range(0..3)],
                rng.gen_range(-0.2..1.2)
            ),
            1 => format!(r#"{{"type":"scheme","value":"{}"}}"#, ["A", "B"][rng.gen_range(0..2)]),
            _ => format!(
                r#"{{"type":"pose","x":{},"y":1.6,"z":{},"yaw":{}}}"#,
                rng.gen_range(-2.0..5.0),
                rng.gen_range(-5.0..2.0),
                rng.gen_range(-180.0..180.0)
            ),
        };
        let (out, _) = session.receive_text(&text, t);
        let (ticked, _) = session.tick(t);
        let s = session.state();
        let expected = active_gains(s.scheme, &s.mixer, &s.pose, scene).g;
        for msg in out.iter().chain(&ticked) {
            let ServerMessage::Telemetry(tel) = msg else {
                panic!("unexpected {msg:?}")
            };
            assert_eq!(tel.gains, expected, "after {text}");
            assert_eq!(tel.glow, s.proximity.glow());
            assert_eq!(tel.clock, s.clock);
            checked += 1;
        }
    }
    assert_eq!(checked, 4000);
}
