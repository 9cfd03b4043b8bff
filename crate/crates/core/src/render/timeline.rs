//! Timestamped control events that script a render, one JSON object per
//! line:
//!
//! ```text
//! {"t":1.25,"type":"pose","x":0.0,"y":1.6,"z":2.0,"yaw":0.0}
//! {"t":2.0,"type":"slider","layer":"natural","value":0.5}
//! {"t":3.0,"type":"scheme","value":"B"}
//! {"t":30.0,"type":"end"}
//! ```
//!
//! The optional `end` line sets the duration.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Pose, Vec3};
use crate::interaction::{select_scheme, MixerState};
use crate::scene::{LayerId, Scheme};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoseUpdate {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub yaw: f64,
    #[serde(default)]
    pub pitch: f64,
}

impl PoseUpdate {
    pub fn from_pose(p: &Pose) -> Self {
        Self {
            x: p.position.x,
            y: p.position.y,
            z: p.position.z,
            yaw: p.yaw,
            pitch: p.pitch,
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.x, self.y, self.z, self.yaw, self.pitch]
            .iter()
            .all(|v| v.is_finite())
    }

    /// The pose with yaw wrapped into `[-180, 180)` and pitch clamped.
    pub fn to_pose(&self) -> Pose {
        Pose::normalized(Vec3::new(self.x, self.y, self.z), self.yaw, self.pitch)
    }
}

/// A change to the interaction state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ControlEvent {
    Pose(PoseUpdate),
    Slider { layer: LayerId, value: f64 },
    Scheme { value: Scheme },
}

/// Everything the renderer needs to compute source targets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlSnapshot {
    pub scheme: Scheme,
    pub mixer: MixerState,
    pub listener: Pose,
}

impl ControlSnapshot {
    pub fn new(scheme: Scheme, listener: Pose) -> Self {
        Self {
            scheme,
            mixer: MixerState::default(),
            listener,
        }
    }

    pub fn apply(&mut self, event: &ControlEvent) {
        match *event {
            ControlEvent::Pose(p) => self.listener = p.to_pose(),
            ControlEvent::Slider { layer, value } => {
                self.mixer.set(layer, value);
            }
            ControlEvent::Scheme { value } => {
                (self.scheme, self.mixer) = select_scheme(self.scheme, self.mixer, value);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimedEvent {
    pub t: f64,
    pub event: ControlEvent,
}

#[derive(Debug, Error, PartialEq)]
pub enum TimelineError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("event {index}: time {t} is outside [0, {duration}]")]
    OutOfRange { index: usize, t: f64, duration: f64 },
    #[error("event {index}: time {t} is earlier than the previous event")]
    Unordered { index: usize, t: f64 },
    #[error("event {index}: non-finite value")]
    NonFinite { index: usize },
    #[error("duration must be finite and >= 0, got {0}")]
    BadDuration(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Timeline {
    events: Vec<TimedEvent>,
    duration: f64,
}

impl Timeline {
    /// Events must be in non-decreasing time order within `[0, duration]`.
    pub fn new(events: Vec<TimedEvent>, duration: f64) -> Result<Self, TimelineError> {
        if !duration.is_finite() || duration < 0.0 {
            return Err(TimelineError::BadDuration(duration));
        }
        let mut prev = 0.0;
        for (index, e) in events.iter().enumerate() {
            let finite = e.t.is_finite()
                && match e.event {
                    ControlEvent::Pose(p) => p.is_finite(),
                    ControlEvent::Slider { value, .. } => value.is_finite(),
                    ControlEvent::Scheme { .. } => true,
                };
            if !finite {
                return Err(TimelineError::NonFinite { index });
            }
            if e.t < 0.0 || e.t > duration {
                return Err(TimelineError::OutOfRange {
                    index,
                    t: e.t,
                    duration,
                });
            }
            if e.t < prev {
                return Err(TimelineError::Unordered { index, t: e.t });
            }
            prev = e.t;
        }
        Ok(Self { events, duration })
    }

    pub fn empty(duration: f64) -> Result<Self, TimelineError> {
        Self::new(Vec::new(), duration)
    }

    /// Parses JSON-lines. The duration is `duration` if given, else the
    /// time of an `end` line, else the time of the last event.
    pub fn parse_jsonl(text: &str, duration: Option<f64>) -> Result<Self, TimelineError> {
        let mut events = Vec::new();
        let mut end = None;
        for (i, raw) in text.lines().enumerate() {
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            let parse_err = |message: String| TimelineError::Parse { line: i + 1, message };
            let mut value: serde_json::Value = serde_json::from_str(raw).map_err(|e| parse_err(e.to_string()))?;
            let t = value
                .as_object_mut()
                .and_then(|o| o.remove("t"))
                .and_then(|t| t.as_f64())
                .ok_or_else(|| parse_err("missing numeric `t`".into()))?;
            if value.get("type").and_then(|v| v.as_str()) == Some("end") {
                end = Some(t);
                continue;
            }
            let event: ControlEvent = serde_json::from_value(value).map_err(|e| parse_err(e.to_string()))?;
            events.push(TimedEvent { t, event });
        }
        let last = events.last().map_or(0.0, |e| e.t);
        Self::new(events, duration.or(end).unwrap_or(last))
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            let mut v = serde_json::to_value(e.event).expect("event serializes");
            v.as_object_mut()
                .expect("events are objects")
                .insert("t".into(), serde_json::json!(e.t));
            out.push_str(&v.to_string());
            out.push('\n');
        }
        out.push_str(&serde_json::json!({ "t": self.duration, "type": "end" }).to_string());
        out.push('\n');
        out
    }

    pub fn events(&self) -> &[TimedEvent] {
        &self.events
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }
}

/// Sample index an event time quantizes to.
pub fn time_to_frame(t: f64, sample_rate: u32) -> u64 {
    (t * f64::from(sample_rate)).round() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_line_types() {
        let text = r#"
{"t":0.5,"type":"pose","x":1,"y":1.6,"z":2,"yaw":190}
{"t":1.0,"type":"slider","layer":"radio","value":0.5}
{"t":1.0,"type":"scheme","value":"B"}
{"t":4,"type":"end"}
"#;
        let tl = Timeline::parse_jsonl(text, None).unwrap();
        assert_eq!(tl.duration(), 4.0);
        assert_eq!(tl.events().len(), 3);
        match tl.events()[0].event {
            ControlEvent::Pose(p) => assert_eq!(p.to_pose().yaw, -170.0),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            tl.events()[1].event,
            ControlEvent::Slider {
                layer: LayerId::Radio,
                value: 0.5
            }
        );
        let again = Timeline::parse_jsonl(&tl.to_jsonl(), None).unwrap();
        assert_eq!(again, tl);
    }

    #[test]
    fn rejects_out_of_range_and_unordered() {
        let text = r#"{"t":2.0,"type":"scheme","value":"B"}"#;
        assert!(matches!(
            Timeline::parse_jsonl(text, Some(1.0)),
            Err(TimelineError::OutOfRange { .. })
        ));
        let text = "{\"t\":2.0,\"type\":\"scheme\",\"value\":\"B\"}\n{\"t\":1.0,\"type\":\"scheme\",\"value\":\"A\"}";
        assert!(matches!(
            Timeline::parse_jsonl(text, Some(5.0)),
            Err(TimelineError::Unordered { .. })
        ));
        assert!(matches!(
            Timeline::parse_jsonl("{\"t\":-1,\"type\":\"end\"}", None),
            Err(TimelineError::BadDuration(_))
        ));
    }

    #[test]
    fn reports_bad_lines() {
        let err = Timeline::parse_jsonl("\n{\"t\":1,\"type\":\"jump\"}", None).unwrap_err();
        assert!(matches!(err, TimelineError::Parse { line: 2, .. }));
    }

    #[test]
    fn scheme_event_resets_sliders() {
        let mut c = ControlSnapshot::new(Scheme::A, Pose::new(Vec3::ZERO, 0.0, 0.0));
        c.apply(&ControlEvent::Slider {
            layer: LayerId::Natural,
            value: 2.0,
        });
        assert_eq!(c.mixer.sliders, [1.0, 0.0, 0.0]);
        c.apply(&ControlEvent::Scheme { value: Scheme::B });
        c.apply(&ControlEvent::Scheme { value: Scheme::A });
        assert_eq!(c.mixer.sliders, [0.0; 3]);
    }

    #[test]
    fn frame_quantization() {
        assert_eq!(time_to_frame(1.25, 48_000), 60_000);
        assert_eq!(time_to_frame(1.0 / 96_000.0, 48_000), 1);
    }
}
