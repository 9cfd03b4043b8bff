use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Proximity {
    Near,
    #[default]
    Far,
}

/// Glow state of the three floor panels plus the hologram touch flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ProximityState {
    pub panels: [Proximity; 3],
    pub touching: bool,
}

impl ProximityState {
    pub fn glow(&self) -> [bool; 3] {
        self.panels.map(|p| p == Proximity::Near)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    GlowOn,
    GlowOff,
    TouchStart,
    TouchEnd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventTarget {
    Panel(usize),
    Hologram,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteractionEvent {
    pub kind: EventKind,
    pub target: EventTarget,
    /// Session time in seconds.
    pub time: f64,
}

/// Advances one panel's glow state with hysteresis: the panel lights when the
/// listener comes closer than `glow_on` and goes dark only once farther than
/// `glow_off`.
pub fn update_proximity(
    state: ProximityState,
    panel: usize,
    d: f64,
    glow_on: f64,
    glow_off: f64,
    t: f64,
) -> (ProximityState, Option<InteractionEvent>) {
    let mut next = state;
    let kind = match state.panels[panel] {
        Proximity::Far if d < glow_on => {
            next.panels[panel] = Proximity::Near;
            EventKind::GlowOn
        }
        Proximity::Near if d > glow_off => {
            next.panels[panel] = Proximity::Far;
            EventKind::GlowOff
        }
        _ => return (state, None),
    };
    let event = InteractionEvent {
        kind,
        target: EventTarget::Panel(panel),
        time: t,
    };
    (next, Some(event))
}

/// Touch starts strictly below `touch_eps` and ends at or above it.
pub fn update_touch(
    state: ProximityState,
    d_mesh: f64,
    touch_eps: f64,
    t: f64,
) -> (ProximityState, Option<InteractionEvent>) {
    let kind = match (state.touching, d_mesh < touch_eps) {
        (false, true) => EventKind::TouchStart,
        (true, false) => EventKind::TouchEnd,
        _ => return (state, None),
    };
    let next = ProximityState {
        touching: kind == EventKind::TouchStart,
        ..state
    };
    let event = InteractionEvent {
        kind,
        target: EventTarget::Hologram,
        time: t,
    };
    (next, Some(event))
}

#[cfg(test)]
mod tests {
    use super::*;

    const ON: f64 = 1.5;
    const OFF: f64 = 1.65;

    fn near() -> ProximityState {
        ProximityState {
            panels: [Proximity::Near; 3],
            touching: false,
        }
    }

    #[test]
    fn far_to_near_below_glow_on() {
        let (s, e) = update_proximity(ProximityState::default(), 0, 1.4, ON, OFF, 2.0);
        assert_eq!(s.panels[0], Proximity::Near);
        let e = e.unwrap();
        assert_eq!(e.kind, EventKind::GlowOn);
        assert_eq!(e.target, EventTarget::Panel(0));
        assert_eq!(e.time, 2.0);
    }

    #[test]
    fn hysteresis_band_holds() {
        let (s, e) = update_proximity(near(), 1, 1.55, ON, OFF, 0.0);
        assert_eq!(s, near());
        assert!(e.is_none());
        let (s, e) = update_proximity(ProximityState::default(), 1, 1.55, ON, OFF, 0.0);
        assert_eq!(s, ProximityState::default());
        assert!(e.is_none());
        // exactly glow_on does not light
        assert!(update_proximity(ProximityState::default(), 1, ON, ON, OFF, 0.0)
            .1
            .is_none());
    }

    #[test]
    fn near_to_far_above_glow_off() {
        let (s, e) = update_proximity(near(), 2, 1.7, ON, OFF, 0.0);
        assert_eq!(s.panels[2], Proximity::Far);
        assert_eq!(e.unwrap().kind, EventKind::GlowOff);
    }

    #[test]
    fn touch_transitions() {
        let idle = ProximityState::default();
        let (s, e) = update_touch(idle, 0.05, 0.1, 0.0);
        assert!(s.touching);
        assert_eq!(e.unwrap().kind, EventKind::TouchStart);

        assert!(update_touch(idle, 0.1, 0.1, 0.0).1.is_none());

        let (s, e) = update_touch(s, 0.3, 0.1, 1.0);
        assert!(!s.touching);
        assert_eq!(e.unwrap().kind, EventKind::TouchEnd);
    }

    #[test]
    fn event_json_shape() {
        let e = InteractionEvent {
            kind: EventKind::GlowOn,
            target: EventTarget::Panel(0),
            time: 1.5,
        };
        assert_eq!(
            serde_json::to_string(&e).unwrap(),
            r#"{"kind":"glow_on","target":{"panel":0},"time":1.5}"#
        );
    }
}
