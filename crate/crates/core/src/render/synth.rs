//! Deterministic stand-ins for the three field recordings, selected in a
//! scene with `media: "synth:<layer>"`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SYNTH_PREFIX: &str = "synth:";

pub fn is_synth(media: &str) -> bool {
    media.starts_with(SYNTH_PREFIX)
}

/// Generates `frames` samples of the named texture, or `None` for an
/// unknown name.
pub fn generate(name: &str, sample_rate: u32, frames: usize) -> Option<Vec<f32>> {
    let sr = f64::from(sample_rate);
    let out = match name {
        "natural" => birdsong(sr, frames),
        "human" => murmur(sr, frames),
        "radio" => radio(sr, frames),
        "silence" => vec![0.0; frames],
        "tone" => (0..frames)
            .map(|n| (0.5 * (TAU * 440.0 * n as f64 / sr).sin()) as f32)
            .collect(),
        _ => return None,
    };
    Some(out)
}

/// Chirps sweeping 2-5 kHz over a faint wind bed.
fn birdsong(sr: f64, frames: usize) -> Vec<f32> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e61_7475);
    let mut out = vec![0.0f64; frames];

    let mut wind = 0.0;
    for s in out.iter_mut() {
        wind += 0.002 * (rng.gen_range(-1.0..1.0) - wind);
        *s = wind * 0.6;
    }

    let mut start = (rng.gen_range(0.1..0.5) * sr) as usize;
    while start < frames {
        let len = (rng.gen_range(0.06..0.2) * sr) as usize;
        let f0 = rng.gen_range(2000.0..3500.0);
        let f1 = rng.gen_range(3000.0..5000.0);
        let amp = rng.gen_range(0.1..0.25);
        let mut phase = 0.0;
        for i in 0..len.min(frames - start) {
            let x = i as f64 / len as f64;
            let f = f0 + (f1 - f0) * x;
            phase += TAU * f / sr;
            let env = (std::f64::consts::PI * x).sin().powi(2);
            out[start + i] += amp * env * phase.sin();
        }
        start += len + (rng.gen_range(0.15..1.2) * sr) as usize;
    }
    out.into_iter().map(|s| s as f32).collect()
}

/// Low rumble with slow swells and mains hum.
fn murmur(sr: f64, frames: usize) -> Vec<f32> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6875_6d61);
    let mut lp1 = 0.0;
    let mut lp2 = 0.0;
    (0..frames)
        .map(|n| {
            let t = n as f64 / sr;
            let noise: f64 = rng.gen_range(-1.0..1.0);
            lp1 += 0.03 * (noise - lp1);
            lp2 += 0.03 * (lp1 - lp2);
            let swell = 0.6 + 0.4 * (TAU * 0.13 * t).sin() * (TAU * 0.031 * t).cos();
            let hum = 0.02 * (TAU * 100.0 * t).sin();
            (1.8 * lp2 * swell + hum) as f32
        })
        .collect()
}

/// Keyed carrier bursts with crackle.
fn radio(sr: f64, frames: usize) -> Vec<f32> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7261_6469);
    let mut keyed = false;
    let mut remaining = 0usize;
    let mut level = 0.0;
    (0..frames)
        .map(|n| {
            if remaining == 0 {
                keyed = !keyed;
                let secs = if keyed {
                    rng.gen_range(0.05..0.3)
                } else {
                    rng.gen_range(0.05..0.6)
                };
                remaining = (secs * sr) as usize;
            }
            remaining -= 1;
            let target = if keyed { 1.0 } else { 0.0 };
            level += 0.005 * (target - level);
            let t = n as f64 / sr;
            let carrier = (TAU * 1170.0 * t).sin() + 0.3 * (TAU * 2340.0 * t).sin();
            let crackle = if rng.gen_bool(0.002) {
                rng.gen_range(-0.3..0.3)
            } else {
                0.0
            };
            (0.15 * level * carrier + crackle) as f32
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_bounded() {
        for name in ["natural", "human", "radio"] {
            let a = generate(name, 48_000, 48_000).unwrap();
            let b = generate(name, 48_000, 48_000).unwrap();
            assert_eq!(a, b);
            assert!(a.iter().all(|s| s.abs() <= 1.0), "{name} out of range");
            let rms = (a.iter().map(|&s| f64::from(s).powi(2)).sum::<f64>() / a.len() as f64).sqrt();
            assert!(rms > 1e-3, "{name} is silent");
        }
        assert!(generate("wind", 48_000, 10).is_none());
    }
}
