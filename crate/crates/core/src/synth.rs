//! Seeded synthetic clips with a known actor box, for checking crop
//! placement without real video.

use serde::{Deserialize, Serialize};

use crate::density::MotionRng;
use crate::ingest::Frame;
use crate::types::{ClipMotionField, FrameSize, MotionVector, PixelBox};

pub const BACKGROUND_RGB: [u8; 3] = [48, 48, 48];
pub const ACTOR_RGB: [u8; 3] = [220, 70, 40];

/// Actor displacement magnitudes are drawn from this range (pixels).
pub const ACTOR_SPEED: (f64, f64) = (2.0, 6.0);
/// Noise displacement magnitudes stay below this bound.
pub const NOISE_SPEED_MAX: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub frame_size: FrameSize,
    pub num_frames: u32,
    pub actor_box: PixelBox,
    pub actor_mvs_per_frame: u32,
    pub noise_mvs_per_frame: u32,
    #[serde(default)]
    pub camera_pan: (f64, f64),
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SyntheticClip {
    pub field: ClipMotionField,
    pub frames: Vec<Frame>,
    pub truth: PixelBox,
}

fn uniform_below(rng: &mut MotionRng, lo: f64, hi: f64) -> f64 {
    rng.range(lo, hi).min(hi.next_down()).max(lo)
}

fn polar(rng: &mut MotionRng, lo: f64, hi: f64) -> (f64, f64) {
    let angle = rng.range(0.0, std::f64::consts::TAU);
    let r = rng.range(lo, hi);
    (r * angle.cos(), r * angle.sin())
}

/// Generates a clip. Actor vectors start inside the actor box and move fast;
/// noise vectors start anywhere and barely move; the camera pan is added to
/// every displacement.
///
/// # Panics
/// If the actor box does not lie inside the frame.
pub fn gen_synthetic(spec: &SynthSpec) -> SyntheticClip {
    let frame = spec.frame_size;
    let a = spec.actor_box;
    assert!(a.is_valid_in(frame), "actor box {a:?} outside {frame:?}");
    let mut rng = MotionRng::seed_from_u64(spec.seed);
    let mut vectors = Vec::with_capacity(((spec.actor_mvs_per_frame + spec.noise_mvs_per_frame) * spec.num_frames) as usize);
    let (px, py) = spec.camera_pan;
    for f in 0..spec.num_frames {
        for _ in 0..spec.actor_mvs_per_frame {
            let x = uniform_below(&mut rng, a.x1 as f64, a.x2 as f64);
            let y = uniform_below(&mut rng, a.y1 as f64, a.y2 as f64);
            let (dx, dy) = polar(&mut rng, ACTOR_SPEED.0, ACTOR_SPEED.1);
            vectors.push(MotionVector::new(f, (x, y), (dx + px, dy + py)));
        }
        for _ in 0..spec.noise_mvs_per_frame {
            let x = uniform_below(&mut rng, 0.0, frame.width as f64);
            let y = uniform_below(&mut rng, 0.0, frame.height as f64);
            let (dx, dy) = polar(&mut rng, 0.0, NOISE_SPEED_MAX);
            vectors.push(MotionVector::new(f, (x, y), (dx + px, dy + py)));
        }
    }
    let field = ClipMotionField::new(format!("synth-{:016x}", spec.seed), frame, vectors)
        .expect("generated origins lie inside the frame");

    let mut picture = Frame::filled(frame.width, frame.height, BACKGROUND_RGB);
    for y in a.y1..a.y2 {
        for x in a.x1..a.x2 {
            picture.set_pixel(x, y, ACTOR_RGB);
        }
    }
    SyntheticClip {
        field,
        frames: vec![picture; spec.num_frames as usize],
        truth: a,
    }
}

/// Where actor boxes are placed by [`Scenario::specs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// Actor centered in the frame.
    Centered,
    /// Actor center offset so that, as a fraction of the largest offset that
    /// keeps the box in frame, `max(|tx|, |ty|) >= 0.5`.
    OuterHalf,
    /// Any offset that keeps the box in frame.
    Anywhere,
}

/// Recipe for a batch of synthetic clips sharing frame and actor size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub frame_size: FrameSize,
    pub num_frames: u32,
    /// Actor side length as a fraction of the frame side.
    pub actor_fraction: f64,
    pub actor_mvs_per_frame: u32,
    pub noise_mvs_per_frame: u32,
    pub camera_pan: (f64, f64),
    pub placement: Placement,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            frame_size: FrameSize::new(320, 240),
            num_frames: 8,
            actor_fraction: 0.6,
            actor_mvs_per_frame: 48,
            noise_mvs_per_frame: 16,
            camera_pan: (0.0, 0.0),
            placement: Placement::OuterHalf,
        }
    }
}

impl Scenario {
    pub fn specs(&self, count: usize, seed: u64) -> Vec<SynthSpec> {
        let mut rng = MotionRng::seed_from_u64(seed);
        let frame = self.frame_size;
        let aw = ((frame.width as f64 * self.actor_fraction).round() as u32).clamp(1, frame.width);
        let ah = ((frame.height as f64 * self.actor_fraction).round() as u32).clamp(1, frame.height);
        let (rx, ry) = ((frame.width - aw) as f64 / 2.0, (frame.height - ah) as f64 / 2.0);
        (0..count)
            .map(|_| {
                let (tx, ty) = match self.placement {
                    Placement::Centered => (0.0, 0.0),
                    Placement::Anywhere => (rng.range(-1.0, 1.0), rng.range(-1.0, 1.0)),
                    Placement::OuterHalf => loop {
                        let (tx, ty) = (rng.range(-1.0, 1.0), rng.range(-1.0, 1.0));
                        if tx.abs().max(ty.abs()) >= 0.5 {
                            break (tx, ty);
                        }
                    },
                };
                let x1 = (rx + tx * rx).round() as u32;
                let y1 = (ry + ty * ry).round() as u32;
                SynthSpec {
                    frame_size: frame,
                    num_frames: self.num_frames,
                    actor_box: PixelBox::new(x1, y1, x1 + aw, y1 + ah),
                    actor_mvs_per_frame: self.actor_mvs_per_frame,
                    noise_mvs_per_frame: self.noise_mvs_per_frame,
                    camera_pan: self.camera_pan,
                    seed: rng.next_u64(),
                }
            })
            .collect()
    }
}
