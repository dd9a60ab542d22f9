//! Crop-policy comparison on synthetic clips: adaptive crop versus a fixed
//! center crop versus a seeded random crop of the same size.

use serde::Serialize;

use crate::density::MotionRng;
use crate::geometry::{center_crop_box, centered_size};
pub use crate::geometry::iou;
use crate::pipeline::{MoCrop, PipelineError};
use crate::synth::{gen_synthetic, SynthSpec};
use crate::types::{CropMode, FrameSize, MoCropConfig, PixelBox};

const RANDOM_POLICY_SALT: u64 = 0x7261_6e64_6f6d_6372;

#[derive(Debug, Clone, Serialize)]
pub struct ClipEval {
    pub clip_id: String,
    pub mode: CropMode,
    pub mocrop: f64,
    pub center: f64,
    pub random: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalSummary {
    pub clips: usize,
    pub fallbacks: usize,
    pub mean_iou_mocrop: f64,
    pub mean_iou_center: f64,
    pub mean_iou_random: f64,
    pub config: MoCropConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub clips: Vec<ClipEval>,
    pub summary: EvalSummary,
}

impl EvalReport {
    /// One `clip ...` line per clip followed by a `summary {json}` line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.clips {
            out.push_str(&format!(
                "clip {} mode {} mocrop {:.6} center {:.6} random {:.6}\n",
                c.clip_id,
                c.mode.as_str(),
                c.mocrop,
                c.center,
                c.random
            ));
        }
        out.push_str("summary ");
        out.push_str(&serde_json::to_string(&self.summary).expect("summary serializes"));
        out.push('\n');
        out
    }
}

/// Box the size of the center crop, placed uniformly at random in the frame.
pub fn random_crop_box(frame: FrameSize, alpha: f64, rng: &mut MotionRng) -> PixelBox {
    let (w, h) = centered_size(frame, alpha);
    let (w, h) = (w.max(1), h.max(1));
    let x1 = rng.below((frame.width - w + 1) as u64) as u32;
    let y1 = rng.below((frame.height - h + 1) as u64) as u32;
    PixelBox::new(x1, y1, x1 + w, y1 + h)
}

pub fn evaluate_clip(spec: &SynthSpec, mocrop: &MoCrop) -> Result<ClipEval, PipelineError> {
    let clip = gen_synthetic(spec);
    let frame = spec.frame_size;
    let alpha = mocrop.config().alpha;
    let decision = mocrop.run(&clip.field)?;
    let center = center_crop_box(frame, alpha).map_err(PipelineError::Fallback)?;
    let mut rng = MotionRng::seed_from_u64(spec.seed ^ RANDOM_POLICY_SALT);
    let random = random_crop_box(frame, alpha, &mut rng);
    Ok(ClipEval {
        clip_id: clip.field.clip_id().to_string(),
        mode: decision.mode,
        mocrop: iou(&decision.pixel, &clip.truth),
        center: iou(&center, &clip.truth),
        random: iou(&random, &clip.truth),
    })
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

pub fn summarize(clips: Vec<ClipEval>, config: &MoCropConfig) -> EvalReport {
    let summary = EvalSummary {
        clips: clips.len(),
        fallbacks: clips.iter().filter(|c| c.mode == CropMode::CenterFallback).count(),
        mean_iou_mocrop: mean(clips.iter().map(|c| c.mocrop)),
        mean_iou_center: mean(clips.iter().map(|c| c.center)),
        mean_iou_random: mean(clips.iter().map(|c| c.random)),
        config: config.clone(),
    };
    EvalReport { clips, summary }
}

/// Scores all three policies on every clip and averages.
pub fn evaluate(specs: &[SynthSpec], config: &MoCropConfig) -> Result<EvalReport, PipelineError> {
    let mocrop = MoCrop::new(config.clone())?;
    let clips = specs
        .iter()
        .map(|s| evaluate_clip(s, &mocrop))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(summarize(clips, config))
}
