//! Clip-level adaptive cropping driven by codec motion vectors.
//!
//! The pipeline pools a clip's motion vectors, drops near-static ones,
//! subsamples to a fixed budget, counts origins on a coarse grid, and picks
//! the rectangle of highest motion mass whose area is close to a target
//! fraction of the frame. That one box is applied to every frame of the clip.
//!
//! ```
//! use mocrop::{ClipMotionField, FrameSize, MoCropConfig, MotionVector, run_mocrop};
//!
//! let vectors = (0..64)
//!     .map(|k| MotionVector::new(0, (200.0 + (k % 8) as f64, 20.0 + (k / 8) as f64), (4.0, 0.0)))
//!     .collect();
//! let field = ClipMotionField::new("demo", FrameSize::new(320, 240), vectors).unwrap();
//! let decision = run_mocrop(&field, &MoCropConfig::default()).unwrap();
//! assert!(decision.pixel.x2 > 200);
//! ```

pub mod bench;
pub mod denoise;
pub mod density;
pub mod eval;
pub mod geometry;
pub mod ingest;
pub mod pipeline;
pub mod search;
pub mod synth;
pub mod types;

pub use pipeline::{crop_clip, run_mocrop, MoCrop, PipelineError};
pub use types::{
    ClipMotionField, ConfigError, CropDecision, CropMode, Epsilon, FieldError, FrameSize, GridBox, GridSpec,
    MoCropConfig, MotionDensityMap, MotionVector, NormalizedBox, PixelBox,
};
