//! Per-clip orchestration: denoise, sample, build the density map, search,
//! and convert the winning rectangle to a crop.

use thiserror::Error;

use crate::denoise::{epsilon_from_percentile, filter_static, global_motion_compensate, merge_frames};
use crate::density::{build_md_map, is_flat, mc_sample};
use crate::geometry::{
    center_crop_box, crop_frame, grid_to_normalized, normalized_to_pixels, pixels_to_normalized, GeometryError,
};
use crate::ingest::Frame;
use crate::search::{enumerate_shapes, SearchBackend, ShapeSet};
use crate::types::{
    ClipMotionField, ConfigError, CropDecision, CropMode, Epsilon, FrameSize, MoCropConfig, MotionDensityMap,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("cannot place a center crop: {0}")]
    Fallback(#[source] GeometryError),
    #[error("frame {index} is {actual_w}x{actual_h}, clip frames are {width}x{height}")]
    FrameMismatch {
        index: usize,
        actual_w: u32,
        actual_h: u32,
        width: u32,
        height: u32,
    },
}

/// A validated configuration with its shape set enumerated once.
#[derive(Debug, Clone)]
pub struct MoCrop {
    config: MoCropConfig,
    shapes: ShapeSet,
    backend: SearchBackend,
}

impl MoCrop {
    pub fn new(config: MoCropConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        let shapes = enumerate_shapes(config.grid, config.alpha, config.delta)?;
        Ok(Self {
            config,
            shapes,
            backend: SearchBackend::Integral,
        })
    }

    pub fn with_backend(mut self, backend: SearchBackend) -> Self {
        self.backend = backend;
        self
    }

    pub fn config(&self) -> &MoCropConfig {
        &self.config
    }

    pub fn shapes(&self) -> &ShapeSet {
        &self.shapes
    }

    /// Everything up to and including the density map.
    pub fn density_map(&self, field: &ClipMotionField) -> MotionDensityMap {
        let cfg = &self.config;
        let mut working = merge_frames(field);
        if cfg.enable_gmc {
            working = global_motion_compensate(&working);
        }
        if cfg.enable_dm && !working.is_empty() {
            let eps = match cfg.epsilon {
                Epsilon::Absolute(e) => e,
                Epsilon::Percentile(q) => {
                    epsilon_from_percentile(&working, q).expect("non-empty field, validated percentile")
                }
            };
            working = filter_static(&working, eps);
        }
        if cfg.enable_mcs {
            working = mc_sample(&working, cfg.sample_budget, cfg.seed);
        }
        build_md_map(&working, cfg.grid)
    }

    /// Computes the single crop for a clip.
    pub fn run(&self, field: &ClipMotionField) -> Result<CropDecision, PipelineError> {
        let map = self.density_map(field);
        self.decide(map, field.frame_size())
    }

    /// Turns a density map into a decision. An empty map always falls back to
    /// the center crop; a non-empty flat map does so when `flat_fallback` is on.
    pub fn decide(&self, map: MotionDensityMap, frame: FrameSize) -> Result<CropDecision, PipelineError> {
        let cfg = &self.config;
        if map.total() == 0 || (cfg.flat_fallback && is_flat(&map, cfg.flatness_threshold)) {
            return self.fallback(map, frame);
        }
        let best = self.backend.search(&map, &self.shapes);
        let normalized = grid_to_normalized(&best.grid_box, cfg.grid);
        match normalized_to_pixels(&normalized, frame) {
            Ok(pixel) => Ok(CropDecision {
                grid_box: Some(best.grid_box),
                normalized,
                pixel,
                mode: CropMode::Adaptive,
                score: best.score,
                md_map: map,
            }),
            Err(GeometryError::Degenerate { .. }) => self.fallback(map, frame),
            Err(e) => Err(PipelineError::Fallback(e)),
        }
    }

    fn fallback(&self, map: MotionDensityMap, frame: FrameSize) -> Result<CropDecision, PipelineError> {
        let pixel = center_crop_box(frame, self.config.alpha).map_err(PipelineError::Fallback)?;
        Ok(CropDecision {
            grid_box: None,
            normalized: pixels_to_normalized(&pixel, frame),
            pixel,
            mode: CropMode::CenterFallback,
            score: 0,
            md_map: map,
        })
    }
}

/// One-shot form of [`MoCrop::run`].
pub fn run_mocrop(field: &ClipMotionField, config: &MoCropConfig) -> Result<CropDecision, PipelineError> {
    MoCrop::new(config.clone())?.run(field)
}

/// Applies one decision to every frame of a clip.
pub fn crop_clip(frames: &[Frame], decision: &CropDecision, frame: FrameSize) -> Result<Vec<Frame>, PipelineError> {
    frames
        .iter()
        .enumerate()
        .map(|(index, f)| {
            if f.width != frame.width || f.height != frame.height {
                return Err(PipelineError::FrameMismatch {
                    index,
                    actual_w: f.width,
                    actual_h: f.height,
                    width: frame.width,
                    height: frame.height,
                });
            }
            Ok(crop_frame(f, &decision.pixel).expect("decision boxes lie inside the frame"))
        })
        .collect()
}
