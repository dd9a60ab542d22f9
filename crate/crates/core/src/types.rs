//! Shared domain vocabulary: motion vectors, clips, grids, boxes and the
//! pipeline configuration. Nothing in here runs an algorithm.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Upper bound on `rows * cols` accepted by [`GridSpec::new`].
pub const DEFAULT_MAX_CELLS: usize = 4096;

/// One codec motion vector: an origin in frame pixels plus a displacement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionVector {
    pub frame_index: u32,
    pub x: f64,
    pub y: f64,
    pub dx: f64,
    pub dy: f64,
}

impl MotionVector {
    pub fn new(frame_index: u32, origin: (f64, f64), displacement: (f64, f64)) -> Self {
        Self {
            frame_index,
            x: origin.0,
            y: origin.1,
            dx: displacement.0,
            dy: displacement.1,
        }
    }

    /// Euclidean length of the displacement.
    pub fn magnitude(&self) -> f64 {
        (self.dx * self.dx + self.dy * self.dy).sqrt()
    }

    /// Same vector with every coordinate rounded through `f32`.
    pub fn quantized(&self) -> Self {
        Self {
            frame_index: self.frame_index,
            x: self.x as f32 as f64,
            y: self.y as f32 as f64,
            dx: self.dx as f32 as f64,
            dy: self.dy as f32 as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrameSize {
    pub width: u32,
    pub height: u32,
}

impl FrameSize {
    pub fn new(width: u32, height: u32) -> Self {
        Self { width, height }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= 0.0 && y >= 0.0 && x < self.width as f64 && y < self.height as f64
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("frame size must be positive, got {0}x{1}")]
    EmptyFrame(u32, u32),
    #[error("record {index}: origin ({x}, {y}) outside {width}x{height} frame")]
    OriginOutOfBounds {
        index: usize,
        x: f64,
        y: f64,
        width: u32,
        height: u32,
    },
    #[error("record {index}: non-finite displacement ({dx}, {dy})")]
    NonFiniteDisplacement { index: usize, dx: f64, dy: f64 },
}

/// All motion vectors of one clip, validated against the frame size.
///
/// Construction goes through [`ClipMotionField::new`], so a value of this type
/// always satisfies the origin bounds. Vector order is the ingest order.
#[derive(Debug, Clone, PartialEq)]
pub struct ClipMotionField {
    clip_id: String,
    frame_size: FrameSize,
    vectors: Vec<MotionVector>,
}

impl ClipMotionField {
    pub fn new(
        clip_id: impl Into<String>,
        frame_size: FrameSize,
        vectors: Vec<MotionVector>,
    ) -> Result<Self, FieldError> {
        if frame_size.width == 0 || frame_size.height == 0 {
            return Err(FieldError::EmptyFrame(frame_size.width, frame_size.height));
        }
        for (index, v) in vectors.iter().enumerate() {
            validate_vector(index, v, frame_size)?;
        }
        Ok(Self {
            clip_id: clip_id.into(),
            frame_size,
            vectors,
        })
    }

    /// Rebuilds a field from a subset or transformation of an already valid one.
    /// Origins must not have moved.
    pub(crate) fn derive(&self, vectors: Vec<MotionVector>) -> Self {
        Self {
            clip_id: self.clip_id.clone(),
            frame_size: self.frame_size,
            vectors,
        }
    }

    pub fn clip_id(&self) -> &str {
        &self.clip_id
    }

    pub fn frame_size(&self) -> FrameSize {
        self.frame_size
    }

    pub fn vectors(&self) -> &[MotionVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn with_clip_id(mut self, clip_id: impl Into<String>) -> Self {
        self.clip_id = clip_id.into();
        self
    }

    /// The field as it would come back from the binary sidecar.
    pub fn quantized(&self) -> Self {
        self.derive(self.vectors.iter().map(MotionVector::quantized).collect())
    }
}

pub(crate) fn validate_vector(
    index: usize,
    v: &MotionVector,
    frame: FrameSize,
) -> Result<(), FieldError> {
    if !frame.contains(v.x, v.y) {
        return Err(FieldError::OriginOutOfBounds {
            index,
            x: v.x,
            y: v.y,
            width: frame.width,
            height: frame.height,
        });
    }
    if !v.dx.is_finite() || !v.dy.is_finite() {
        return Err(FieldError::NonFiniteDisplacement {
            index,
            dx: v.dx,
            dy: v.dy,
        });
    }
    Ok(())
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("grid must have at least one row and one column, got {rows}x{cols}")]
    EmptyGrid { rows: usize, cols: usize },
    #[error("grid {rows}x{cols} exceeds the {max}-cell limit")]
    GridTooLarge { rows: usize, cols: usize, max: usize },
    #[error("alpha must lie in (0, 1], got {0}")]
    Alpha(f64),
    #[error("delta must lie in [0, 1), got {0}")]
    Delta(f64),
    #[error("epsilon must be a finite value >= 0, got {0}")]
    Epsilon(f64),
    #[error("epsilon percentile must lie in [0, 100), got {0}")]
    Percentile(f64),
    #[error("sample budget must be positive")]
    SampleBudget,
    #[error("flatness threshold must lie in [0, 1], got {0}")]
    Flatness(f64),
    #[error("no rectangle on a {rows}x{cols} grid has an area in [{lo}, {hi}]")]
    EmptyAreaBand {
        rows: usize,
        cols: usize,
        lo: f64,
        hi: f64,
    },
    #[error("invalid grid spec {0:?}, expected ROWSxCOLS")]
    GridSyntax(String),
}

/// An `rows x cols` discretization of the frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridSpec {
    rows: usize,
    cols: usize,
}

impl GridSpec {
    pub fn new(rows: usize, cols: usize) -> Result<Self, ConfigError> {
        Self::with_max_cells(rows, cols, DEFAULT_MAX_CELLS)
    }

    pub fn with_max_cells(rows: usize, cols: usize, max: usize) -> Result<Self, ConfigError> {
        if rows == 0 || cols == 0 {
            return Err(ConfigError::EmptyGrid { rows, cols });
        }
        if rows.saturating_mul(cols) > max {
            return Err(ConfigError::GridTooLarge { rows, cols, max });
        }
        Ok(Self { rows, cols })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cells(&self) -> usize {
        self.rows * self.cols
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

impl std::str::FromStr for GridSpec {
    type Err = ConfigError;

    /// Parses `ROWSxCOLS`, e.g. `6x8`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ConfigError::GridSyntax(s.to_string());
        let (r, c) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let rows = r.trim().parse().map_err(|_| bad())?;
        let cols = c.trim().parse().map_err(|_| bad())?;
        GridSpec::new(rows, cols)
    }
}

/// Motion-density map: per-cell counts of sampled motion-vector origins,
/// stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotionDensityMap {
    grid: GridSpec,
    counts: Vec<u64>,
    total: u64,
}

impl MotionDensityMap {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            counts: vec![0; grid.cells()],
            total: 0,
        }
    }

    /// Builds a map from row-major counts.
    ///
    /// # Panics
    /// If `counts.len() != grid.cells()`.
    pub fn from_counts(grid: GridSpec, counts: Vec<u64>) -> Self {
        assert_eq!(counts.len(), grid.cells(), "count buffer does not match grid");
        let total = counts.iter().sum();
        Self { grid, counts, total }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.counts[row * self.grid.cols + col]
    }

    pub(crate) fn increment(&mut self, row: usize, col: usize) {
        self.counts[row * self.grid.cols + col] += 1;
        self.total += 1;
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn row(&self, row: usize) -> &[u64] {
        let c = self.grid.cols;
        &self.counts[row * c..(row + 1) * c]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn max_count(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn min_count(&self) -> u64 {
        self.counts.iter().copied().min().unwrap_or(0)
    }
}

/// Rectangle on the grid: top-left cell `(row, col)` and size in cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridBox {
    pub row: usize,
    pub col: usize,
    pub height: usize,
    pub width: usize,
}

impl GridBox {
    pub fn new(row: usize, col: usize, height: usize, width: usize) -> Self {
        Self {
            row,
            col,
            height,
            width,
        }
    }

    pub fn area(&self) -> usize {
        self.height * self.width
    }

    pub fn fits(&self, grid: GridSpec) -> bool {
        self.height >= 1
            && self.width >= 1
            && self.row + self.height <= grid.rows()
            && self.col + self.width <= grid.cols()
    }
}

/// Center/size box with all four values as fractions of the frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedBox {
    pub cx: f64,
    pub cy: f64,
    pub w: f64,
    pub h: f64,
}

impl NormalizedBox {
    /// `cx cy w h` with six decimals, the usual one-box-per-line text form.
    pub fn to_line(&self) -> String {
        format!("{:.6} {:.6} {:.6} {:.6}", self.cx, self.cy, self.w, self.h)
    }
}

impl std::fmt::Display for NormalizedBox {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_line())
    }
}

/// Half-open pixel rectangle `[x1, x2) x [y1, y2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PixelBox {
    pub x1: u32,
    pub y1: u32,
    pub x2: u32,
    pub y2: u32,
}

impl PixelBox {
    pub fn new(x1: u32, y1: u32, x2: u32, y2: u32) -> Self {
        Self { x1, y1, x2, y2 }
    }

    pub fn width(&self) -> u32 {
        self.x2.saturating_sub(self.x1)
    }

    pub fn height(&self) -> u32 {
        self.y2.saturating_sub(self.y1)
    }

    pub fn area(&self) -> u64 {
        self.width() as u64 * self.height() as u64
    }

    pub fn is_valid_in(&self, frame: FrameSize) -> bool {
        self.x1 < self.x2 && self.y1 < self.y2 && self.x2 <= frame.width && self.y2 <= frame.height
    }
}

/// Static-vector threshold: either an absolute magnitude or a percentile of
/// the clip's magnitude distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Epsilon {
    Absolute(f64),
    Percentile(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoCropConfig {
    pub epsilon: Epsilon,
    pub sample_budget: usize,
    pub grid: GridSpec,
    pub alpha: f64,
    pub delta: f64,
    pub seed: u64,
    pub enable_dm: bool,
    pub enable_mcs: bool,
    pub enable_gmc: bool,
    pub flat_fallback: bool,
    pub flatness_threshold: f64,
}

impl Default for MoCropConfig {
    fn default() -> Self {
        Self {
            epsilon: Epsilon::Percentile(25.0),
            sample_budget: 4096,
            grid: GridSpec { rows: 6, cols: 8 },
            alpha: 0.75,
            delta: 0.1,
            seed: 0,
            enable_dm: true,
            enable_mcs: true,
            enable_gmc: false,
            flat_fallback: true,
            flatness_threshold: 0.0,
        }
    }
}

impl MoCropConfig {
    /// Checks every scalar range and that the area band admits at least one
    /// rectangle on the grid.
    pub fn validate(&self) -> Result<(), ConfigError> {
        match self.epsilon {
            Epsilon::Absolute(e) if !(e.is_finite() && e >= 0.0) => {
                return Err(ConfigError::Epsilon(e))
            }
            Epsilon::Percentile(q) if !(0.0..100.0).contains(&q) => {
                return Err(ConfigError::Percentile(q))
            }
            _ => {}
        }
        if self.sample_budget == 0 {
            return Err(ConfigError::SampleBudget);
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(ConfigError::Alpha(self.alpha));
        }
        if !(0.0..1.0).contains(&self.delta) {
            return Err(ConfigError::Delta(self.delta));
        }
        if !(0.0..=1.0).contains(&self.flatness_threshold) {
            return Err(ConfigError::Flatness(self.flatness_threshold));
        }
        crate::search::enumerate_shapes(self.grid, self.alpha, self.delta)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CropMode {
    Adaptive,
    CenterFallback,
}

impl CropMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            CropMode::Adaptive => "adaptive",
            CropMode::CenterFallback => "center_fallback",
        }
    }
}

/// The single clip-level crop, in grid, normalized and pixel coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CropDecision {
    pub grid_box: Option<GridBox>,
    pub normalized: NormalizedBox,
    pub pixel: PixelBox,
    pub mode: CropMode,
    pub score: u64,
    pub md_map: MotionDensityMap,
}

impl CropDecision {
    /// Four-line text form: `mode`, `norm`, `pixel`, `score`.
    pub fn to_text(&self) -> String {
        let p = &self.pixel;
        format!(
            "mode {}\nnorm {}\npixel {} {} {} {}\nscore {}\n",
            self.mode.as_str(),
            self.normalized.to_line(),
            p.x1,
            p.y1,
            p.x2,
            p.y2,
            self.score
        )
    }
}
