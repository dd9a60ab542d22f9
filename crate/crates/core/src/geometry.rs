//! Box conversions between grid, normalized and pixel space, frame cropping,
//! and the resolution-driven FLOPs estimate.

use thiserror::Error;

use crate::ingest::Frame;
use crate::types::{FrameSize, GridBox, GridSpec, NormalizedBox, PixelBox};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("degenerate box ({x1}, {y1}, {x2}, {y2})")]
    Degenerate { x1: i64, y1: i64, x2: i64, y2: i64 },
    #[error("box {box_:?} exceeds {width}x{height} frame")]
    OutOfBounds { box_: PixelBox, width: u32, height: u32 },
    #[error("area ratio must lie in (0, 1], got {0}")]
    Alpha(f64),
}

pub fn grid_to_normalized(b: &GridBox, grid: GridSpec) -> NormalizedBox {
    let (w, h) = (grid.cols() as f64, grid.rows() as f64);
    NormalizedBox {
        cx: (b.col as f64 + b.width as f64 / 2.0) / w,
        cy: (b.row as f64 + b.height as f64 / 2.0) / h,
        w: b.width as f64 / w,
        h: b.height as f64 / h,
    }
}

/// Floors each edge to a pixel and clamps it to the frame.
pub fn normalized_to_pixels(b: &NormalizedBox, frame: FrameSize) -> Result<PixelBox, GeometryError> {
    let (fw, fh) = (frame.width as f64, frame.height as f64);
    let x1 = (((b.cx - b.w / 2.0) * fw).floor() as i64).max(0);
    let y1 = (((b.cy - b.h / 2.0) * fh).floor() as i64).max(0);
    let x2 = (((b.cx + b.w / 2.0) * fw).floor() as i64).min(frame.width as i64);
    let y2 = (((b.cy + b.h / 2.0) * fh).floor() as i64).min(frame.height as i64);
    if x1 >= x2 || y1 >= y2 {
        return Err(GeometryError::Degenerate { x1, y1, x2, y2 });
    }
    Ok(PixelBox::new(x1 as u32, y1 as u32, x2 as u32, y2 as u32))
}

/// Normalized description of a pixel box (exact inverse up to rounding).
pub fn pixels_to_normalized(b: &PixelBox, frame: FrameSize) -> NormalizedBox {
    let (fw, fh) = (frame.width as f64, frame.height as f64);
    NormalizedBox {
        cx: (b.x1 as f64 + b.x2 as f64) / 2.0 / fw,
        cy: (b.y1 as f64 + b.y2 as f64) / 2.0 / fh,
        w: b.width() as f64 / fw,
        h: b.height() as f64 / fh,
    }
}

/// Copies `frame[y1..y2, x1..x2]`.
pub fn crop_frame(frame: &Frame, b: &PixelBox) -> Result<Frame, GeometryError> {
    if !b.is_valid_in(FrameSize::new(frame.width, frame.height)) {
        return Err(GeometryError::OutOfBounds {
            box_: *b,
            width: frame.width,
            height: frame.height,
        });
    }
    let stride = frame.width as usize * 3;
    let mut data = Vec::with_capacity(b.area() as usize * 3);
    for y in b.y1..b.y2 {
        let start = y as usize * stride + b.x1 as usize * 3;
        data.extend_from_slice(&frame.data[start..start + b.width() as usize * 3]);
    }
    Ok(Frame::new(b.width(), b.height(), data))
}

/// Centered box covering about `alpha` of the frame area: each side is
/// scaled by `sqrt(alpha)`.
pub fn center_crop_box(frame: FrameSize, alpha: f64) -> Result<PixelBox, GeometryError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(GeometryError::Alpha(alpha));
    }
    let (w, h) = centered_size(frame, alpha);
    if w == 0 || h == 0 {
        return Err(GeometryError::Degenerate {
            x1: 0,
            y1: 0,
            x2: w as i64,
            y2: h as i64,
        });
    }
    let x1 = (frame.width - w) / 2;
    let y1 = (frame.height - h) / 2;
    Ok(PixelBox::new(x1, y1, x1 + w, y1 + h))
}

/// Side lengths used by [`center_crop_box`].
pub fn centered_size(frame: FrameSize, alpha: f64) -> (u32, u32) {
    let scale = alpha.sqrt();
    (
        (frame.width as f64 * scale).floor() as u32,
        (frame.height as f64 * scale).floor() as u32,
    )
}

/// Fraction of compute saved by feeding `res_out` instead of `res_in`
/// pixels per side, assuming cost proportional to input area.
pub fn flops_ratio(res_out: u32, res_in: u32) -> f64 {
    let r = res_out as f64 / res_in as f64;
    1.0 - r * r
}

/// Intersection over union of two pixel boxes.
pub fn iou(a: &PixelBox, b: &PixelBox) -> f64 {
    let ix = a.x2.min(b.x2).saturating_sub(a.x1.max(b.x1)) as u64;
    let iy = a.y2.min(b.y2).saturating_sub(a.y1.max(b.y1)) as u64;
    let inter = ix * iy;
    let union = a.area() + b.area() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}
