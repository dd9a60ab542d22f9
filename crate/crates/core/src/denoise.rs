//! Denoise-and-merge: static-vector suppression, clip-wide pooling and
//! optional global-motion compensation.

use thiserror::Error;

use crate::types::{ClipMotionField, MotionVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DenoiseError {
    #[error("cannot take a magnitude percentile of an empty clip")]
    EmptyField,
    #[error("percentile must lie in [0, 100), got {0}")]
    Percentile(f64),
}

/// Nearest-rank percentile of the displacement magnitudes: the element at
/// 0-based index `ceil(q/100 * n) - 1` of the ascending magnitudes, with
/// `q = 0` giving the minimum.
pub fn epsilon_from_percentile(field: &ClipMotionField, q: f64) -> Result<f64, DenoiseError> {
    if !(0.0..100.0).contains(&q) {
        return Err(DenoiseError::Percentile(q));
    }
    if field.is_empty() {
        return Err(DenoiseError::EmptyField);
    }
    let mut mags: Vec<f64> = field.vectors().iter().map(MotionVector::magnitude).collect();
    mags.sort_by(f64::total_cmp);
    let n = mags.len();
    let rank = (q * n as f64 / 100.0).ceil() as usize;
    Ok(mags[rank.saturating_sub(1).min(n - 1)])
}

/// Keeps vectors whose magnitude is strictly greater than `epsilon`.
pub fn filter_static(field: &ClipMotionField, epsilon: f64) -> ClipMotionField {
    field.derive(
        field
            .vectors()
            .iter()
            .filter(|v| v.magnitude() > epsilon)
            .copied()
            .collect(),
    )
}

/// Pools every frame's vectors into one clip-level set.
///
/// Vectors already travel as one flat sequence, so this is the identity on
/// the sequence; `frame_index` survives for diagnostics and density building
/// ignores it. Co-located vectors from different frames are not deduplicated.
pub fn merge_frames(field: &ClipMotionField) -> ClipMotionField {
    field.clone()
}

/// Lower median of a non-empty slice.
fn lower_median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    values[(values.len() - 1) / 2]
}

/// Subtracts the component-wise (lower) median displacement from every
/// vector. Origins are untouched.
pub fn global_motion_compensate(field: &ClipMotionField) -> ClipMotionField {
    if field.is_empty() {
        return field.clone();
    }
    let mut dxs: Vec<f64> = field.vectors().iter().map(|v| v.dx).collect();
    let mut dys: Vec<f64> = field.vectors().iter().map(|v| v.dy).collect();
    let (mx, my) = (lower_median(&mut dxs), lower_median(&mut dys));
    field.derive(
        field
            .vectors()
            .iter()
            .map(|v| MotionVector {
                dx: v.dx - mx,
                dy: v.dy - my,
                ..*v
            })
            .collect(),
    )
}
