//! Monte Carlo subsampling of motion vectors and the motion-density map.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::ingest::write_pgm;
use crate::types::{ClipMotionField, GridSpec, MotionDensityMap};

/// Deterministic generator used for every random draw in the crate.
///
/// xoshiro256** seeded by expanding the `u64` seed with SplitMix64. Bounded
/// integers use Lemire's multiply-and-reject method and unit floats take the
/// top 53 bits, so a fixed seed gives the same stream on every platform.
#[derive(Debug, Clone)]
pub struct MotionRng(Xoshiro256StarStar);

impl MotionRng {
    pub fn seed_from_u64(seed: u64) -> Self {
        Self(Xoshiro256StarStar::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform integer in `0..n`.
    ///
    /// # Panics
    /// If `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let mut m = self.next_u64() as u128 * n as u128;
        if (m as u64) < n {
            let threshold = n.wrapping_neg() % n;
            while (m as u64) < threshold {
                m = self.next_u64() as u128 * n as u128;
            }
        }
        (m >> 64) as u64
    }

    /// Uniform float in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform float in `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}

/// Indices chosen by Algorithm R over `0..n`, returned in ascending order.
/// `k >= n` returns every index without consuming randomness.
pub fn reservoir_indices(n: usize, k: usize, rng: &mut MotionRng) -> Vec<usize> {
    if k >= n {
        return (0..n).collect();
    }
    let mut reservoir: Vec<usize> = (0..k).collect();
    for t in k..n {
        let j = rng.below(t as u64 + 1) as usize;
        if j < k {
            reservoir[j] = t;
        }
    }
    reservoir.sort_unstable();
    reservoir
}

/// Uniform sample without replacement of `min(budget, |field|)` vectors,
/// keeping their input order. A budget at least the field size returns the
/// field unchanged.
pub fn mc_sample(field: &ClipMotionField, budget: usize, seed: u64) -> ClipMotionField {
    if budget >= field.len() {
        return field.clone();
    }
    let mut rng = MotionRng::seed_from_u64(seed);
    let picked = reservoir_indices(field.len(), budget, &mut rng);
    let vs = field.vectors();
    field.derive(picked.into_iter().map(|i| vs[i]).collect())
}

/// Grid cell containing pixel position `(x, y)`, as `(row, col)`.
///
/// Cells are half-open; the clamp only absorbs float rounding at the
/// right and bottom edges.
pub fn cell_of(x: f64, y: f64, width: u32, height: u32, grid: GridSpec) -> (usize, usize) {
    let col = (x * grid.cols() as f64 / width as f64).floor() as usize;
    let row = (y * grid.rows() as f64 / height as f64).floor() as usize;
    (row.min(grid.rows() - 1), col.min(grid.cols() - 1))
}

/// Counts vector origins per grid cell.
pub fn build_md_map(field: &ClipMotionField, grid: GridSpec) -> MotionDensityMap {
    let frame = field.frame_size();
    let mut map = MotionDensityMap::zeros(grid);
    for v in field.vectors() {
        let (row, col) = cell_of(v.x, v.y, frame.width, frame.height, grid);
        map.increment(row, col);
    }
    map
}

/// A map is flat when it is empty or its count spread is at most
/// `threshold * max(total, 1) / cells`. With threshold 0 that means all
/// counts are equal.
pub fn is_flat(map: &MotionDensityMap, threshold: f64) -> bool {
    if map.total() == 0 {
        return true;
    }
    let spread = (map.max_count() - map.min_count()) as f64;
    spread <= threshold * map.total().max(1) as f64 / map.grid().cells() as f64
}

/// Gray levels for the map, one byte per cell, scaled so the largest count
/// becomes 255 (floor rounding).
pub fn md_map_gray(map: &MotionDensityMap) -> Vec<u8> {
    let max = map.max_count();
    map.counts()
        .iter()
        .map(|&c| if max == 0 { 0 } else { (c as u128 * 255 / max as u128) as u8 })
        .collect()
}

/// Renders the map as a binary PGM, `cols` pixels wide and `rows` tall.
pub fn render_pgm(map: &MotionDensityMap) -> Vec<u8> {
    let g = map.grid();
    let mut out = Vec::new();
    write_pgm(g.cols() as u32, g.rows() as u32, &md_map_gray(map), &mut out)
        .expect("writing to a Vec cannot fail");
    out
}
