use super::{beats, SearchResult, ShapeSet};
use crate::types::{GridBox, GridSpec, MotionDensityMap};

/// Summed-area table with a zero top row and left column:
/// `at(i, j)` is the mass of rows `< i` and columns `< j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralImage {
    grid: GridSpec,
    table: Vec<u64>,
}

impl IntegralImage {
    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.table[i * (self.grid.cols() + 1) + j]
    }

    /// Rows of the `(h + 1) x (w + 1)` table.
    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.table.chunks(self.grid.cols() + 1).map(<[u64]>::to_vec).collect()
    }

    /// Mass inside `b` in four lookups.
    pub fn window_sum(&self, b: &GridBox) -> u64 {
        let (i2, j2) = (b.row + b.height, b.col + b.width);
        self.at(i2, j2) + self.at(b.row, b.col) - self.at(b.row, j2) - self.at(i2, b.col)
    }
}

pub fn build_integral(map: &MotionDensityMap) -> IntegralImage {
    let grid = map.grid();
    let stride = grid.cols() + 1;
    let mut table = vec![0u64; (grid.rows() + 1) * stride];
    for i in 0..grid.rows() {
        let mut row_sum = 0;
        for j in 0..grid.cols() {
            row_sum += map.get(i, j);
            table[(i + 1) * stride + j + 1] = table[i * stride + j + 1] + row_sum;
        }
    }
    IntegralImage { grid, table }
}

/// One table lookup per candidate window: `O(#candidates)` after an
/// `O(hw)` build.
pub fn search_integral(map: &MotionDensityMap, shapes: &ShapeSet) -> SearchResult {
    let grid = map.grid();
    assert_eq!(grid, shapes.grid(), "shape set built for a different grid");
    let table = build_integral(map);
    let mut best = None;
    for shape in shapes.shapes() {
        for row in 0..=grid.rows() - shape.height {
            for col in 0..=grid.cols() - shape.width {
                let candidate = GridBox::new(row, col, shape.height, shape.width);
                let score = table.window_sum(&candidate);
                if beats(score, &candidate, &best) {
                    best = Some(SearchResult { grid_box: candidate, score });
                }
            }
        }
    }
    best.expect("shape set is never empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::MotionRng;

    #[test]
    fn tiny_tables() {
        let one = build_integral(&MotionDensityMap::from_counts(GridSpec::new(1, 1).unwrap(), vec![5]));
        assert_eq!(one.rows(), vec![vec![0, 0], vec![0, 5]]);
        let two = build_integral(&MotionDensityMap::from_counts(GridSpec::new(2, 2).unwrap(), vec![1, 2, 3, 4]));
        assert_eq!(two.rows(), vec![vec![0, 0, 0], vec![0, 1, 3], vec![0, 4, 10]]);
    }

    #[test]
    fn every_window_matches_direct_sum() {
        let grid = GridSpec::new(6, 8).unwrap();
        let mut rng = MotionRng::seed_from_u64(11);
        let counts: Vec<u64> = (0..48).map(|_| rng.below(21)).collect();
        let map = MotionDensityMap::from_counts(grid, counts);
        let table = build_integral(&map);
        let mut windows = 0;
        for h in 1..=6 {
            for w in 1..=8 {
                for i in 0..=6 - h {
                    for j in 0..=8 - w {
                        let direct: u64 = (i..i + h).flat_map(|r| (j..j + w).map(move |c| (r, c))).map(|(r, c)| map.get(r, c)).sum();
                        assert_eq!(table.window_sum(&GridBox::new(i, j, h, w)), direct);
                        windows += 1;
                    }
                }
            }
        }
        // 21 row intervals times 36 column intervals.
        assert_eq!(windows, 21 * 36);
    }
}
