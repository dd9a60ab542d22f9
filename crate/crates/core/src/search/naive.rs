use super::{SearchResult, ShapeSet};
use crate::types::{GridBox, MotionDensityMap};

/// Direct summation over every placement of every admissible shape:
/// `O(R^3 C^3)` in the worst case.
pub fn search_naive(map: &MotionDensityMap, shapes: &ShapeSet) -> SearchResult {
    let grid = map.grid();
    assert_eq!(grid, shapes.grid(), "shape set built for a different grid");
    let mut best: Option<(u64, GridBox)> = None;
    for shape in shapes.shapes() {
        for row in 0..=grid.rows() - shape.height {
            for col in 0..=grid.cols() - shape.width {
                let mut mass = 0u64;
                for r in row..row + shape.height {
                    for c in col..col + shape.width {
                        mass += map.get(r, c);
                    }
                }
                let candidate = GridBox::new(row, col, shape.height, shape.width);
                let replace = match &best {
                    None => true,
                    Some((s, b)) => mass > *s || (mass == *s && candidate < *b),
                };
                if replace {
                    best = Some((mass, candidate));
                }
            }
        }
    }
    let (score, grid_box) = best.expect("shape set is never empty");
    SearchResult { grid_box, score }
}
