use super::{beats, Shape, SearchResult, ShapeSet};
use crate::types::{GridBox, MotionDensityMap};

/// Fixed-shape search in `O(hw)`: running sums along each row, then running
/// sums of those down each column.
pub fn search_sliding(map: &MotionDensityMap, shape: Shape) -> SearchResult {
    let grid = map.grid();
    let (rows, cols) = (grid.rows(), grid.cols());
    assert!(
        shape.height >= 1 && shape.width >= 1 && shape.height <= rows && shape.width <= cols,
        "shape {shape:?} does not fit grid {grid}"
    );
    let out_cols = cols - shape.width + 1;

    let mut horizontal = vec![0u64; rows * out_cols];
    for r in 0..rows {
        let line = map.row(r);
        let mut sum: u64 = line[..shape.width].iter().sum();
        horizontal[r * out_cols] = sum;
        for j in 1..out_cols {
            sum = sum + line[j + shape.width - 1] - line[j - 1];
            horizontal[r * out_cols + j] = sum;
        }
    }

    let mut best = None;
    let mut window = vec![0u64; out_cols];
    for (j, w) in window.iter_mut().enumerate() {
        *w = (0..shape.height).map(|r| horizontal[r * out_cols + j]).sum();
    }
    for i in 0..=rows - shape.height {
        if i > 0 {
            for (j, w) in window.iter_mut().enumerate() {
                *w = *w + horizontal[(i + shape.height - 1) * out_cols + j] - horizontal[(i - 1) * out_cols + j];
            }
        }
        for (j, &score) in window.iter().enumerate() {
            let candidate = GridBox::new(i, j, shape.height, shape.width);
            if beats(score, &candidate, &best) {
                best = Some(SearchResult { grid_box: candidate, score });
            }
        }
    }
    best.expect("at least one placement fits")
}

/// Runs [`search_sliding`] once per shape and keeps the best under the
/// shared tie-break.
pub fn search_sliding_all(map: &MotionDensityMap, shapes: &ShapeSet) -> SearchResult {
    assert_eq!(map.grid(), shapes.grid(), "shape set built for a different grid");
    let mut best: Option<SearchResult> = None;
    for &shape in shapes.shapes() {
        let r = search_sliding(map, shape);
        if beats(r.score, &r.grid_box, &best) {
            best = Some(r);
        }
    }
    best.expect("shape set is never empty")
}
