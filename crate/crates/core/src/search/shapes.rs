use crate::types::{ConfigError, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    pub height: usize,
    pub width: usize,
}

impl Shape {
    pub fn area(&self) -> usize {
        self.height * self.width
    }
}

/// Every rectangle size whose cell area lies in the target band, sorted by
/// `(height, width)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeSet {
    grid: GridSpec,
    shapes: Vec<Shape>,
}

impl ShapeSet {
    /// A set holding exactly `shape`.
    ///
    /// # Panics
    /// If the shape does not fit in `grid`.
    pub fn single(grid: GridSpec, shape: Shape) -> Self {
        assert!(
            shape.height >= 1 && shape.width >= 1 && shape.height <= grid.rows() && shape.width <= grid.cols(),
            "shape {shape:?} does not fit grid {grid}"
        );
        Self { grid, shapes: vec![shape] }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn shapes(&self) -> &[Shape] {
        &self.shapes
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }
}

/// Inclusive cell-area band `[(1 - delta) * alpha * h * w, (1 + delta) * alpha * h * w]`.
pub fn area_band(grid: GridSpec, alpha: f64, delta: f64) -> (f64, f64) {
    let target = alpha * grid.cells() as f64;
    ((1.0 - delta) * target, (1.0 + delta) * target)
}

pub fn enumerate_shapes(grid: GridSpec, alpha: f64, delta: f64) -> Result<ShapeSet, ConfigError> {
    let (lo, hi) = area_band(grid, alpha, delta);
    let mut shapes = Vec::new();
    for height in 1..=grid.rows() {
        for width in 1..=grid.cols() {
            let area = (height * width) as f64;
            if lo <= area && area <= hi {
                shapes.push(Shape { height, width });
            }
        }
    }
    if shapes.is_empty() {
        return Err(ConfigError::EmptyAreaBand {
            rows: grid.rows(),
            cols: grid.cols(),
            lo,
            hi,
        });
    }
    Ok(ShapeSet { grid, shapes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_by_eight_half_area() {
        let grid = GridSpec::new(6, 8).unwrap();
        let set = enumerate_shapes(grid, 0.5, 0.1).unwrap();
        // Independent enumeration over all 48 (h, w) pairs.
        let mut expected = Vec::new();
        for h in 1..=6usize {
            for w in 1..=8usize {
                if (22..=26).contains(&(h * w)) {
                    expected.push(Shape { height: h, width: w });
                }
            }
        }
        assert_eq!(set.shapes(), expected.as_slice());
        for s in [(3, 8), (4, 6), (6, 4)] {
            assert!(set.shapes().contains(&Shape { height: s.0, width: s.1 }));
        }
        assert!(!set.shapes().contains(&Shape { height: 4, width: 5 }));
        let mut sorted = set.shapes().to_vec();
        sorted.sort();
        assert_eq!(sorted, set.shapes());
    }

    #[test]
    fn degenerate_grids() {
        let one = enumerate_shapes(GridSpec::new(1, 1).unwrap(), 1.0, 0.0).unwrap();
        assert_eq!(one.shapes(), &[Shape { height: 1, width: 1 }]);
        let quarter = enumerate_shapes(GridSpec::new(2, 2).unwrap(), 0.25, 0.0).unwrap();
        assert_eq!(quarter.shapes(), &[Shape { height: 1, width: 1 }]);
    }

    #[test]
    fn empty_band_is_a_config_error() {
        assert!(matches!(
            enumerate_shapes(GridSpec::new(1, 1).unwrap(), 0.5, 0.1),
            Err(ConfigError::EmptyAreaBand { .. })
        ));
        // Area 7 on a 2x4 grid: 7 is prime and wider than the grid.
        assert!(enumerate_shapes(GridSpec::new(2, 4).unwrap(), 7.0 / 8.0, 0.0).is_err());
    }

    #[test]
    fn widening_band_only_adds_shapes() {
        let grid = GridSpec::new(6, 8).unwrap();
        let narrow = enumerate_shapes(grid, 0.5, 0.0).unwrap();
        let wide = enumerate_shapes(grid, 0.5, 0.2).unwrap();
        assert!(narrow.shapes().iter().all(|s| wide.shapes().contains(s)));
    }
}
