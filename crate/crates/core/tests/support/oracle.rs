//! Brute-force reference for the rectangle search, written without any of
//! the library's search code: it enumerates corner pairs instead of shapes,
//! keeps every admissible candidate, and sorts.

#![allow(dead_code)]

/// `(score, row, col, height, width)` of the best admissible rectangle, or
/// `None` when no rectangle fits the band.
pub fn best_rectangle(counts: &[u64], rows: usize, cols: usize, alpha: f64, delta: f64) -> Option<(u64, usize, usize, usize, usize)> {
    let target = alpha * (rows * cols) as f64;
    let (lo, hi) = ((1.0 - delta) * target, (1.0 + delta) * target);
    let mut candidates = Vec::new();
    for top in 0..rows {
        for bottom in top..rows {
            for left in 0..cols {
                for right in left..cols {
                    let (h, w) = (bottom - top + 1, right - left + 1);
                    let area = (h * w) as f64;
                    if area < lo || area > hi {
                        continue;
                    }
                    let mut mass = 0;
                    for (idx, c) in counts.iter().enumerate() {
                        let (r, q) = (idx / cols, idx % cols);
                        if (top..=bottom).contains(&r) && (left..=right).contains(&q) {
                            mass += c;
                        }
                    }
                    candidates.push((mass, top, left, h, w));
                }
            }
        }
    }
    candidates.sort_by(|a, b| b.0.cmp(&a.0).then((a.1, a.2, a.3, a.4).cmp(&(b.1, b.2, b.3, b.4))));
    candidates.first().copied()
}

/// All admissible `(height, width)` pairs by direct enumeration.
pub fn admissible_shapes(rows: usize, cols: usize, alpha: f64, delta: f64) -> Vec<(usize, usize)> {
    let target = alpha * (rows * cols) as f64;
    let mut out = Vec::new();
    for h in 1..=rows {
        for w in 1..=cols {
            let a = (h * w) as f64;
            if (1.0 - delta) * target <= a && a <= (1.0 + delta) * target {
                out.push((h, w));
            }
        }
    }
    out
}
