//! Median wall-clock timing of the search backends on random maps.

use std::hint::black_box;
use std::time::{Duration, Instant};

use crate::density::MotionRng;
use crate::search::{SearchBackend, SearchResult, ShapeSet};
use crate::types::{GridSpec, MotionDensityMap};

/// Map with independent uniform counts in `0..=max_count`.
pub fn random_map(grid: GridSpec, max_count: u64, rng: &mut MotionRng) -> MotionDensityMap {
    MotionDensityMap::from_counts(grid, (0..grid.cells()).map(|_| rng.below(max_count + 1)).collect())
}

/// Median of `runs` individually timed calls.
pub fn median_time<T>(runs: usize, mut f: impl FnMut() -> T) -> Duration {
    assert!(runs > 0);
    let mut samples: Vec<Duration> = (0..runs)
        .map(|_| {
            let start = Instant::now();
            black_box(f());
            start.elapsed()
        })
        .collect();
    samples.sort_unstable();
    samples[runs / 2]
}

#[derive(Debug, Clone)]
pub struct BackendTiming {
    pub backend: SearchBackend,
    pub median: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Disagreement {
    pub map: MotionDensityMap,
    pub results: Vec<(SearchBackend, SearchResult)>,
}

/// Checks three-way agreement on every map, then times each backend over
/// `runs` calls cycling through the maps.
pub fn bench_backends(
    maps: &[MotionDensityMap],
    shapes: &ShapeSet,
    runs: usize,
) -> Result<Vec<BackendTiming>, Box<Disagreement>> {
    for map in maps {
        let results: Vec<_> = SearchBackend::ALL.iter().map(|b| (*b, b.search(map, shapes))).collect();
        if results.iter().any(|(_, r)| *r != results[0].1) {
            return Err(Box::new(Disagreement { map: map.clone(), results }));
        }
    }
    Ok(SearchBackend::ALL
        .iter()
        .map(|&backend| {
            let mut k = 0;
            let median = median_time(runs, || {
                let r = backend.search(black_box(&maps[k % maps.len()]), shapes);
                k += 1;
                r
            });
            BackendTiming { backend, median }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::enumerate_shapes;

    #[test]
    fn median_of_odd_count() {
        let mut delays = [3u64, 1, 2].into_iter();
        let d = median_time(3, || std::thread::sleep(Duration::from_millis(delays.next().unwrap())));
        assert!(d >= Duration::from_millis(2) && d < Duration::from_millis(3) + Duration::from_millis(50));
    }

    #[test]
    fn backends_agree_and_report_three_rows() {
        let grid = GridSpec::new(6, 8).unwrap();
        let shapes = enumerate_shapes(grid, 0.5, 0.1).unwrap();
        let mut rng = MotionRng::seed_from_u64(0);
        let maps: Vec<_> = (0..10).map(|_| random_map(grid, 20, &mut rng)).collect();
        let rows = bench_backends(&maps, &shapes, 5).unwrap();
        assert_eq!(rows.len(), 3);
    }
}
