//! Area-constrained maximum-mass rectangle search over a motion-density map.
//!
//! Three backends share one contract and one tie-break: highest score, then
//! smallest `(row, col, height, width)`. [`search_naive`] sums every window
//! directly and is the reference the other two are checked against.

mod integral;
mod naive;
mod shapes;
mod sliding;

pub use integral::{build_integral, search_integral, IntegralImage};
pub use naive::search_naive;
pub use shapes::{area_band, enumerate_shapes, Shape, ShapeSet};
pub use sliding::{search_sliding, search_sliding_all};

use crate::types::{GridBox, MotionDensityMap};

/// Winning rectangle and the motion mass inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchResult {
    pub grid_box: GridBox,
    pub score: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchBackend {
    Naive,
    Integral,
    Sliding,
}

impl SearchBackend {
    pub const ALL: [SearchBackend; 3] = [SearchBackend::Naive, SearchBackend::Integral, SearchBackend::Sliding];

    pub fn name(&self) -> &'static str {
        match self {
            SearchBackend::Naive => "naive",
            SearchBackend::Integral => "integral",
            SearchBackend::Sliding => "sliding",
        }
    }

    pub fn search(&self, map: &MotionDensityMap, shapes: &ShapeSet) -> SearchResult {
        match self {
            SearchBackend::Naive => search_naive(map, shapes),
            SearchBackend::Integral => search_integral(map, shapes),
            SearchBackend::Sliding => search_sliding_all(map, shapes),
        }
    }
}

impl std::str::FromStr for SearchBackend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(SearchBackend::Naive),
            "integral" => Ok(SearchBackend::Integral),
            "sliding" => Ok(SearchBackend::Sliding),
            other => Err(format!("unknown search backend {other:?}")),
        }
    }
}

/// True when `candidate` should replace `best` under the shared tie-break.
pub(crate) fn beats(score: u64, candidate: &GridBox, best: &Option<SearchResult>) -> bool {
    match best {
        None => true,
        Some(b) => score > b.score || (score == b.score && candidate < &b.grid_box),
    }
}
