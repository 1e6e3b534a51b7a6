//! Total partitions of feature space.
//!
//! Every feature vector maps to exactly one region index in `0..M`. Grid
//! partitions tile [0, 1]^d with equal axis-aligned cells (points outside the
//! cube are clamped into the edge cells); probability-bin partitions cut the
//! range of a fitted regressor's estimate into `M` equal bins, left-closed,
//! with the last bin closed at 1.

use serde::{Deserialize, Serialize};

use crate::regressor::FittedRegressor;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Partition {
    /// Axis-aligned grid over [0, 1]^dim with `bins` cells per axis.
    Grid { dim: usize, bins: usize },
    /// Bins `[(m−1)/M, m/M)` over a fitted regressor's estimated probability.
    ProbBins {
        regressor: FittedRegressor,
        regions: usize,
    },
}

impl Partition {
    pub fn region_count(&self) -> usize {
        match self {
            Partition::Grid { dim, bins } => bins.pow(*dim as u32),
            Partition::ProbBins { regions, .. } => *regions,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Partition::Grid { dim, .. } => *dim,
            Partition::ProbBins { regressor, .. } => regressor.dim(),
        }
    }

    /// Index of the region containing `x`, in `0..region_count()`.
    pub fn region_index(&self, x: &[f64]) -> usize {
        match self {
            Partition::Grid { dim, bins } => grid_cell(*dim, *bins, x),
            Partition::ProbBins { regressor, regions } => {
                prob_bin(*regions, regressor.predict(x))
            }
        }
    }
}

/// Row-major cell index of `x` in an axis-aligned grid (first axis slowest);
/// coordinates outside [0, 1] fall into the nearest edge cell.
pub(crate) fn grid_cell(dim: usize, bins: usize, x: &[f64]) -> usize {
    debug_assert_eq!(x.len(), dim);
    let b = bins as f64;
    let mut idx = 0usize;
    for &v in x {
        let k = ((v * b).floor() as isize).clamp(0, bins as isize - 1) as usize;
        idx = idx * bins + k;
    }
    idx
}

/// Probability bin of `phat` among `regions` equal bins of [0, 1].
///
/// Bin edges are the floating-point quotients k/M, so an estimate exactly
/// equal to an edge lands in the bin it opens.
pub(crate) fn prob_bin(regions: usize, phat: f64) -> usize {
    debug_assert!((0.0..=1.0).contains(&phat));
    let m = regions as f64;
    let last = regions as isize - 1;
    let mut k = ((phat * m).floor() as isize).clamp(0, last);
    if k > 0 && (k as f64) / m > phat {
        k -= 1;
    } else if k < last && ((k + 1) as f64) / m <= phat {
        k += 1;
    }
    k as usize
}
