//! Plug-in probability regressors used to learn a partition from data.
//!
//! Two small estimators ship by default: k-nearest neighbors with
//! lowest-index tie-breaking, and an axis-aligned histogram over the unit
//! cube. Both expose the same fitted interface, and both serialize into the
//! model document so predictions replay exactly.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::partition::grid_cell;

/// Which regressor to fit, with its hyperparameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegressorSpec {
    Knn { k: usize },
    Histogram { bins: usize },
}

/// A fitted regressor; k-NN keeps its training subset verbatim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FittedRegressor {
    Knn {
        k: usize,
        dim: usize,
        xs: Vec<f64>,
        ys: Vec<u8>,
    },
    Histogram {
        bins: usize,
        dim: usize,
        cell_means: Vec<f64>,
    },
}

/// Default neighbor count `⌈n^{2/(2+d)}⌉` for a training set of size `n` in
/// dimension `d`, clamped to the training size.
pub fn default_knn_k(n_train: usize, dim: usize) -> usize {
    let k = (n_train as f64)
        .powf(2.0 / (2.0 + dim as f64))
        .ceil() as usize;
    k.clamp(1, n_train.max(1))
}

pub fn fit_regressor(spec: RegressorSpec, train: &Dataset) -> Result<FittedRegressor> {
    match spec {
        RegressorSpec::Knn { k } => fit_knn(train, k),
        RegressorSpec::Histogram { bins } => fit_histogram(train, bins),
    }
}

/// Fit a k-nearest-neighbor regressor: prediction at `x` is the mean label of
/// the `k` nearest training points under Euclidean distance, with exact
/// distance ties broken toward the lower training index.
pub fn fit_knn(train: &Dataset, k: usize) -> Result<FittedRegressor> {
    if train.is_empty() {
        return Err(Error::InvalidData("empty training set".into()));
    }
    if k == 0 || k > train.len() {
        return Err(Error::InvalidParam(format!(
            "k = {k} outside [1, {}]",
            train.len()
        )));
    }
    Ok(FittedRegressor::Knn {
        k,
        dim: train.dim(),
        xs: train.features().to_vec(),
        ys: train.labels().to_vec(),
    })
}

/// Fit an axis-aligned histogram regressor on [0, 1]^d with `bins` cells per
/// axis; cells without training points predict 1/2.
pub fn fit_histogram(train: &Dataset, bins: usize) -> Result<FittedRegressor> {
    if train.is_empty() {
        return Err(Error::InvalidData("empty training set".into()));
    }
    if bins == 0 {
        return Err(Error::InvalidParam("bins must be ≥ 1".into()));
    }
    let dim = train.dim();
    let cells = bins
        .checked_pow(dim as u32)
        .ok_or_else(|| Error::InvalidParam(format!("{bins} bins in dimension {dim} overflow")))?;
    let mut count = vec![0usize; cells];
    let mut ones = vec![0usize; cells];
    for i in 0..train.len() {
        let c = grid_cell(dim, bins, train.row(i));
        count[c] += 1;
        ones[c] += usize::from(train.label(i));
    }
    let cell_means = count
        .iter()
        .zip(&ones)
        .map(|(&c, &o)| if c == 0 { 0.5 } else { o as f64 / c as f64 })
        .collect();
    Ok(FittedRegressor::Histogram {
        bins,
        dim,
        cell_means,
    })
}

impl FittedRegressor {
    pub fn dim(&self) -> usize {
        match self {
            FittedRegressor::Knn { dim, .. } | FittedRegressor::Histogram { dim, .. } => *dim,
        }
    }

    /// Estimated label probability at `x`, always in [0, 1].
    pub fn predict(&self, x: &[f64]) -> f64 {
        match self {
            FittedRegressor::Knn { k, dim, xs, ys } => {
                debug_assert_eq!(x.len(), *dim);
                let n = ys.len();
                let mut order: Vec<(f64, u32)> = (0..n)
                    .map(|i| {
                        let row = &xs[i * dim..(i + 1) * dim];
                        let d2: f64 = row
                            .iter()
                            .zip(x)
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum();
                        (d2, i as u32)
                    })
                    .collect();
                let k = *k;
                if k < n {
                    order.select_nth_unstable_by(k - 1, |a, b| {
                        a.partial_cmp(b).expect("finite distances")
                    });
                }
                let ones: u32 = order[..k].iter().map(|&(_, i)| u32::from(ys[i as usize])).sum();
                f64::from(ones) / k as f64
            }
            FittedRegressor::Histogram {
                bins,
                dim,
                cell_means,
            } => cell_means[grid_cell(*dim, *bins, x)],
        }
    }
}
