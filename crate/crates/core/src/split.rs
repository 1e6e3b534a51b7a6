//! Sample splitting: learn the partition on the first half of the data, fit
//! the interval predictor on the second half.
//!
//! The first `⌊n/2⌋` points train a probability regressor whose estimate is
//! cut into `M = ⌈√(n / ln n)⌉` equal bins to form the partition; the
//! remaining `⌈n/2⌉` points feed the fixed-partition fit, whose conservative
//! estimates use the second-half count. Points are split in the order given;
//! callers that want a random split shuffle first.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::estimator::{fit_fixed_partition, DfModel};
use crate::partition::Partition;
use crate::regressor::{fit_regressor, FittedRegressor, RegressorSpec};

/// Number of probability bins for a sample of size `n`: `⌈√(n / ln n)⌉`,
/// natural logarithm. Requires `n ≥ 3` so the logarithm exceeds one.
pub fn partition_size(n: usize) -> usize {
    assert!(n >= 3, "partition size needs n ≥ 3, got {n}");
    let nf = n as f64;
    (nf / nf.ln()).sqrt().ceil() as usize
}

/// Wrap a fitted regressor into an `M`-bin probability partition.
pub fn build_prob_partition(regressor: FittedRegressor, regions: usize) -> Partition {
    assert!(regions >= 1, "need at least one region");
    Partition::ProbBins { regressor, regions }
}

/// Run the full splitting pipeline on `data` in the order given.
pub fn fit_split(data: &Dataset, alpha: f64, spec: RegressorSpec) -> Result<DfModel> {
    let n = data.len();
    if n < 3 {
        return Err(Error::InvalidData(format!(
            "splitting needs at least 3 points, got {n}"
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParam(format!("alpha {alpha} outside (0, 1)")));
    }
    let half = n / 2;
    let train = data.subset(0..half);
    let rest = data.subset(half..n);
    let regressor = fit_regressor(spec, &train)?;
    let partition = build_prob_partition(regressor, partition_size(n));
    fit_fixed_partition(&rest, partition, alpha)
}
