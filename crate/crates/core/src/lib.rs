//! Distribution-free confidence intervals for the conditional label
//! probability P(Y = 1 | X = x) in binary regression.
//!
//! The pieces fit together as follows. [`coverage`] holds the closed-form
//! length function and the randomized superlevel-set intervals built from the
//! piecewise-linear coverage functions. [`alloc`] solves the separable convex
//! program that splits a non-coverage budget across the regions of a
//! partition and exposes the induced lower bound on expected interval length.
//! [`estimator`] fits the interval predictor from data over a fixed partition
//! using conservative region estimates, while [`split`] builds the partition
//! itself from the first half of the sample via a plug-in regressor. [`sim`]
//! contains synthetic scenarios and Monte Carlo harnesses that measure
//! coverage and length against the analytic bounds.
//!
//! The scalar kernels in [`coverage`] and [`alloc`] are generic over the
//! floating-point type via [`scalar::Real`]; everything data-facing runs on
//! `f64` through the aliases at the crate root.

pub mod alloc;
pub mod coverage;
pub mod dataset;
pub mod error;
pub mod estimator;
pub mod interval;
pub mod partition;
pub mod regressor;
pub mod scalar;
pub mod sim;
pub mod split;

pub use crate::alloc::{
    brute_force_allocation, inner_argmin, lower_bound, solve_allocation, solve_weighted,
    Allocation, DiscreteDist,
};
pub use crate::coverage::{
    coverage_fn, coverage_fn_integral, ell, ell_slope_a, sample_interval, CoverageFnParams,
};
pub use crate::dataset::Dataset;
pub use crate::error::{Error, Result};
pub use crate::estimator::{
    conservative_stats, empirical_stats, fit_fixed_partition, predict_interval, DfModel,
    RegionStats,
};
pub use crate::interval::UnitInterval;
pub use crate::partition::Partition;
pub use crate::regressor::{
    default_knn_k, fit_histogram, fit_knn, fit_regressor, FittedRegressor, RegressorSpec,
};
pub use crate::scalar::Real;
pub use crate::split::{build_prob_partition, fit_split, partition_size};

/// Double-precision interval, the concrete type used by the estimator layers.
pub type Interval = UnitInterval<f64>;
/// Double-precision coverage-function parameters.
pub type CoverageParams = CoverageFnParams<f64>;
/// Double-precision discrete distribution on [0, 1].
pub type Dist = DiscreteDist<f64>;
