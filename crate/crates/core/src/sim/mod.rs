//! Synthetic scenarios and Monte Carlo experiments.

mod adversary;
mod experiment;
mod scenario;

pub use adversary::{adversary_min_expectation, AdversaryMixture};
pub use experiment::{
    blur, chernoff_event_rate, run_coverage_experiment, CoverageReport, Method, TrialRecord,
    PI_DIST_ATOMS,
};
pub use scenario::{region_truth, FeatureLaw, PiFn, Scenario};
