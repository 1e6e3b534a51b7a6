//! Monte Carlo harnesses: coverage experiments, partition blur, and the
//! concentration-event rate.
//!
//! Every trial draws its randomness from a counter-based stream of the master
//! seed (`set_stream(trial)`), so results do not depend on scheduling and the
//! harness can fan trials out across threads. Aggregation walks trials in
//! index order to keep reports bit-reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alloc::lower_bound;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::estimator::{
    conservative_stats, empirical_stats, fit_fixed_partition, predict_interval,
};
use crate::partition::Partition;
use crate::regressor::RegressorSpec;
use crate::sim::scenario::{region_truth, Scenario};
use crate::split::fit_split;

/// How each trial fits its model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    /// Fixed axis-aligned grid partition with `bins` cells per axis.
    Fixed { bins: usize },
    /// Sample splitting with the given regressor.
    Split { regressor: RegressorSpec },
}

/// Summary of a coverage experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub trials: usize,
    pub pi_coverage: f64,
    pub y_coverage: f64,
    pub mean_length: f64,
    pub se_length: f64,
    pub lower_bound: f64,
    pub alpha: f64,
}

/// One trial's outcome, for per-trial exports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub covered_pi: bool,
    pub covered_y: bool,
    pub length: f64,
}

/// Number of atoms used to discretize smooth π-distributions for the
/// reported lower bound.
pub const PI_DIST_ATOMS: usize = 10_000;

/// Repeatedly draw `n + 1` points, fit on the first `n`, and score the
/// randomized interval at the held-out point.
pub fn run_coverage_experiment(
    scenario: &Scenario,
    method: &Method,
    n: usize,
    alpha: f64,
    trials: usize,
    seed: u64,
) -> Result<(CoverageReport, Vec<TrialRecord>)> {
    scenario.validate()?;
    if trials < 100 {
        return Err(Error::InvalidParam(format!(
            "need at least 100 trials, got {trials}"
        )));
    }
    if n < 3 {
        return Err(Error::InvalidParam(format!("need n ≥ 3, got {n}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParam(format!("alpha {alpha} outside (0, 1)")));
    }

    let records: Vec<TrialRecord> = (0..trials)
        .into_par_iter()
        .map(|trial| run_trial(scenario, method, n, alpha, seed, trial as u64))
        .collect::<Result<Vec<_>>>()?;

    let tf = trials as f64;
    let pi_coverage = records.iter().filter(|r| r.covered_pi).count() as f64 / tf;
    let y_coverage = records.iter().filter(|r| r.covered_y).count() as f64 / tf;
    let mean_length = records.iter().map(|r| r.length).sum::<f64>() / tf;
    let var = records
        .iter()
        .map(|r| (r.length - mean_length) * (r.length - mean_length))
        .sum::<f64>()
        / (tf - 1.0);
    let se_length = (var / tf).sqrt();
    let lb = lower_bound(&scenario.pi_distribution(PI_DIST_ATOMS)?, alpha)?;

    Ok((
        CoverageReport {
            trials,
            pi_coverage,
            y_coverage,
            mean_length,
            se_length,
            lower_bound: lb,
            alpha,
        },
        records,
    ))
}

fn run_trial(
    scenario: &Scenario,
    method: &Method,
    n: usize,
    alpha: f64,
    seed: u64,
    trial: u64,
) -> Result<TrialRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let data = draw(scenario, n, &mut rng);
    let (x_test, y_test) = draw_point(scenario, &mut rng);
    let model = match method {
        Method::Fixed { bins } => fit_fixed_partition(
            &data,
            Partition::Grid {
                dim: scenario.dimension,
                bins: *bins,
            },
            alpha,
        )?,
        Method::Split { regressor } => fit_split(&data, alpha, *regressor)?,
    };
    let u: f64 = rng.gen();
    let interval = predict_interval(&model, &x_test, u);
    Ok(TrialRecord {
        covered_pi: interval.contains(scenario.pi(&x_test)),
        covered_y: interval.contains(f64::from(y_test)),
        length: interval.length(),
    })
}

fn draw(scenario: &Scenario, n: usize, rng: &mut ChaCha8Rng) -> Dataset {
    let d = scenario.dimension;
    let mut data = Dataset::with_capacity(d, n);
    let mut x = vec![0.0; d];
    for _ in 0..n {
        for v in x.iter_mut() {
            *v = rng.gen();
        }
        let y = u8::from(rng.gen::<f64>() < scenario.pi(&x));
        data.push(&x, y);
    }
    data
}

fn draw_point(scenario: &Scenario, rng: &mut ChaCha8Rng) -> (Vec<f64>, u8) {
    let mut x = vec![0.0; scenario.dimension];
    for v in x.iter_mut() {
        *v = rng.gen();
    }
    let y = u8::from(rng.gen::<f64>() < scenario.pi(&x));
    (x, y)
}

/// Monte Carlo estimate of the partition blur `E|π(X) − π_{m(X)}|`, the mean
/// absolute deviation of the label probability from its region mean.
///
/// When the probability function is piecewise-constant on a grid that the
/// partition refines, the blur is identically zero and is returned exactly.
/// Otherwise region means come from a first pass over the sample and the
/// deviation from a second pass over the same points.
pub fn blur(scenario: &Scenario, partition: &Partition, samples: usize, seed: u64) -> Result<f64> {
    scenario.validate()?;
    if samples < 1000 {
        return Err(Error::InvalidParam(format!(
            "need at least 1000 samples, got {samples}"
        )));
    }
    if let (
        crate::sim::scenario::PiFn::Piecewise { bins, .. },
        Partition::Grid { dim, bins: gbins },
    ) = (&scenario.pi, partition)
    {
        if *dim == scenario.dimension && gbins % bins == 0 {
            return Ok(0.0);
        }
    }

    let d = scenario.dimension;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs = vec![0.0; samples * d];
    for v in xs.iter_mut() {
        *v = rng.gen();
    }
    let m = partition.region_count();
    let mut sum = vec![0.0; m];
    let mut count = vec![0usize; m];
    let mut region = vec![0usize; samples];
    let mut pi = vec![0.0; samples];
    for i in 0..samples {
        let x = &xs[i * d..(i + 1) * d];
        let r = partition.region_index(x);
        region[i] = r;
        pi[i] = scenario.pi(x);
        sum[r] += pi[i];
        count[r] += 1;
    }
    let mean: Vec<f64> = sum
        .iter()
        .zip(&count)
        .map(|(&s, &c)| if c == 0 { 0.5 } else { s / c as f64 })
        .collect();
    let total: f64 = (0..samples).map(|i| (pi[i] - mean[region[i]]).abs()).sum();
    Ok(total / samples as f64)
}

/// Fraction of synthetic fits in which the conservative estimates satisfy
/// their concentration bounds simultaneously in every region.
///
/// With `L = ln(4·M·n/alpha)` and true region mass `p` and mean `π`, a trial
/// counts as a hit when for all regions
///
/// ```text
/// p ≤ p̃·(1 − 1/n),   p̃ ≤ p + √(p·18L/n) + 12L/n,
/// |π̃ − π| ≤ √(min(π, 1−π)·18L/(n·p)) + 12L/(n·p),
/// ```
///
/// and `π̃` sits weakly between `π` and 1/2.
pub fn chernoff_event_rate(
    scenario: &Scenario,
    partition: &Partition,
    n: usize,
    alpha: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if trials < 500 {
        return Err(Error::InvalidParam(format!(
            "need at least 500 trials, got {trials}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidParam(format!("need n ≥ 2, got {n}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParam(format!("alpha {alpha} outside (0, 1)")));
    }
    let (p_true, pi_true) = region_truth(scenario, partition)?;
    let m = partition.region_count();
    let lterm = (4.0 * m as f64 * n as f64 / alpha).ln();
    let nf = n as f64;

    let hits: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<bool> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let data = draw(scenario, n, &mut rng);
            let (p_hat, pi_hat) = empirical_stats(&data, partition)?;
            let (p_tilde, pi_tilde) = conservative_stats(&p_hat, &pi_hat, n, alpha);
            let ok = (0..m).all(|j| {
                let (p, pi) = (p_true[j], pi_true[j]);
                let mass_ok = p <= p_tilde[j] * (1.0 - 1.0 / nf)
                    && p_tilde[j] <= p + (p * 18.0 * lterm / nf).sqrt() + 12.0 * lterm / nf;
                let spread = (pi.min(1.0 - pi) * 18.0 * lterm / (nf * p)).sqrt()
                    + 12.0 * lterm / (nf * p);
                let mean_ok = (pi_tilde[j] - pi).abs() <= spread
                    && ((pi <= pi_tilde[j] && pi_tilde[j] <= 0.5)
                        || (0.5 <= pi_tilde[j] && pi_tilde[j] <= pi));
                mass_ok && mean_ok
            });
            Ok(ok)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(hits.iter().filter(|&&h| h).count() as f64 / trials as f64)
}
