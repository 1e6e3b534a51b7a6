//! Fitting the interval predictor over a fixed partition.
//!
//! From a binary-labeled sample, each region gets an empirical mass `p_hat`
//! and label frequency `pi_hat`, then conservative versions: `p_tilde`
//! inflates the mass and `pi_tilde` pulls the label frequency toward 1/2,
//! which is the hardest target to cover. The allocation solver then splits
//! the non-coverage budget `alpha` across regions using the conservative
//! weights, and prediction draws the randomized interval for the region of
//! the query point.

use serde::{Deserialize, Serialize};

use crate::alloc::solve_weighted;
use crate::coverage::{sample_interval, CoverageFnParams};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::interval::UnitInterval;
use crate::partition::Partition;

/// Per-region estimates: empirical (`p_hat`, `pi_hat`), conservative
/// (`p_tilde`, `pi_tilde`), and the allocated non-coverage budget `a_tilde`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionStats {
    pub p_hat: f64,
    pub pi_hat: f64,
    pub p_tilde: f64,
    pub pi_tilde: f64,
    pub a_tilde: f64,
}

/// A fitted distribution-free interval predictor.
///
/// Serializes to a versioned JSON document; all real fields round-trip
/// bit-faithfully through the decimal encoding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DfModel {
    pub version: u32,
    pub alpha: f64,
    pub n: usize,
    pub m: usize,
    pub partition: Partition,
    pub regions: Vec<RegionStats>,
}

pub const MODEL_VERSION: u32 = 1;

impl DfModel {
    /// Check the internal consistency of a deserialized model.
    pub fn validate(&self) -> Result<()> {
        if self.version != MODEL_VERSION {
            return Err(Error::InvalidData(format!(
                "unsupported model version {}",
                self.version
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidData(format!(
                "model alpha {} outside (0, 1)",
                self.alpha
            )));
        }
        if self.m != self.partition.region_count() || self.m != self.regions.len() {
            return Err(Error::InvalidData(format!(
                "region count mismatch: m = {}, partition = {}, stats = {}",
                self.m,
                self.partition.region_count(),
                self.regions.len()
            )));
        }
        let mut spent = 0.0;
        for (i, r) in self.regions.iter().enumerate() {
            let unit = |v: f64| (0.0..=1.0).contains(&v);
            if !(unit(r.p_hat) && unit(r.pi_hat) && unit(r.pi_tilde) && unit(r.a_tilde)) {
                return Err(Error::InvalidData(format!("region {i} stats out of range")));
            }
            if !(r.p_tilde.is_finite() && r.p_tilde >= r.p_hat) {
                return Err(Error::InvalidData(format!(
                    "region {i} has p_tilde {} below p_hat {}",
                    r.p_tilde, r.p_hat
                )));
            }
            spent += r.p_tilde * r.a_tilde;
        }
        if spent > self.alpha + 1e-9 {
            return Err(Error::InvalidData(format!(
                "allocated budget {spent} exceeds alpha {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// Empirical region mass and label frequency.
///
/// `p_hat[m]` is the fraction of points landing in region `m`; `pi_hat[m]`
/// is the fraction of those with label 1, or 1/2 for an empty region.
pub fn empirical_stats(data: &Dataset, partition: &Partition) -> Result<(Vec<f64>, Vec<f64>)> {
    if data.is_empty() {
        return Err(Error::InvalidData("empty dataset".into()));
    }
    if data.dim() != partition.dim() {
        return Err(Error::InvalidData(format!(
            "data dimension {} does not match partition dimension {}",
            data.dim(),
            partition.dim()
        )));
    }
    let m = partition.region_count();
    let mut count = vec![0usize; m];
    let mut ones = vec![0usize; m];
    for i in 0..data.len() {
        let r = partition.region_index(data.row(i));
        count[r] += 1;
        ones[r] += usize::from(data.label(i));
    }
    let n = data.len() as f64;
    let p_hat = count.iter().map(|&c| c as f64 / n).collect();
    let pi_hat = count
        .iter()
        .zip(&ones)
        .map(|(&c, &o)| if c == 0 { 0.5 } else { o as f64 / c as f64 })
        .collect();
    Ok((p_hat, pi_hat))
}

/// Conservative region estimates.
///
/// With `L = ln(4·M·n/alpha)`, the mass is inflated to
/// `p_tilde = p_hat + √(p_hat·3L/n) + 3L/n`, and the label frequency moves
/// toward 1/2 by `√(q·2L/(n·p_hat)) + 2L/(n·p_hat)` where `q` is the
/// frequency of the minority side, clamping at 1/2. Natural logarithm
/// throughout. Empty regions get `pi_tilde = 1/2`.
pub fn conservative_stats(
    p_hat: &[f64],
    pi_hat: &[f64],
    n: usize,
    alpha: f64,
) -> (Vec<f64>, Vec<f64>) {
    debug_assert!(n >= 2);
    debug_assert!(alpha > 0.0 && alpha < 1.0);
    debug_assert_eq!(p_hat.len(), pi_hat.len());
    let m = p_hat.len() as f64;
    let nf = n as f64;
    let lterm = (4.0 * m * nf / alpha).ln();
    let p_tilde = p_hat
        .iter()
        .map(|&p| p + (p * 3.0 * lterm / nf).sqrt() + 3.0 * lterm / nf)
        .collect();
    let pi_tilde = p_hat
        .iter()
        .zip(pi_hat)
        .map(|(&p, &pi)| {
            if p == 0.0 {
                return 0.5;
            }
            let c = 2.0 * lterm / (nf * p);
            if pi <= 0.5 {
                (pi + (pi * c).sqrt() + c).min(0.5)
            } else {
                (pi - ((1.0 - pi) * c).sqrt() - c).max(0.5)
            }
        })
        .collect();
    (p_tilde, pi_tilde)
}

/// Fit the interval predictor on `data` over a fixed partition.
///
/// The budget constraint uses the inflated masses `p_tilde`, which may sum to
/// more than one; the solver accepts such weight vectors directly.
pub fn fit_fixed_partition(data: &Dataset, partition: Partition, alpha: f64) -> Result<DfModel> {
    if data.len() < 2 {
        return Err(Error::InvalidData(format!(
            "need at least 2 points, got {}",
            data.len()
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParam(format!("alpha {alpha} outside (0, 1)")));
    }
    let (p_hat, pi_hat) = empirical_stats(data, &partition)?;
    let (p_tilde, pi_tilde) = conservative_stats(&p_hat, &pi_hat, data.len(), alpha);
    let alloc = solve_weighted(&pi_tilde, &p_tilde, alpha)?;
    let regions = (0..p_hat.len())
        .map(|i| RegionStats {
            p_hat: p_hat[i],
            pi_hat: pi_hat[i],
            p_tilde: p_tilde[i],
            pi_tilde: pi_tilde[i],
            a_tilde: alloc.a[i],
        })
        .collect();
    Ok(DfModel {
        version: MODEL_VERSION,
        alpha,
        n: data.len(),
        m: partition.region_count(),
        partition,
        regions,
    })
}

/// The randomized interval for query `x` at superlevel threshold `u`.
pub fn predict_interval(model: &DfModel, x: &[f64], u: f64) -> UnitInterval<f64> {
    let r = &model.regions[model.partition.region_index(x)];
    sample_interval(&CoverageFnParams::new(r.pi_tilde, r.a_tilde), u)
}
