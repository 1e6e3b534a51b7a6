//! Synthetic data-generating scenarios.
//!
//! Features are uniform on [0, 1]^d; the label probability is a constant, a
//! piecewise-constant function on an axis-aligned grid, an affine function,
//! or a logistic curve. Scenarios are plain serializable values so an
//! experiment is reproducible from its config file alone.

use serde::{Deserialize, Serialize};

use crate::alloc::DiscreteDist;
use crate::error::{Error, Result};
use crate::partition::{grid_cell, Partition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureLaw {
    Uniform,
}

/// The label-probability function π(x).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PiFn {
    Constant { value: f64 },
    /// Row-major cell values on an axis-aligned grid with `bins` cells per
    /// axis (first axis slowest), matching the grid-partition indexing.
    Piecewise { bins: usize, values: Vec<f64> },
    /// `clamp(intercept + slope·x, 0, 1)`.
    Linear { intercept: f64, slope: Vec<f64> },
    /// `1 / (1 + exp(−(intercept + slope·x)))`.
    Logistic { intercept: f64, slope: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub dimension: usize,
    pub px: FeatureLaw,
    pub pi: PiFn,
    pub seed: u64,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::InvalidParam("scenario dimension must be ≥ 1".into()));
        }
        match &self.pi {
            PiFn::Constant { value } => {
                if !(0.0..=1.0).contains(value) {
                    return Err(Error::InvalidParam(format!(
                        "constant probability {value} outside [0, 1]"
                    )));
                }
            }
            PiFn::Piecewise { bins, values } => {
                if *bins == 0 {
                    return Err(Error::InvalidParam("piecewise bins must be ≥ 1".into()));
                }
                let cells = bins
                    .checked_pow(self.dimension as u32)
                    .ok_or_else(|| Error::InvalidParam("piecewise grid overflows".into()))?;
                if values.len() != cells {
                    return Err(Error::InvalidParam(format!(
                        "piecewise needs {cells} cell values, got {}",
                        values.len()
                    )));
                }
                if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
                    return Err(Error::InvalidParam(
                        "piecewise cell value outside [0, 1]".into(),
                    ));
                }
            }
            PiFn::Linear { slope, .. } | PiFn::Logistic { slope, .. } => {
                if slope.len() != self.dimension {
                    return Err(Error::InvalidParam(format!(
                        "slope has {} entries for dimension {}",
                        slope.len(),
                        self.dimension
                    )));
                }
            }
        }
        Ok(())
    }

    /// The label probability at `x`.
    pub fn pi(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dimension);
        match &self.pi {
            PiFn::Constant { value } => *value,
            PiFn::Piecewise { bins, values } => values[grid_cell(self.dimension, *bins, x)],
            PiFn::Linear { intercept, slope } => {
                let v = intercept + dot(slope, x);
                v.clamp(0.0, 1.0)
            }
            PiFn::Logistic { intercept, slope } => {
                let z = intercept + dot(slope, x);
                1.0 / (1.0 + (-z).exp())
            }
        }
    }

    /// Discretization of the distribution of π(X).
    ///
    /// Exact for constant and piecewise probabilities. The smooth kinds are
    /// pushed forward through a deterministic midpoint product grid with
    /// roughly `atoms_hint` points in total.
    pub fn pi_distribution(&self, atoms_hint: usize) -> Result<DiscreteDist<f64>> {
        self.validate()?;
        match &self.pi {
            PiFn::Constant { value } => Ok(DiscreteDist::point_mass(*value)),
            PiFn::Piecewise { values, .. } => {
                let w = 1.0 / values.len() as f64;
                DiscreteDist::new(values.clone(), vec![w; values.len()])
            }
            PiFn::Linear { .. } | PiFn::Logistic { .. } => {
                let d = self.dimension;
                let hint = atoms_hint.max(2);
                let per_axis = (hint as f64)
                    .powf(1.0 / d as f64)
                    .round()
                    .max(2.0) as usize;
                let cells = per_axis.pow(d as u32);
                let mut atoms = Vec::with_capacity(cells);
                let mut x = vec![0.0; d];
                for c in 0..cells {
                    let mut r = c;
                    for j in (0..d).rev() {
                        let k = r % per_axis;
                        r /= per_axis;
                        x[j] = (2.0 * k as f64 + 1.0) / (2.0 * per_axis as f64);
                    }
                    atoms.push(self.pi(&x));
                }
                let w = 1.0 / cells as f64;
                DiscreteDist::new(atoms, vec![w; cells])
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact per-region mass and mean label probability of a scenario under a
/// grid partition.
///
/// Supported when the probability function integrates in closed form over
/// boxes: constants, piecewise grids, and affine functions that stay inside
/// [0, 1] on the whole cube. Anything else is reported as unsupported rather
/// than silently approximated.
pub fn region_truth(scenario: &Scenario, partition: &Partition) -> Result<(Vec<f64>, Vec<f64>)> {
    scenario.validate()?;
    let (dim, gbins) = match partition {
        Partition::Grid { dim, bins } => (*dim, *bins),
        Partition::ProbBins { .. } => {
            return Err(Error::Unsupported(
                "exact region truth needs a grid partition".into(),
            ));
        }
    };
    if dim != scenario.dimension {
        return Err(Error::InvalidParam(format!(
            "partition dimension {dim} does not match scenario dimension {}",
            scenario.dimension
        )));
    }
    let m = partition.region_count();
    let p = vec![(1.0 / gbins as f64).powi(dim as i32); m];
    let pi = match &scenario.pi {
        PiFn::Constant { value } => vec![*value; m],
        PiFn::Linear { intercept, slope } => {
            let lo: f64 = intercept + slope.iter().map(|s| s.min(0.0)).sum::<f64>();
            let hi: f64 = intercept + slope.iter().map(|s| s.max(0.0)).sum::<f64>();
            if lo < -1e-12 || hi > 1.0 + 1e-12 {
                return Err(Error::Unsupported(
                    "affine probability clamps inside the cube".into(),
                ));
            }
            // Affine over a box averages to its value at the center.
            (0..m)
                .map(|cell| {
                    let center = cell_center(dim, gbins, cell);
                    (intercept + dot(slope, &center)).clamp(0.0, 1.0)
                })
                .collect()
        }
        PiFn::Piecewise { bins, values } => (0..m)
            .map(|cell| piecewise_cell_mean(dim, gbins, cell, *bins, values))
            .collect(),
        PiFn::Logistic { .. } => {
            return Err(Error::Unsupported(
                "logistic probabilities have no closed-form region means".into(),
            ));
        }
    };
    Ok((p, pi))
}

fn cell_center(dim: usize, bins: usize, cell: usize) -> Vec<f64> {
    let mut coords = vec![0.0; dim];
    let mut r = cell;
    for j in (0..dim).rev() {
        let k = r % bins;
        r /= bins;
        coords[j] = (2.0 * k as f64 + 1.0) / (2.0 * bins as f64);
    }
    coords
}

// Volume-weighted mean of a piecewise grid function over one partition cell.
fn piecewise_cell_mean(
    dim: usize,
    gbins: usize,
    cell: usize,
    sbins: usize,
    values: &[f64],
) -> f64 {
    let mut coords = vec![0usize; dim];
    let mut r = cell;
    for j in (0..dim).rev() {
        coords[j] = r % gbins;
        r /= gbins;
    }
    let total = overlap_sum(dim, gbins, &coords, sbins, values, 0, 0, 1.0);
    total * (gbins as f64).powi(dim as i32)
}

// Recursively accumulate Σ value(s-cell) · vol(s-cell ∩ partition-cell).
#[allow(clippy::too_many_arguments)]
fn overlap_sum(
    dim: usize,
    gbins: usize,
    coords: &[usize],
    sbins: usize,
    values: &[f64],
    axis: usize,
    sidx: usize,
    vol: f64,
) -> f64 {
    if axis == dim {
        return values[sidx] * vol;
    }
    let lo = coords[axis] as f64 / gbins as f64;
    let hi = (coords[axis] + 1) as f64 / gbins as f64;
    let mut acc = 0.0;
    for b in 0..sbins {
        let blo = b as f64 / sbins as f64;
        let bhi = (b + 1) as f64 / sbins as f64;
        let w = (hi.min(bhi) - lo.max(blo)).max(0.0);
        if w > 0.0 {
            acc += overlap_sum(
                dim,
                gbins,
                coords,
                sbins,
                values,
                axis + 1,
                sidx * sbins + b,
                vol * w,
            );
        }
    }
    acc
}
