//! Separable convex budget allocation over a discrete distribution.
//!
//! Given atoms `t_1..t_M` with positive weights `w_1..w_M` and a budget
//! `alpha`, the program is
//!
//! ```text
//! minimize   Σ w_m · ell(t_m, a_m)
//! subject to Σ w_m · a_m ≤ alpha,   a_m ∈ [0, 1].
//! ```
//!
//! `ell` is convex and nonincreasing in `a` with a closed-form derivative, so
//! the solver bisects on the dual multiplier: for each candidate λ the
//! per-coordinate problem `min ell(t, a) + λ·a` has an explicit minimizer
//! (`inner_argmin`), and the total budget it demands is nonincreasing in λ.
//! Coordinates whose per-coordinate objective is flat at the final λ absorb
//! the residual budget fractionally, lowest index first, so the constraint
//! binds exactly whenever it is active.
//!
//! Weights are not required to sum to one: the same program is solved for
//! inflated region estimates whose total mass exceeds one. `DiscreteDist`
//! adds the sum-to-one validation used for genuine distributions.

use crate::coverage::{ell, ell_slope_a};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A finite distribution on [0, 1]: atom locations plus probability weights
/// summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDist<T> {
    atoms: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> DiscreteDist<T> {
    pub fn new(atoms: Vec<T>, weights: Vec<T>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidDistribution("no atoms".into()));
        }
        if atoms.len() != weights.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        for &t in &atoms {
            if !(t >= T::zero() && t <= T::one()) {
                return Err(Error::InvalidDistribution(format!(
                    "atom {t} outside [0, 1]"
                )));
            }
        }
        for &w in &weights {
            if !w.is_finite() || w < T::zero() {
                return Err(Error::InvalidDistribution(format!("negative weight {w}")));
            }
        }
        let sum: T = weights.iter().copied().sum();
        if (sum - T::one()).abs() > T::budget_tol() {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {sum}, not 1"
            )));
        }
        Ok(DiscreteDist { atoms, weights })
    }

    /// The distribution concentrated at a single point.
    pub fn point_mass(t: T) -> Self {
        assert!(t >= T::zero() && t <= T::one(), "atom {t} outside [0, 1]");
        DiscreteDist {
            atoms: vec![t],
            weights: vec![T::one()],
        }
    }

    pub fn atoms(&self) -> &[T] {
        &self.atoms
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A budget split across atoms together with the dual multiplier, objective
/// value, and the budget actually spent.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation<T> {
    pub a: Vec<T>,
    pub dual: T,
    pub objective: T,
    pub budget_used: T,
}

/// Minimizer of `a ↦ ell(t, a) + dual·a` over [0, 1].
///
/// For interior means the dual axis splits at `2t'` and `1/(2t')` with
/// `t' = min(t, 1 − t)`: above the upper threshold spending is pure cost,
/// between them the smooth branch `√(t'/(2·dual))` applies (clamped to
/// `[t', 1/2]`), below the lower one the whole unit budget pays off. Means at
/// 0 or 1 never receive budget, and at `t = 1/2` the objective is linear so
/// the minimizer jumps from 1 to 0 as the dual crosses 1.
pub fn inner_argmin<T: Real>(t: T, dual: T) -> T {
    debug_assert!(t >= T::zero() && t <= T::one());
    debug_assert!(dual >= T::zero());
    let zero = T::zero();
    let one = T::one();
    let half = T::half();
    let two = T::two();
    let tm = t.min(one - t);
    if tm == zero {
        return zero;
    }
    if tm == half {
        return if dual < one { one } else { zero };
    }
    let upper = (two * tm).recip();
    let lower = two * tm;
    if dual > upper {
        zero
    } else if dual >= lower {
        (tm / (two * dual)).sqrt().max(tm).min(half)
    } else {
        one
    }
}

/// Solve the allocation program for a genuine distribution.
pub fn solve_allocation<T: Real>(dist: &DiscreteDist<T>, alpha: T) -> Result<Allocation<T>> {
    solve_weighted(dist.atoms(), dist.weights(), alpha)
}

/// The greatest lower bound on expected interval length when the target mean
/// is distributed as `dist` and the total non-coverage budget is `alpha`.
///
/// For a discrete distribution the infimum over measurable budget rules
/// reduces to one budget value per atom, which is exactly the allocation
/// program's optimum.
pub fn lower_bound<T: Real>(dist: &DiscreteDist<T>, alpha: T) -> Result<T> {
    Ok(solve_allocation(dist, alpha)?.objective)
}

/// Solve the allocation program for an arbitrary nonnegative weight vector
/// (the weights need not sum to one).
pub fn solve_weighted<T: Real>(atoms: &[T], weights: &[T], alpha: T) -> Result<Allocation<T>> {
    validate_instance(atoms, weights, alpha)?;
    let zero = T::zero();
    let one = T::one();
    let half = T::half();
    let two = T::two();

    let active = |t: T| t > zero && t < one;

    // Budget that zeroes the objective outright.
    let full: T = atoms
        .iter()
        .zip(weights)
        .filter(|(t, _)| active(**t))
        .map(|(_, w)| *w)
        .sum();
    if full <= alpha {
        let a: Vec<T> = atoms
            .iter()
            .map(|&t| if active(t) { one } else { zero })
            .collect();
        return Ok(Allocation {
            a,
            dual: zero,
            objective: zero,
            budget_used: full,
        });
    }

    // Single coordinate: ell is nonincreasing in a, so spend whatever fits.
    // Solving this case in closed form keeps the point-mass identity exact.
    if atoms.len() == 1 {
        let (t, w) = (atoms[0], weights[0]);
        let a0 = (alpha / w).min(one);
        return Ok(Allocation {
            a: vec![a0],
            dual: -ell_slope_a(t, a0),
            objective: w * ell(t, a0),
            budget_used: w * a0,
        });
    }

    let budget_at = |lambda: T| -> T {
        atoms
            .iter()
            .zip(weights)
            .map(|(&t, &w)| w * inner_argmin(t, lambda))
            .sum()
    };

    let lambda_max = atoms
        .iter()
        .filter(|&&t| active(t))
        .map(|&t| (two * t.min(one - t)).recip())
        .fold(zero, T::max);

    // Invariant: budget_at(lo) > alpha ≥ budget_at(hi).
    let mut lo = zero;
    let mut hi = lambda_max + one;
    for _ in 0..2000 {
        if hi - lo <= T::dual_tol() {
            break;
        }
        let mid = half * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if budget_at(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let a_lo: Vec<T> = atoms
        .iter()
        .map(|&t| inner_argmin(t, lo))
        .collect();
    let mut a: Vec<T> = atoms.iter().map(|&t| inner_argmin(t, hi)).collect();
    let mut spent: T = a.iter().zip(weights).map(|(&ai, &w)| w * ai).sum();

    // Distribute the residual budget across coordinates whose objective is
    // flat at the final dual, lowest index first.
    for i in 0..a.len() {
        let need = alpha - spent;
        if need <= zero {
            break;
        }
        let w = weights[i];
        if w == zero {
            continue;
        }
        let room = a_lo[i] - a[i];
        if room <= zero {
            continue;
        }
        let take = room.min(need / w);
        a[i] = a[i] + take;
        spent = spent + w * take;
    }

    let objective = atoms
        .iter()
        .zip(weights)
        .zip(&a)
        .map(|((&t, &w), &ai)| w * ell(t, ai))
        .sum();
    Ok(Allocation {
        a,
        dual: half * (lo + hi),
        objective,
        budget_used: spent,
    })
}

/// Exhaustive grid-search oracle for validating the solver on tiny instances.
///
/// Enumerates `a ∈ {0, step, 2·step, …, 1}^M` restricted to feasible points
/// and returns the grid minimizer. Instances with one or two atoms are fully
/// enumerated; with three atoms the last coordinate is set directly to its
/// largest feasible grid value, which preserves the grid minimum because
/// `ell` is nonincreasing in the budget.
pub fn brute_force_allocation<T: Real>(
    dist: &DiscreteDist<T>,
    alpha: T,
    step: T,
) -> Result<Allocation<T>> {
    let m = dist.len();
    if m > 3 {
        return Err(Error::InvalidParam(format!(
            "brute force supports at most 3 atoms, got {m}"
        )));
    }
    if !(step > T::zero() && step <= T::c(0.1)) {
        return Err(Error::InvalidParam(format!("step {step} outside (0, 0.1]")));
    }
    validate_instance(dist.atoms(), dist.weights(), alpha)?;

    let one = T::one();
    let k_max = (one / step)
        .round()
        .to_usize()
        .ok_or_else(|| Error::InvalidParam(format!("step {step} too small")))?;
    let grid: Vec<T> = (0..=k_max)
        .map(|k| (T::from_usize(k).unwrap() * step).min(one))
        .collect();
    let slack = alpha + T::budget_tol();

    let atoms = dist.atoms();
    let weights = dist.weights();
    // Per-coordinate tables of weighted losses and budget costs.
    let loss: Vec<Vec<T>> = (0..m)
        .map(|i| grid.iter().map(|&v| weights[i] * ell(atoms[i], v)).collect())
        .collect();
    let cost: Vec<Vec<T>> = (0..m)
        .map(|i| grid.iter().map(|&v| weights[i] * v).collect())
        .collect();

    let mut best_obj = T::infinity();
    let mut best: Vec<usize> = vec![0; m];

    match m {
        1 => {
            for k in 0..=k_max {
                if cost[0][k] > slack {
                    break;
                }
                if loss[0][k] < best_obj {
                    best_obj = loss[0][k];
                    best = vec![k];
                }
            }
        }
        2 => {
            for k0 in 0..=k_max {
                if cost[0][k0] > slack {
                    break;
                }
                for k1 in 0..=k_max {
                    if cost[0][k0] + cost[1][k1] > slack {
                        break;
                    }
                    let obj = loss[0][k0] + loss[1][k1];
                    if obj < best_obj {
                        best_obj = obj;
                        best = vec![k0, k1];
                    }
                }
            }
        }
        _ => {
            for k0 in 0..=k_max {
                if cost[0][k0] > slack {
                    break;
                }
                for k1 in 0..=k_max {
                    let spent = cost[0][k0] + cost[1][k1];
                    if spent > slack {
                        break;
                    }
                    let k2 = largest_feasible(&cost[2], slack - spent, k_max);
                    let obj = loss[0][k0] + loss[1][k1] + loss[2][k2];
                    if obj < best_obj {
                        best_obj = obj;
                        best = vec![k0, k1, k2];
                    }
                }
            }
        }
    }

    let a: Vec<T> = best.iter().map(|&k| grid[k]).collect();
    let budget_used = best.iter().enumerate().map(|(i, &k)| cost[i][k]).sum();
    Ok(Allocation {
        a,
        dual: T::zero(),
        objective: best_obj,
        budget_used,
    })
}

fn largest_feasible<T: Real>(cost: &[T], room: T, k_max: usize) -> usize {
    let mut k = k_max;
    while k > 0 && cost[k] > room {
        k -= 1;
    }
    if cost[k] > room {
        0
    } else {
        k
    }
}

fn validate_instance<T: Real>(atoms: &[T], weights: &[T], alpha: T) -> Result<()> {
    if atoms.is_empty() || atoms.len() != weights.len() {
        return Err(Error::InvalidDistribution(format!(
            "{} atoms but {} weights",
            atoms.len(),
            weights.len()
        )));
    }
    for &t in atoms {
        if !(t >= T::zero() && t <= T::one()) {
            return Err(Error::InvalidDistribution(format!(
                "atom {t} outside [0, 1]"
            )));
        }
    }
    for &w in weights {
        if !w.is_finite() || w < T::zero() {
            return Err(Error::InvalidDistribution(format!("negative weight {w}")));
        }
    }
    if !(alpha >= T::zero() && alpha <= T::one()) {
        return Err(Error::InvalidParam(format!("alpha {alpha} outside [0, 1]")));
    }
    Ok(())
}
