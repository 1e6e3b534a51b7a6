//! The adversarial family of mean-`t` distributions: mixtures of a point
//! mass at an endpoint with a uniform segment reaching that endpoint. These
//! realize the worst case for the coverage functions, so scanning them gives
//! a sharp empirical check that `E[f(Z)] ≥ 1 − a` holds with equality at the
//! minimizers.

use crate::coverage::{coverage_fn, coverage_fn_integral, CoverageFnParams};

/// `p·δ_0 + (1−p)·Unif[0, c]` when `side = 0`, and
/// `p·δ_1 + (1−p)·Unif[c, 1]` when `side = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdversaryMixture {
    pub side: u8,
    pub p: f64,
    pub c: f64,
}

impl AdversaryMixture {
    pub fn mean(&self) -> f64 {
        if self.side == 0 {
            (1.0 - self.p) * self.c / 2.0
        } else {
            self.p + (1.0 - self.p) * (self.c + 1.0) / 2.0
        }
    }

    /// Exact `E[f_{t,a}(Z)]` for `Z` drawn from this mixture.
    pub fn expect_coverage(&self, params: &CoverageFnParams<f64>) -> f64 {
        if self.side == 0 {
            self.p * coverage_fn(params, 0.0)
                + (1.0 - self.p) * uniform_mean(params, 0.0, self.c)
        } else {
            self.p * coverage_fn(params, 1.0)
                + (1.0 - self.p) * uniform_mean(params, self.c, 1.0)
        }
    }
}

fn uniform_mean(params: &CoverageFnParams<f64>, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return coverage_fn(params, lo);
    }
    (coverage_fn_integral(params, hi) - coverage_fn_integral(params, lo)) / (hi - lo)
}

/// Minimum of `E_Q[f_{t,a}(Z)]` over mixtures in the family with mean `t`,
/// scanning the point-mass weight over `grid + 1` equispaced values and
/// solving the uniform endpoint in closed form so every candidate matches
/// the mean exactly.
pub fn adversary_min_expectation(t: f64, a: f64, grid: usize) -> f64 {
    assert!((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&a));
    assert!(grid >= 100, "grid must be at least 100");
    let params = CoverageFnParams::new(t, a);
    let mut best = f64::INFINITY;
    for k in 0..=grid {
        let p = k as f64 / grid as f64;
        if t <= 0.5 {
            let q = candidate(0, p, t);
            if let Some(q) = q {
                best = best.min(q.expect_coverage(&params));
            }
        }
        if t >= 0.5 {
            if let Some(q) = candidate(1, p, t) {
                best = best.min(q.expect_coverage(&params));
            }
        }
    }
    best
}

// The mixture with point-mass weight p on the given side whose mean is
// exactly t, if the uniform endpoint lands in [0, 1].
fn candidate(side: u8, p: f64, t: f64) -> Option<AdversaryMixture> {
    if p >= 1.0 {
        let endpoint = f64::from(side);
        return (t == endpoint).then_some(AdversaryMixture {
            side,
            p: 1.0,
            c: endpoint,
        });
    }
    let c = if side == 0 {
        2.0 * t / (1.0 - p)
    } else {
        (2.0 * t - 1.0 - p) / (1.0 - p)
    };
    // Tolerate one rounding of the closed-form endpoint.
    if !(-1e-12..=1.0 + 1e-12).contains(&c) {
        return None;
    }
    Some(AdversaryMixture {
        side,
        p,
        c: c.clamp(0.0, 1.0),
    })
}
