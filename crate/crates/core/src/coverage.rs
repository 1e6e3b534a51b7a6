//! Closed forms for the minimum-length coverage problem on [0, 1].
//!
//! For a target mean `t` and a non-coverage budget `a`, `ell(t, a)` is the
//! smallest expected interval length any procedure can achieve while
//! containing every mean-`t` random variable on [0, 1] with probability at
//! least `1 − a`. The infimum is attained by a piecewise-linear coverage
//! function `coverage_fn`, and drawing `U ~ Unif[0, 1]` and returning the
//! superlevel set `{s : f(s) ≥ U}` realizes it as a randomized interval,
//! computed in closed form by `sample_interval`.
//!
//! Everything here is a pure total function of its arguments; the case
//! dispatch follows a fixed order so results are bit-reproducible.

use crate::interval::UnitInterval;
use crate::scalar::Real;

/// Parameter pair of a coverage function: target mean `t` and budget `a`,
/// both in the closed unit interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageFnParams<T> {
    t: T,
    a: T,
}

impl<T: Real> CoverageFnParams<T> {
    pub fn new(t: T, a: T) -> Self {
        assert!(
            t >= T::zero() && t <= T::one() && a >= T::zero() && a <= T::one(),
            "coverage parameters (t = {t}, a = {a}) outside the unit square"
        );
        CoverageFnParams { t, a }
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn a(&self) -> T {
        self.a
    }
}

/// Minimum expected interval length for covering a mean-`t` variable when
/// coverage may fail with probability `a`.
///
/// Piecewise in four cases for `t ≤ 1/2` and mirrored through `t ↦ 1 − t`
/// above one half. Total on the unit square; the value lies in [0, 1].
pub fn ell<T: Real>(t: T, a: T) -> T {
    debug_assert!(t >= T::zero() && t <= T::one());
    debug_assert!(a >= T::zero() && a <= T::one());
    let one = T::one();
    let half = T::half();
    let two = T::two();
    let t = if t > half { one - t } else { t };
    if a >= half {
        two * (one - a) * t
    } else if a >= t && a > T::zero() {
        t / (two * a)
    } else if a < t {
        one - a / (two * t)
    } else {
        // a = t = 0
        T::zero()
    }
}

/// One-sided derivative of `ell` in the budget `a` (the two one-sided values
/// agree at every case boundary, so the derivative is continuous).
///
/// Zero for the degenerate means `t ∈ {0, 1}`, nonpositive everywhere else.
pub fn ell_slope_a<T: Real>(t: T, a: T) -> T {
    debug_assert!(t >= T::zero() && t <= T::one());
    debug_assert!(a >= T::zero() && a <= T::one());
    let one = T::one();
    let half = T::half();
    let two = T::two();
    let t = if t > half { one - t } else { t };
    if t == T::zero() {
        T::zero()
    } else if a < t {
        -(two * t).recip()
    } else if a <= half {
        // t/(2a²), factored so the a = t boundary reproduces −1/(2t) exactly.
        -(t / a) / (two * a)
    } else {
        -two * t
    }
}

/// The coverage function f: probability that the randomized interval with
/// parameters `(t, a)` contains the point `s`.
pub fn coverage_fn<T: Real>(params: &CoverageFnParams<T>, s: T) -> T {
    debug_assert!(s >= T::zero() && s <= T::one());
    let one = T::one();
    if params.t > T::half() {
        coverage_lower(one - params.t, params.a, one - s)
    } else {
        coverage_lower(params.t, params.a, s)
    }
}

// f for t ≤ 1/2.
fn coverage_lower<T: Real>(t: T, a: T, s: T) -> T {
    let zero = T::zero();
    let one = T::one();
    let half = T::half();
    let two = T::two();
    if t == zero {
        if s == zero {
            one - a
        } else {
            zero
        }
    } else if t == half {
        one - a
    } else if a >= half {
        two * (one - a) * (one - s / (two * t)).max(zero)
    } else {
        (one - a * s / t).max(zero)
    }
}

/// Exact integral of the coverage function over [0, x].
///
/// Used to take expectations of `coverage_fn` against uniform mixtures
/// without quadrature; `coverage_fn_integral(params, 1)` equals
/// `ell(params.t, params.a)`.
pub fn coverage_fn_integral<T: Real>(params: &CoverageFnParams<T>, x: T) -> T {
    debug_assert!(x >= T::zero() && x <= T::one());
    let one = T::one();
    if params.t > T::half() {
        let t = one - params.t;
        integral_lower(t, params.a, one) - integral_lower(t, params.a, one - x)
    } else {
        integral_lower(params.t, params.a, x)
    }
}

// ∫_0^x f for t ≤ 1/2; f is affine up to its zero crossing, constant zero after.
fn integral_lower<T: Real>(t: T, a: T, x: T) -> T {
    let zero = T::zero();
    let one = T::one();
    let half = T::half();
    let two = T::two();
    let four = two * two;
    if t == zero {
        zero
    } else if t == half {
        (one - a) * x
    } else if a >= half {
        let z = x.min(two * t);
        two * (one - a) * (z - z * z / (four * t))
    } else if a == zero {
        x
    } else {
        let z = x.min((t / a).min(one));
        z - a * z * z / (two * t)
    }
}

/// The superlevel set `{s ∈ [0, 1] : f(s) ≥ u}` of the coverage function, in
/// closed form.
///
/// The comparison is inclusive, so `u = 0` yields all of [0, 1]. For `u` in
/// (0, 1] the set is an interval anchored at 0 when `t < 1/2` (at 1 when
/// `t > 1/2`), all of [0, 1] or empty at `t = 1/2`, and the single point
/// `{0}` (resp. `{1}`) or empty at `t = 0` (resp. `t = 1`). The upper
/// endpoint is capped at 1 after inversion.
pub fn sample_interval<T: Real>(params: &CoverageFnParams<T>, u: T) -> UnitInterval<T> {
    assert!(
        u >= T::zero() && u <= T::one(),
        "superlevel threshold u = {u} outside [0, 1]"
    );
    let one = T::one();
    if params.t > T::half() {
        superlevel_lower(one - params.t, params.a, u).reflected()
    } else {
        superlevel_lower(params.t, params.a, u)
    }
}

// Superlevel set for t ≤ 1/2.
fn superlevel_lower<T: Real>(t: T, a: T, u: T) -> UnitInterval<T> {
    let zero = T::zero();
    let one = T::one();
    let half = T::half();
    let two = T::two();
    if u == zero {
        return UnitInterval::range(zero, one);
    }
    if t == zero {
        if one - a >= u {
            UnitInterval::point(zero)
        } else {
            UnitInterval::empty()
        }
    } else if t == half {
        if one - a >= u {
            UnitInterval::range(zero, one)
        } else {
            UnitInterval::empty()
        }
    } else if a >= half {
        let peak = two * (one - a);
        if peak >= u {
            let hi = (two * t * (one - u / peak)).min(one);
            UnitInterval::range(zero, hi)
        } else {
            UnitInterval::empty()
        }
    } else if a == zero {
        UnitInterval::range(zero, one)
    } else {
        let hi = (t * (one - u) / a).min(one);
        UnitInterval::range(zero, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(t: f64, a: f64) -> CoverageFnParams<f64> {
        CoverageFnParams::new(t, a)
    }

    #[test]
    fn ell_closed_form_values() {
        assert_eq!(ell(0.3, 0.5), 0.3);
        assert_eq!(ell(0.1, 0.25), 0.2);
        assert_eq!(ell(0.4, 0.1), 0.875);
        assert_eq!(ell(0.0, 0.0), 0.0);
        // The mirrored evaluation carries the one-ulp representation error of
        // 1 − 0.7; it equals the correctly rounded value of the real result.
        assert_eq!(ell(0.7, 0.5), 1.0 - 0.7);
        assert!((ell(0.7f64, 0.5) - 0.3).abs() <= f64::EPSILON);
    }

    #[test]
    fn ell_exact_symmetry_on_dyadic_grid() {
        // Dyadic grid points have exactly representable complements, so the
        // mirror is bit-exact there.
        for i in 0..=256u32 {
            let t = f64::from(i) / 256.0;
            for j in 0..=64u32 {
                let a = f64::from(j) / 64.0;
                assert_eq!(ell(t, a), ell(1.0 - t, a), "t = {t}, a = {a}");
            }
        }
    }

    #[test]
    fn ell_agrees_at_case_boundaries() {
        // a = t boundary: t/(2a) vs 1 − a/(2t) both give 1/2.
        assert_eq!(ell(0.25, 0.25), 0.5);
        // a = 1/2 boundary: 2(1−a)t vs t/(2a) both give t.
        assert_eq!(ell(0.3, 0.5), 0.3);
        // t = 1/2: every a < 1/2 sits in the a < t case, value 1 − a.
        assert_eq!(ell(0.5, 0.1), 0.9);
        assert_eq!(ell(0.5, 0.75), 0.25);
    }

    #[test]
    fn slope_matches_central_finite_differences() {
        let fd = |t: f64, a: f64| {
            let h = 1e-6;
            (ell(t, a + h) - ell(t, a - h)) / (2.0 * h)
        };
        for &(t, a) in &[
            (0.1, 0.05),
            (0.1, 0.8),
            (0.37, 0.2),
            (0.37, 0.45),
            (0.63, 0.2),
            (0.5, 0.3),
            (0.5, 0.7),
        ] {
            assert!(
                (ell_slope_a(t, a) - fd(t, a)).abs() < 1e-6,
                "slope mismatch at ({t}, {a}): {} vs fd {}",
                ell_slope_a(t, a),
                fd(t, a)
            );
        }
    }

    #[test]
    fn slope_one_sided_values_agree_at_breakpoints() {
        let eps = 1e-9;
        for &t in &[0.1f64, 0.3, 0.45] {
            // a = t: linear branch meets the smooth branch.
            let left = ell_slope_a(t, t - eps);
            let right = ell_slope_a(t, t + eps);
            assert!((left - right).abs() < 1e-6, "t = {t}: {left} vs {right}");
            // a = 1/2: smooth branch meets the outer linear branch.
            let left = ell_slope_a(t, 0.5 - eps);
            let right = ell_slope_a(t, 0.5 + eps);
            assert!((left - right).abs() < 1e-6, "t = {t}: {left} vs {right}");
        }
    }

    #[test]
    fn slope_frozen_values() {
        assert_eq!(ell_slope_a(0.1, 0.05), -5.0);
        assert_eq!(ell_slope_a(0.1, 0.1), -5.0);
        assert_eq!(ell_slope_a(0.1, 0.8), -0.2);
        assert_eq!(ell_slope_a(0.0, 0.3), 0.0);
        assert_eq!(ell_slope_a(1.0, 0.3), 0.0);
    }

    #[test]
    fn coverage_fn_values() {
        assert_eq!(coverage_fn(&params(0.5, 0.1), 0.37), 0.9);
        assert_eq!(coverage_fn(&params(0.3, 0.6), 0.3), 0.4);
        assert_eq!(coverage_fn(&params(0.3, 0.1), 0.9), 0.7);
        assert!((coverage_fn(&params(0.7, 0.1), 0.1) - 0.7).abs() <= 2.0 * f64::EPSILON);
        assert_eq!(coverage_fn(&params(0.0, 0.1), 0.0), 0.9);
        assert_eq!(coverage_fn(&params(0.0, 0.1), 0.5), 0.0);
    }

    #[test]
    fn coverage_fn_is_clipped_at_zero() {
        assert_eq!(coverage_fn(&params(0.1, 0.8), 0.9), 0.0);
        assert_eq!(coverage_fn(&params(0.1, 0.4), 0.9), 0.0);
    }

    #[test]
    fn sample_interval_values() {
        let half = params(0.5, 0.1);
        assert_eq!(sample_interval(&half, 0.85), UnitInterval::range(0.0, 1.0));
        assert_eq!(sample_interval(&half, 0.95), UnitInterval::empty());

        match sample_interval(&params(0.3, 0.1), 0.95) {
            UnitInterval::Range { lo, hi } => {
                assert_eq!(lo, 0.0);
                assert!((hi - 0.15).abs() < 1e-15);
            }
            other => panic!("expected a range, got {other}"),
        }

        match sample_interval(&params(0.3, 0.6), 0.4) {
            UnitInterval::Range { lo, hi } => {
                assert_eq!(lo, 0.0);
                assert!((hi - 0.3).abs() < 1e-15);
            }
            other => panic!("expected a range, got {other}"),
        }

        assert_eq!(
            sample_interval(&params(0.0, 0.1), 0.5),
            UnitInterval::Point(0.0)
        );
        assert_eq!(
            sample_interval(&params(1.0, 0.1), 0.5),
            UnitInterval::Point(1.0)
        );
        assert_eq!(sample_interval(&params(0.0, 0.1), 0.95), UnitInterval::Empty);
    }

    #[test]
    fn sample_interval_at_u_zero_is_everything() {
        for &(t, a) in &[(0.0, 0.3), (0.25, 0.0), (0.5, 1.0), (1.0, 1.0)] {
            assert_eq!(
                sample_interval(&params(t, a), 0.0),
                UnitInterval::range(0.0, 1.0)
            );
        }
    }

    #[test]
    fn intervals_anchor_at_the_near_endpoint() {
        for j in 1..20 {
            let u = f64::from(j) / 20.0;
            match sample_interval(&params(0.2, 0.3), u) {
                UnitInterval::Range { lo, .. } => assert_eq!(lo, 0.0),
                UnitInterval::Point(p) => assert_eq!(p, 0.0),
                UnitInterval::Empty => {}
            }
            match sample_interval(&params(0.8, 0.3), u) {
                UnitInterval::Range { hi, .. } => assert_eq!(hi, 1.0),
                UnitInterval::Point(p) => assert_eq!(p, 1.0),
                UnitInterval::Empty => {}
            }
        }
    }

    #[test]
    fn integral_matches_full_length() {
        for i in 0..=40 {
            let t = f64::from(i) / 40.0;
            for j in 0..=40 {
                let a = f64::from(j) / 40.0;
                let p = params(t, a);
                assert!(
                    (coverage_fn_integral(&p, 1.0) - ell(t, a)).abs() < 1e-14,
                    "t = {t}, a = {a}"
                );
            }
        }
    }

    #[test]
    fn integral_is_additive_and_monotone() {
        let p = params(0.3, 0.2);
        let mut prev = 0.0;
        for k in 0..=100 {
            let x = f64::from(k) / 100.0;
            let v = coverage_fn_integral(&p, x);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
        let a = coverage_fn_integral(&p, 0.4);
        let b = coverage_fn_integral(&p, 1.0);
        assert!(b >= a);
    }
}
