use std::fmt;

use crate::scalar::Real;

/// A closed subinterval of [0, 1]: empty, a single point, or a range.
///
/// `range` canonicalizes a zero-length range to a point, so `length` is the
/// plain Lebesgue measure in every case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnitInterval<T> {
    Empty,
    Point(T),
    Range { lo: T, hi: T },
}

impl<T: Real> UnitInterval<T> {
    pub fn empty() -> Self {
        UnitInterval::Empty
    }

    pub fn point(s: T) -> Self {
        assert!(
            s >= T::zero() && s <= T::one(),
            "point {s} outside the unit interval"
        );
        UnitInterval::Point(s)
    }

    pub fn range(lo: T, hi: T) -> Self {
        assert!(
            T::zero() <= lo && lo <= hi && hi <= T::one(),
            "invalid range [{lo}, {hi}]"
        );
        if lo == hi {
            UnitInterval::Point(lo)
        } else {
            UnitInterval::Range { lo, hi }
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, UnitInterval::Empty)
    }

    pub fn length(&self) -> T {
        match *self {
            UnitInterval::Empty | UnitInterval::Point(_) => T::zero(),
            UnitInterval::Range { lo, hi } => hi - lo,
        }
    }

    pub fn contains(&self, s: T) -> bool {
        match *self {
            UnitInterval::Empty => false,
            UnitInterval::Point(p) => s == p,
            UnitInterval::Range { lo, hi } => lo <= s && s <= hi,
        }
    }

    /// The image under s ↦ 1 − s.
    pub fn reflected(self) -> Self {
        let one = T::one();
        match self {
            UnitInterval::Empty => UnitInterval::Empty,
            UnitInterval::Point(p) => UnitInterval::Point(one - p),
            UnitInterval::Range { lo, hi } => UnitInterval::Range {
                lo: one - hi,
                hi: one - lo,
            },
        }
    }
}

impl<T: Real> fmt::Display for UnitInterval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitInterval::Empty => write!(f, "empty"),
            UnitInterval::Point(s) => write!(f, "point {s}"),
            UnitInterval::Range { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}
