use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An interval of the extended real line.
///
/// Infinite endpoints are always open.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
    lo_open: bool,
    hi_open: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, lo_open: bool, hi_open: bool) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::InvalidParameter {
                name: "interval",
                value: lo,
                reason: "lower endpoint must be strictly below the upper endpoint",
            });
        }
        Ok(Self {
            lo,
            hi,
            lo_open: lo_open || lo.is_infinite(),
            hi_open: hi_open || hi.is_infinite(),
        })
    }

    /// `(lo, hi)`
    pub fn open(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, true, true)
    }

    /// `[lo, hi]`
    pub fn closed(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, false, false)
    }

    /// `(-inf, inf)`
    pub fn real_line() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            lo_open: true,
            hi_open: true,
        }
    }

    /// `[0, inf)`
    pub fn nonnegative() -> Self {
        Self {
            lo: 0.0,
            hi: f64::INFINITY,
            lo_open: false,
            hi_open: true,
        }
    }

    /// `(0, inf)`
    pub fn positive() -> Self {
        Self {
            lo: 0.0,
            hi: f64::INFINITY,
            lo_open: true,
            hi_open: true,
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn lo_open(&self) -> bool {
        self.lo_open
    }

    pub fn hi_open(&self) -> bool {
        self.hi_open
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_open { x > self.lo } else { x >= self.lo };
        let below = if self.hi_open { x < self.hi } else { x <= self.hi };
        above && below
    }

    pub fn contains_interior(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    /// Membership in the closure, where infinite endpoints count as members.
    pub fn closure_contains(&self, x: f64) -> bool {
        !x.is_nan() && x >= self.lo && x <= self.hi
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_open { '(' } else { '[' },
            self.lo,
            self.hi,
            if self.hi_open { ')' } else { ']' }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_endpoints_are_open() {
        let i = Interval::new(f64::NEG_INFINITY, 1.0, false, false).unwrap();
        assert!(i.lo_open());
        assert!(!i.hi_open());
        assert!(!i.contains(f64::NEG_INFINITY));
        assert!(i.contains(1.0));
    }

    #[test]
    fn rejects_empty() {
        assert!(Interval::closed(1.0, 1.0).is_err());
        assert!(Interval::closed(2.0, 1.0).is_err());
        assert!(Interval::closed(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn membership() {
        let unit = Interval::new(0.0, 1.0, true, false).unwrap();
        assert!(!unit.contains(0.0));
        assert!(unit.contains(1.0));
        assert!(unit.closure_contains(0.0));
        assert!(!unit.contains_interior(1.0));
        assert_eq!(unit.to_string(), "(0, 1]");
        assert!(Interval::positive().closure_contains(f64::INFINITY));
    }
}
