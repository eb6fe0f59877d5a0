//! Open intervals of the real line, possibly unbounded on either side.
//!
//! These describe the `x`-extent of a strip `I x R`. Endpoints are exact
//! rationals; `None` stands for an infinite endpoint. Intervals are
//! always open.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::rational::{rat_int, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntervalError {
    #[error("empty interval: lower bound {0} is not below upper bound {1}")]
    Empty(Rat, Rat),
}

/// An open interval `(lower, upper)`; `None` endpoints are infinite.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lower: Option<Rat>,
    upper: Option<Rat>,
}

impl Interval {
    pub fn new(lower: Option<Rat>, upper: Option<Rat>) -> Result<Self, IntervalError> {
        if let (Some(a), Some(b)) = (&lower, &upper) {
            if a >= b {
                return Err(IntervalError::Empty(a.clone(), b.clone()));
            }
        }
        Ok(Interval { lower, upper })
    }

    /// The whole real line.
    pub fn all() -> Self {
        Interval {
            lower: None,
            upper: None,
        }
    }

    pub fn bounded(lower: Rat, upper: Rat) -> Result<Self, IntervalError> {
        Interval::new(Some(lower), Some(upper))
    }

    /// `(lower, +inf)`.
    pub fn above(lower: Rat) -> Self {
        Interval {
            lower: Some(lower),
            upper: None,
        }
    }

    /// `(-inf, upper)`.
    pub fn below(upper: Rat) -> Self {
        Interval {
            lower: None,
            upper: Some(upper),
        }
    }

    pub fn lower(&self) -> Option<&Rat> {
        self.lower.as_ref()
    }

    pub fn upper(&self) -> Option<&Rat> {
        self.upper.as_ref()
    }

    pub fn is_all(&self) -> bool {
        self.lower.is_none() && self.upper.is_none()
    }

    /// Strict membership (the interval is open).
    pub fn contains(&self, x: &Rat) -> bool {
        self.lower.as_ref().map_or(true, |a| a < x) && self.upper.as_ref().map_or(true, |b| x < b)
    }

    /// Whether `other` is contained in `self`.
    pub fn contains_interval(&self, other: &Interval) -> bool {
        let lower_ok = match (&self.lower, &other.lower) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(c)) => a <= c,
        };
        let upper_ok = match (&self.upper, &other.upper) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(b), Some(d)) => d <= b,
        };
        lower_ok && upper_ok
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lower = match (&self.lower, &other.lower) {
            (None, x) => x.clone(),
            (x, None) => x.clone(),
            (Some(a), Some(c)) => Some(a.max(c).clone()),
        };
        let upper = match (&self.upper, &other.upper) {
            (None, x) => x.clone(),
            (x, None) => x.clone(),
            (Some(b), Some(d)) => Some(b.min(d).clone()),
        };
        Interval::new(lower, upper).ok()
    }

    /// Some rational point inside the interval.
    pub fn interior_point(&self) -> Rat {
        match (&self.lower, &self.upper) {
            (None, None) => Rat::zero(),
            (Some(a), None) => a + rat_int(1),
            (None, Some(b)) => b - rat_int(1),
            (Some(a), Some(b)) => (a + b) / rat_int(2),
        }
    }

    /// `n` distinct rational points inside the interval, spread out over
    /// a bounded window when the interval is unbounded.
    pub fn interior_grid(&self, n: usize) -> Vec<Rat> {
        if n == 0 {
            return Vec::new();
        }
        let (a, b) = match (&self.lower, &self.upper) {
            (Some(a), Some(b)) => (a.clone(), b.clone()),
            (Some(a), None) => (a.clone(), a + rat_int(n as i64)),
            (None, Some(b)) => (b - rat_int(n as i64), b.clone()),
            (None, None) => (rat_int(-(n as i64)), rat_int(n as i64)),
        };
        let width = &b - &a;
        (1..=n)
            .map(|k| &a + &width * rat_int(k as i64) / rat_int(n as i64 + 1))
            .collect()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self
            .lower
            .as_ref()
            .map_or("-inf".to_string(), |a| a.to_string());
        let hi = self
            .upper
            .as_ref()
            .map_or("inf".to_string(), |b| b.to_string());
        write!(f, "({lo}, {hi})")
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Interval{self}")
    }
}
