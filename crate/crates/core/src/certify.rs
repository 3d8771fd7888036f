//! Certified comparisons between truncated values.
//!
//! A truncated value v with bound b stands for the interval [v, v + b]:
//! rewards are nonnegative, so the missing tail can only add value.

use crate::planner::ValueResult;
use crate::rational::Rational;
use num_traits::Zero;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    HoldsExactly,
    HoldsCertified,
    Falsified,
    Uncertifiable,
}

impl Outcome {
    pub fn holds(self) -> bool {
        matches!(self, Outcome::HoldsExactly | Outcome::HoldsCertified)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::HoldsExactly => "holds exactly",
            Outcome::HoldsCertified => "holds with certified bounds",
            Outcome::Falsified => "falsified",
            Outcome::Uncertifiable => "uncertifiable",
        }
    }

    fn severity(self) -> u8 {
        match self {
            Outcome::HoldsExactly => 0,
            Outcome::HoldsCertified => 1,
            Outcome::Uncertifiable => 2,
            Outcome::Falsified => 3,
        }
    }

    /// The worse of two outcomes.
    pub fn and(self, other: Outcome) -> Outcome {
        if other.severity() > self.severity() {
            other
        } else {
            self
        }
    }

    pub fn all(outcomes: impl IntoIterator<Item = Outcome>) -> Outcome {
        outcomes
            .into_iter()
            .fold(Outcome::HoldsExactly, Outcome::and)
    }

    pub fn from_bool(exact_truth: bool) -> Outcome {
        if exact_truth {
            Outcome::HoldsExactly
        } else {
            Outcome::Falsified
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn exact(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn shift(&self, by: &Rational) -> Self {
        Interval {
            lo: &self.lo + by,
            hi: &self.hi + by,
        }
    }
}

impl From<&ValueResult> for Interval {
    fn from(v: &ValueResult) -> Self {
        Interval {
            lo: v.value.clone(),
            hi: &v.value + &v.truncation_bound,
        }
    }
}

impl From<Rational> for Interval {
    fn from(x: Rational) -> Self {
        Interval::exact(x)
    }
}

fn decide(certain: bool, impossible: bool, exact: bool) -> Outcome {
    if certain {
        if exact {
            Outcome::HoldsExactly
        } else {
            Outcome::HoldsCertified
        }
    } else if impossible {
        Outcome::Falsified
    } else {
        Outcome::Uncertifiable
    }
}

/// a < b
pub fn less(a: &Interval, b: &Interval) -> Outcome {
    decide(a.hi < b.lo, a.lo >= b.hi, a.is_exact() && b.is_exact())
}

/// a ≤ b
pub fn at_most(a: &Interval, b: &Interval) -> Outcome {
    decide(a.hi <= b.lo, a.lo > b.hi, a.is_exact() && b.is_exact())
}

/// a > b
pub fn greater(a: &Interval, b: &Interval) -> Outcome {
    less(b, a)
}

/// a ≥ b
pub fn at_least(a: &Interval, b: &Interval) -> Outcome {
    at_most(b, a)
}

/// |a - b| < eps, certified over both intervals.
pub fn within(a: &Interval, b: &Interval, eps: &Rational) -> Outcome {
    let widest = std::cmp::max(&a.hi - &b.lo, &b.hi - &a.lo);
    let narrowest = std::cmp::max(&a.lo - &b.hi, &b.lo - &a.hi);
    let narrowest = std::cmp::max(narrowest, Rational::zero());
    decide(
        widest < *eps,
        narrowest >= *eps,
        a.is_exact() && b.is_exact(),
    )
}
