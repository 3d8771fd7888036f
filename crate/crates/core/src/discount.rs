//! Discount functions γ_t and their tail sums Γ_t = Σ_{i≥t} γ_i.
//!
//! Time steps are 1-based throughout.

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiscountSchedule {
    /// γ_t = γ^t with γ in (0, 1).
    Geometric(Rational),
    /// γ_t = 1 for t ≤ m, 0 afterwards.
    FiniteLifetime(usize),
    /// γ_t = table[t-1], zero beyond the end of the table.
    Table(Vec<Rational>),
}

impl DiscountSchedule {
    pub fn geometric(gamma: Rational) -> Result<Self> {
        if gamma <= Rational::zero() || gamma >= Rational::one() {
            return Err(Error::InvalidSchedule(format!(
                "geometric rate {gamma} must lie strictly between 0 and 1"
            )));
        }
        Ok(DiscountSchedule::Geometric(gamma))
    }

    pub fn finite_lifetime(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidSchedule("lifetime must be positive".into()));
        }
        Ok(DiscountSchedule::FiniteLifetime(m))
    }

    pub fn table(values: Vec<Rational>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| **v < Rational::zero()) {
            return Err(Error::InvalidSchedule(format!("negative discount {v}")));
        }
        Ok(DiscountSchedule::Table(values))
    }

    /// γ_t.
    pub fn gamma(&self, t: usize) -> Rational {
        assert!(t >= 1, "time steps are 1-based");
        match self {
            DiscountSchedule::Geometric(g) => rational::pow(g, t),
            DiscountSchedule::FiniteLifetime(m) => {
                if t <= *m {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            DiscountSchedule::Table(v) => v.get(t - 1).cloned().unwrap_or_else(Rational::zero),
        }
    }

    /// Γ_t, exactly.
    pub fn big_gamma(&self, t: usize) -> Rational {
        assert!(t >= 1, "time steps are 1-based");
        match self {
            DiscountSchedule::Geometric(g) => rational::pow(g, t) / (Rational::one() - g),
            DiscountSchedule::FiniteLifetime(m) => {
                rational::int((*m as i64 + 1 - t as i64).max(0))
            }
            DiscountSchedule::Table(v) => v.iter().skip(t - 1).sum(),
        }
    }

    /// The last step with γ_t > 0, if the schedule has a finite lifetime.
    /// An all-zero table has lifetime 0.
    pub fn lifetime(&self) -> Option<usize> {
        match self {
            DiscountSchedule::Geometric(_) => None,
            DiscountSchedule::FiniteLifetime(m) => Some(*m),
            DiscountSchedule::Table(v) => {
                Some(v.iter().rposition(|x| !x.is_zero()).map_or(0, |i| i + 1))
            }
        }
    }

    /// The least k ≥ 0 with Γ_{k+1}/Γ_1 < eps.
    pub fn effective_horizon(&self, eps: &Rational) -> Result<usize> {
        if *eps <= Rational::zero() {
            return Err(Error::param("eps", "must be positive"));
        }
        let total = self.big_gamma(1);
        if total.is_zero() {
            return Err(Error::ZeroSchedule);
        }
        let threshold = eps * &total;
        if let DiscountSchedule::Geometric(g) = self {
            // Γ_{k+1}/Γ_1 = γ^k
            let mut k = 0;
            let mut power = Rational::one();
            while power >= *eps {
                power *= g;
                k += 1;
            }
            return Ok(k);
        }
        let mut k = 0;
        while self.big_gamma(k + 1) >= threshold {
            k += 1;
        }
        Ok(k)
    }

    /// Γ_{k+1}/Γ_1: how far apart the values of two policies that agree on
    /// their first k actions can be.
    pub fn tail_ratio(&self, k: usize) -> Rational {
        let total = self.big_gamma(1);
        if total.is_zero() {
            return Rational::zero();
        }
        self.big_gamma(k + 1) / total
    }
}

impl fmt::Display for DiscountSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiscountSchedule::Geometric(g) => write!(f, "geometric({g})"),
            DiscountSchedule::FiniteLifetime(m) => write!(f, "finite_lifetime({m})"),
            DiscountSchedule::Table(v) => {
                write!(f, "table([")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "])")
            }
        }
    }
}
