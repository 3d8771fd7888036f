//! Environments as chronological conditional semimeasures.
//!
//! An environment is given by its one-step conditionals
//! ν(e_t | æ_{<t} a_t); joint probabilities are their products along a
//! history. `step` only ever sees the past and the current action, so
//! chronologicity holds by construction.

mod buddy;
mod dogmatic;
mod zoo;

pub use buddy::{BuddyEnvironment, BuddyState};
pub use dogmatic::DogmaticEnvironment;
pub use zoo::{
    BernoulliBandit, ConstantEnvironment, GateEnvironment, SeededEnvironment, SequencePrediction,
};

use crate::history::{Action, Alphabet, History, PerceptId};
use crate::rational::Rational;
use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

/// Finite-support distribution over percepts. Entries are sorted by percept
/// and never zero; the total may fall short of 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PerceptDist(Vec<(PerceptId, Rational)>);

impl PerceptDist {
    pub fn empty() -> Self {
        PerceptDist(Vec::new())
    }

    pub fn point(e: PerceptId) -> Self {
        PerceptDist(vec![(e, Rational::one())])
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (PerceptId, Rational)>) -> Self {
        let mut d = PerceptDist::empty();
        for (e, p) in entries {
            d.add(e, &p);
        }
        d
    }

    /// Adds `p` to the mass of `e`.
    pub fn add(&mut self, e: PerceptId, p: &Rational) {
        if p.is_zero() {
            return;
        }
        match self.0.binary_search_by_key(&e, |(id, _)| *id) {
            Ok(i) => {
                self.0[i].1 += p;
                if self.0[i].1.is_zero() {
                    self.0.remove(i);
                }
            }
            Err(i) => self.0.insert(i, (e, p.clone())),
        }
    }

    /// Adds `weight · other` into `self`.
    pub fn add_scaled(&mut self, other: &PerceptDist, weight: &Rational) {
        if weight.is_zero() {
            return;
        }
        for (e, p) in &other.0 {
            self.add(*e, &(p * weight));
        }
    }

    pub fn scaled(&self, factor: &Rational) -> PerceptDist {
        PerceptDist::from_entries(self.0.iter().map(|(e, p)| (*e, p * factor)))
    }

    pub fn prob(&self, e: PerceptId) -> Rational {
        match self.0.binary_search_by_key(&e, |(id, _)| *id) {
            Ok(i) => self.0[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PerceptId, &Rational)> {
        self.0.iter().map(|(e, p)| (e, p))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mass(&self) -> Rational {
        self.0.iter().map(|(_, p)| p).sum()
    }

    /// All entries nonnegative and total at most 1.
    pub fn is_semimeasure(&self) -> bool {
        self.0.iter().all(|(_, p)| *p >= Rational::zero()) && self.mass() <= Rational::one()
    }
}

pub trait Environment: Send + Sync {
    fn name(&self) -> String;

    fn alphabet(&self) -> &Arc<Alphabet>;

    /// ν(· | history, action). Must be a pure function of its arguments.
    fn step(&self, history: &History, action: Action) -> PerceptDist;

    /// ν(e_{1:t} ∥ a_{1:t}) for `history` = æ_{1:t}.
    fn joint_prob(&self, history: &History) -> Rational {
        product_of_steps(self, history)
    }

    /// `Some(r)` when, from `history` on and whatever the actions, every
    /// percept is deterministic with reward `r`. Lets the planner evaluate
    /// heaven/hell-like tails exactly instead of truncating them.
    fn absorbing_reward(&self, _history: &History) -> Option<Rational> {
        None
    }
}

pub type EnvRef = Arc<dyn Environment>;

impl fmt::Debug for dyn Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Environment({})", self.name())
    }
}

/// Joint probability as the product of one-step conditionals.
pub fn product_of_steps<E: Environment + ?Sized>(env: &E, history: &History) -> Rational {
    let mut p = Rational::one();
    let mut prefix = History::empty();
    for s in history.steps() {
        p *= env.step(&prefix, s.action).prob(s.percept);
        if p.is_zero() {
            break;
        }
        prefix.push(s.action, s.percept);
    }
    p
}
