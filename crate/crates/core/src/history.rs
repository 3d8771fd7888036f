//! Actions, percepts, and interaction histories.

use crate::error::{Error, Result};
use crate::rational::Rational;
use num_traits::{One, Zero};
use std::fmt;

/// Index into the declared action alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action(pub u16);

impl Action {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index into the declared percept set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PerceptId(pub u16);

impl PerceptId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Percept {
    pub observation: u32,
    pub reward: Rational,
}

impl Percept {
    pub fn new(observation: u32, reward: Rational) -> Self {
        Self {
            observation,
            reward,
        }
    }
}

impl fmt::Display for Percept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.observation, self.reward)
    }
}

/// The finite action alphabet together with the declared percept set E.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    actions: usize,
    percepts: Vec<Percept>,
}

impl Alphabet {
    pub fn new(actions: usize, percepts: Vec<Percept>) -> Result<Self> {
        if actions < 2 {
            return Err(Error::InvalidAlphabet(format!(
                "need at least 2 actions, got {actions}"
            )));
        }
        if actions > u16::MAX as usize || percepts.len() > u16::MAX as usize {
            return Err(Error::InvalidAlphabet("alphabet too large".into()));
        }
        if percepts.is_empty() {
            return Err(Error::InvalidAlphabet("percept set is empty".into()));
        }
        for (i, p) in percepts.iter().enumerate() {
            if p.reward < Rational::zero() || p.reward > Rational::one() {
                return Err(Error::InvalidAlphabet(format!(
                    "reward {} outside [0, 1]",
                    p.reward
                )));
            }
            if percepts[..i].contains(p) {
                return Err(Error::InvalidAlphabet(format!("duplicate percept {p}")));
            }
        }
        Ok(Self { actions, percepts })
    }

    /// Binary rewards with a single observation: E = {(0,0), (0,1)}.
    pub fn binary(actions: usize) -> Result<Self> {
        Self::new(
            actions,
            vec![
                Percept::new(0, Rational::zero()),
                Percept::new(0, Rational::one()),
            ],
        )
    }

    pub fn num_actions(&self) -> usize {
        self.actions
    }

    pub fn num_percepts(&self) -> usize {
        self.percepts.len()
    }

    pub fn actions(&self) -> impl Iterator<Item = Action> + Clone {
        (0..self.actions as u16).map(Action)
    }

    pub fn percept_ids(&self) -> impl Iterator<Item = PerceptId> + Clone {
        (0..self.percepts.len() as u16).map(PerceptId)
    }

    pub fn percepts(&self) -> &[Percept] {
        &self.percepts
    }

    pub fn percept(&self, id: PerceptId) -> &Percept {
        &self.percepts[id.index()]
    }

    pub fn reward(&self, id: PerceptId) -> &Rational {
        &self.percepts[id.index()].reward
    }

    pub fn contains_action(&self, a: Action) -> bool {
        a.index() < self.actions
    }

    pub fn find(&self, observation: u32, reward: &Rational) -> Option<PerceptId> {
        self.percepts
            .iter()
            .position(|p| p.observation == observation && &p.reward == reward)
            .map(|i| PerceptId(i as u16))
    }

    pub fn require(&self, observation: u32, reward: &Rational) -> Result<PerceptId> {
        self.find(observation, reward)
            .ok_or_else(|| Error::MissingPercept {
                observation,
                reward: Box::new(reward.clone()),
            })
    }

    pub fn check_action(&self, a: Action) -> Result<Action> {
        if self.contains_action(a) {
            Ok(a)
        } else {
            Err(Error::InvalidParameter {
                name: "action",
                reason: format!("{a} is outside an alphabet of {} actions", self.actions),
            })
        }
    }

    /// All histories of exactly `len` cycles, in canonical order.
    pub fn histories_of_len(&self, len: usize) -> Vec<History> {
        let mut layer = vec![History::empty()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(layer.len() * self.actions * self.percepts.len());
            for h in &layer {
                for a in self.actions() {
                    for e in self.percept_ids() {
                        next.push(h.extended(a, e));
                    }
                }
            }
            layer = next;
        }
        layer
    }

    /// All histories with fewer than `len` cycles, shortest first, canonical
    /// order within each length.
    pub fn histories_shorter_than(&self, len: usize) -> Vec<History> {
        (0..len).flat_map(|n| self.histories_of_len(n)).collect()
    }
}

/// One interaction cycle: an action followed by the percept it produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub action: Action,
    pub percept: PerceptId,
}

/// An alternating action/percept record. The derived ordering compares
/// cycle by cycle, action before percept, which is the canonical
/// lexicographic order among histories of equal length.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct History(Vec<Step>);

impl History {
    pub fn empty() -> Self {
        History(Vec::new())
    }

    pub fn from_steps(steps: Vec<Step>) -> Self {
        History(steps)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn prefix(&self, len: usize) -> History {
        History(self.0[..len].to_vec())
    }

    pub fn push(&mut self, action: Action, percept: PerceptId) {
        self.0.push(Step { action, percept });
    }

    pub fn extended(&self, action: Action, percept: PerceptId) -> History {
        let mut steps = Vec::with_capacity(self.0.len() + 1);
        steps.extend_from_slice(&self.0);
        steps.push(Step { action, percept });
        History(steps)
    }

    pub fn is_prefix_of(&self, other: &History) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Parses `"a:e a:e ..."` with action and percept indices; the empty
    /// string (or `"ε"`) is the empty history.
    pub fn parse(s: &str, alphabet: &Alphabet) -> Result<History> {
        let s = s.trim();
        if s.is_empty() || s == "ε" {
            return Ok(History::empty());
        }
        let err = || Error::ParseHistory(s.to_string());
        let mut h = History::empty();
        for tok in s.split_whitespace() {
            let (a, e) = tok.split_once(':').ok_or_else(err)?;
            let a: u16 = a.parse().map_err(|_| err())?;
            let e: u16 = e.parse().map_err(|_| err())?;
            if a as usize >= alphabet.num_actions() || e as usize >= alphabet.num_percepts() {
                return Err(err());
            }
            h.push(Action(a), PerceptId(e));
        }
        Ok(h)
    }
}

impl fmt::Display for History {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}:{}", s.action.0, s.percept.0)?;
        }
        Ok(())
    }
}
