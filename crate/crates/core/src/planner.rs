//! Exact expectimax over the discounted value recursion
//!
//! ```text
//! V^π_ν(æ_{<t} a_t) = 1/Γ_t · Σ_{e_t} (γ_t r_t + Γ_{t+1} V^π_ν(æ_{1:t})) ν(e_t | æ_{<t} a_t)
//! ```
//!
//! Internally the planner works with the unnormalized W = Γ_t · V, which
//! turns the recursion into W(h) = Σ_e p(e) (γ_t r_e + W(hae)) and avoids a
//! division per node. The recursion is cut after a caller-chosen number of
//! steps with the tail set to 0; every result reports the resulting bound
//! Γ_{t+k}/Γ_t on the missing value. Tails the environment declares
//! absorbing are closed exactly, and under a finite lifetime the horizon is
//! clamped to the remaining lifetime, so such values are exact.

use crate::discount::DiscountSchedule;
use crate::env::EnvRef;
use crate::error::{Error, Result};
use crate::history::{Action, Alphabet, History};
use crate::policy::{Policy, PolicyKind};
use crate::rational::Rational;
use dashmap::DashMap;
use num_traits::Zero;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backup {
    /// Reward maximizer.
    Max,
    /// Reward minimizer.
    Min,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TieBreak {
    LowestIndex,
    HighestIndex,
    /// Earliest action in the list wins; must order every action.
    FixedPreference(Vec<Action>),
}

impl TieBreak {
    pub fn validate(&self, alphabet: &Alphabet) -> Result<()> {
        if let TieBreak::FixedPreference(order) = self {
            let mut sorted = order.clone();
            sorted.sort();
            sorted.dedup();
            let all: Vec<Action> = alphabet.actions().collect();
            if sorted != all || order.len() != all.len() {
                return Err(Error::param(
                    "tie_break",
                    "fixed preference must list every action exactly once",
                ));
            }
        }
        Ok(())
    }

    pub fn choose(&self, ties: &[Action]) -> Action {
        assert!(!ties.is_empty(), "tie set is never empty");
        match self {
            TieBreak::LowestIndex => *ties.iter().min().unwrap(),
            TieBreak::HighestIndex => *ties.iter().max().unwrap(),
            TieBreak::FixedPreference(order) => order
                .iter()
                .find(|a| ties.contains(a))
                .copied()
                .unwrap_or_else(|| *ties.iter().min().unwrap()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueResult {
    pub value: Rational,
    /// Steps actually expanded after clamping to the lifetime.
    pub horizon_used: usize,
    /// The true value lies in [value, value + truncation_bound].
    pub truncation_bound: Rational,
}

impl ValueResult {
    pub fn exact(value: Rational) -> Self {
        Self {
            value,
            horizon_used: 0,
            truncation_bound: Rational::zero(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.truncation_bound.is_zero()
    }

    pub fn upper(&self) -> Rational {
        &self.value + &self.truncation_bound
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionChoice {
    pub action: Action,
    /// Every action whose value equals the best one exactly.
    pub tie_set: Vec<Action>,
    /// Distance from the best value to the best non-tied value, 0 if all tie.
    pub gap: Rational,
    pub action_values: Vec<ValueResult>,
}

#[derive(Clone, Debug)]
struct Partial {
    total: Rational,
    truncated: bool,
}

impl Partial {
    fn exact(total: Rational) -> Self {
        Partial {
            total,
            truncated: false,
        }
    }
}

pub struct Planner {
    env: EnvRef,
    schedule: DiscountSchedule,
    memo: DashMap<(History, usize, Backup), Partial>,
}

impl Planner {
    pub fn new(env: EnvRef, schedule: DiscountSchedule) -> Self {
        Self {
            env,
            schedule,
            memo: DashMap::new(),
        }
    }

    pub fn env(&self) -> &EnvRef {
        &self.env
    }

    pub fn schedule(&self) -> &DiscountSchedule {
        &self.schedule
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        self.env.alphabet()
    }

    pub fn cache_len(&self) -> usize {
        self.memo.len()
    }

    fn remaining(&self, len: usize, horizon: usize) -> usize {
        match self.schedule.lifetime() {
            Some(m) => horizon.min(m.saturating_sub(len)),
            None => horizon,
        }
    }

    fn check_root(&self, h: &History) -> Result<()> {
        if self.env.joint_prob(h).is_zero() {
            Err(Error::MeasureZeroHistory(h.to_string()))
        } else {
            Ok(())
        }
    }

    fn normalize(&self, h: &History, rem: usize, p: &Partial) -> ValueResult {
        let t = h.len() + 1;
        let big = self.schedule.big_gamma(t);
        if big.is_zero() {
            return ValueResult {
                value: Rational::zero(),
                horizon_used: rem,
                truncation_bound: Rational::zero(),
            };
        }
        let truncation_bound = if p.truncated {
            self.schedule.big_gamma(t + rem) / &big
        } else {
            Rational::zero()
        };
        ValueResult {
            value: &p.total / &big,
            horizon_used: rem,
            truncation_bound,
        }
    }

    /// Leaf handling shared by all recursions; `None` means "expand".
    fn leaf(&self, h: &History, rem: usize) -> Option<Partial> {
        let big = self.schedule.big_gamma(h.len() + 1);
        if big.is_zero() {
            return Some(Partial::exact(Rational::zero()));
        }
        if let Some(r) = self.env.absorbing_reward(h) {
            return Some(Partial::exact(r * big));
        }
        if rem == 0 {
            return Some(Partial {
                total: Rational::zero(),
                truncated: true,
            });
        }
        None
    }

    fn expand(
        &self,
        h: &History,
        a: Action,
        rem: usize,
        mut child: impl FnMut(&History, usize) -> Partial,
    ) -> Partial {
        let gamma = self.schedule.gamma(h.len() + 1);
        let alphabet = self.env.alphabet();
        let mut total = Rational::zero();
        let mut truncated = false;
        for (e, p) in self.env.step(h, a).iter() {
            if p.is_zero() {
                continue;
            }
            let next = h.extended(a, *e);
            let c = child(&next, rem - 1);
            total += p * (&gamma * alphabet.reward(*e) + c.total);
            truncated |= c.truncated;
        }
        Partial { total, truncated }
    }

    fn policy_partial(&self, pi: &dyn Policy, h: &History, rem: usize) -> Partial {
        if let Some(p) = self.leaf(h, rem) {
            return p;
        }
        let a = pi.act(h);
        self.expand(h, a, rem, |next, r| self.policy_partial(pi, next, r))
    }

    fn backed_partial(&self, h: &History, rem: usize, backup: Backup) -> Partial {
        if let Some(p) = self.leaf(h, rem) {
            return p;
        }
        let key = (h.clone(), rem, backup);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut best: Option<Rational> = None;
        let mut truncated = false;
        for a in self.env.alphabet().actions() {
            let q = self.expand(h, a, rem, |next, r| self.backed_partial(next, r, backup));
            truncated |= q.truncated;
            best = Some(match best {
                None => q.total,
                Some(b) => match backup {
                    Backup::Max => std::cmp::max(b, q.total),
                    Backup::Min => std::cmp::min(b, q.total),
                },
            });
        }
        let out = Partial {
            total: best.expect("at least two actions"),
            truncated,
        };
        self.memo.insert(key, out.clone());
        out
    }

    /// V^π(h), expanding at most `horizon` further steps.
    pub fn value(&self, pi: &dyn Policy, h: &History, horizon: usize) -> Result<ValueResult> {
        self.check_root(h)?;
        let rem = self.remaining(h.len(), horizon);
        let p = self.policy_partial(pi, h, rem);
        Ok(self.normalize(h, rem, &p))
    }

    /// V^π(ha): take `a` now, follow π afterwards.
    pub fn action_value(
        &self,
        pi: &dyn Policy,
        h: &History,
        a: Action,
        horizon: usize,
    ) -> Result<ValueResult> {
        self.check_root(h)?;
        let rem = self.remaining(h.len(), horizon);
        let p = match self.leaf_ignoring_absorb(h, rem) {
            Some(p) => p,
            None => self.expand(h, a, rem, |next, r| self.policy_partial(pi, next, r)),
        };
        Ok(self.normalize(h, rem, &p))
    }

    /// Like `leaf` but always expands absorbing nodes: the action-level
    /// recursion must still see the current action's percept.
    fn leaf_ignoring_absorb(&self, h: &History, rem: usize) -> Option<Partial> {
        let big = self.schedule.big_gamma(h.len() + 1);
        if big.is_zero() {
            return Some(Partial::exact(Rational::zero()));
        }
        if rem == 0 {
            return Some(Partial {
                total: Rational::zero(),
                truncated: true,
            });
        }
        None
    }

    pub fn backed_value(&self, h: &History, horizon: usize, backup: Backup) -> Result<ValueResult> {
        self.check_root(h)?;
        let rem = self.remaining(h.len(), horizon);
        let p = self.backed_partial(h, rem, backup);
        Ok(self.normalize(h, rem, &p))
    }

    /// V*(h) = sup_π V^π(h) at the truncated horizon.
    pub fn optimal_value(&self, h: &History, horizon: usize) -> Result<ValueResult> {
        self.backed_value(h, horizon, Backup::Max)
    }

    /// inf_π V^π(h) at the truncated horizon.
    pub fn pessimal_value(&self, h: &History, horizon: usize) -> Result<ValueResult> {
        self.backed_value(h, horizon, Backup::Min)
    }

    /// Backed-up value of each first action at `h`.
    pub fn action_values(
        &self,
        h: &History,
        horizon: usize,
        backup: Backup,
    ) -> Result<Vec<ValueResult>> {
        self.check_root(h)?;
        let rem = self.remaining(h.len(), horizon);
        Ok(self
            .env
            .alphabet()
            .actions()
            .map(|a| {
                let p = match self.leaf_ignoring_absorb(h, rem) {
                    Some(p) => p,
                    None => self.expand(h, a, rem, |next, r| self.backed_partial(next, r, backup)),
                };
                self.normalize(h, rem, &p)
            })
            .collect())
    }

    pub fn choose(
        &self,
        h: &History,
        horizon: usize,
        tie_break: &TieBreak,
        backup: Backup,
    ) -> Result<ActionChoice> {
        let values = self.action_values(h, horizon, backup)?;
        let better = |x: &Rational, y: &Rational| match backup {
            Backup::Max => x > y,
            Backup::Min => x < y,
        };
        let mut best = values[0].value.clone();
        for v in &values[1..] {
            if better(&v.value, &best) {
                best = v.value.clone();
            }
        }
        let actions: Vec<Action> = self.env.alphabet().actions().collect();
        let tie_set: Vec<Action> = actions
            .iter()
            .zip(&values)
            .filter(|(_, v)| v.value == best)
            .map(|(a, _)| *a)
            .collect();
        let runner_up = values
            .iter()
            .filter(|v| v.value != best)
            .map(|v| v.value.clone())
            .reduce(|x, y| if better(&x, &y) { x } else { y });
        let gap = match runner_up {
            Some(r) => match backup {
                Backup::Max => &best - r,
                Backup::Min => r - &best,
            },
            None => Rational::zero(),
        };
        Ok(ActionChoice {
            action: tie_break.choose(&tie_set),
            tie_set,
            gap,
            action_values: values,
        })
    }

    pub fn optimal_action(
        &self,
        h: &History,
        horizon: usize,
        tie_break: &TieBreak,
    ) -> Result<ActionChoice> {
        self.choose(h, horizon, tie_break, Backup::Max)
    }

    pub fn pessimal_action(
        &self,
        h: &History,
        horizon: usize,
        tie_break: &TieBreak,
    ) -> Result<ActionChoice> {
        self.choose(h, horizon, tie_break, Backup::Min)
    }
}

/// A policy that plans at every history it is asked about, with a memo of
/// its decisions. At measure-zero histories (where values are undefined)
/// it falls back to the tie-break's preferred action.
pub struct PlannedPolicy {
    planner: Arc<Planner>,
    horizon: usize,
    tie_break: TieBreak,
    backup: Backup,
    decisions: DashMap<History, Action>,
}

impl PlannedPolicy {
    pub fn planner(&self) -> &Arc<Planner> {
        &self.planner
    }

    pub fn backup(&self) -> Backup {
        self.backup
    }
}

impl Policy for PlannedPolicy {
    fn act(&self, history: &History) -> Action {
        if let Some(a) = self.decisions.get(history) {
            return *a;
        }
        let a = match self
            .planner
            .choose(history, self.horizon, &self.tie_break, self.backup)
        {
            Ok(choice) => choice.action,
            Err(_) => {
                let all: Vec<Action> = self.planner.alphabet().actions().collect();
                self.tie_break.choose(&all)
            }
        };
        self.decisions.insert(history.clone(), a);
        a
    }

    fn kind(&self) -> PolicyKind {
        PolicyKind::DerivedOptimal
    }

    fn name(&self) -> String {
        let which = match self.backup {
            Backup::Max => "optimal",
            Backup::Min => "pessimal",
        };
        format!("{which}[{}]", self.planner.env.name())
    }
}

fn planned(
    planner: &Arc<Planner>,
    horizon: usize,
    tie_break: TieBreak,
    backup: Backup,
) -> Result<PlannedPolicy> {
    tie_break.validate(planner.alphabet())?;
    planner.check_root(&History::empty())?;
    Ok(PlannedPolicy {
        planner: planner.clone(),
        horizon,
        tie_break,
        backup,
        decisions: DashMap::new(),
    })
}

/// π*_ν: the expectimax maximizer with an explicit tie-break.
pub fn optimal_policy(
    planner: &Arc<Planner>,
    horizon: usize,
    tie_break: TieBreak,
) -> Result<PlannedPolicy> {
    planned(planner, horizon, tie_break, Backup::Max)
}

/// The expected-reward minimizer.
pub fn pessimal_policy(
    planner: &Arc<Planner>,
    horizon: usize,
    tie_break: TieBreak,
) -> Result<PlannedPolicy> {
    planned(planner, horizon, tie_break, Backup::Min)
}
