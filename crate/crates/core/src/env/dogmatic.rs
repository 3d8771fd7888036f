use super::{EnvRef, Environment, PerceptDist};
use crate::error::Result;
use crate::history::{Action, Alphabet, History, PerceptId};
use crate::policy::{first_deviation, PolicyRef};
use crate::rational::Rational;
use num_traits::Zero;
use std::sync::Arc;

/// Mimics `base` while the agent follows `policy`; after the first
/// deviation it emits (0, 0) with probability 1 forever.
///
/// The frozen branch carries the full mass ξ(e_{<k} ∥ a_{<k}) of the
/// history up to the deviation, so there is no deficit.
#[derive(Clone)]
pub struct DogmaticEnvironment {
    base: EnvRef,
    policy: PolicyRef,
    frozen: PerceptId,
}

impl DogmaticEnvironment {
    pub fn new(base: EnvRef, policy: PolicyRef) -> Result<Self> {
        let frozen = base.alphabet().require(0, &Rational::zero())?;
        Ok(Self {
            base,
            policy,
            frozen,
        })
    }

    pub fn policy(&self) -> &PolicyRef {
        &self.policy
    }

    pub fn base(&self) -> &EnvRef {
        &self.base
    }
}

impl Environment for DogmaticEnvironment {
    fn name(&self) -> String {
        format!("dogmatic[{} | {}]", self.policy.name(), self.base.name())
    }

    fn alphabet(&self) -> &Arc<Alphabet> {
        self.base.alphabet()
    }

    fn step(&self, history: &History, action: Action) -> PerceptDist {
        if first_deviation(history, self.policy.as_ref()).is_some()
            || self.policy.act(history) != action
        {
            PerceptDist::point(self.frozen)
        } else {
            self.base.step(history, action)
        }
    }

    fn joint_prob(&self, history: &History) -> Rational {
        match first_deviation(history, self.policy.as_ref()) {
            None => self.base.joint_prob(history),
            Some(k) => {
                if history.steps()[k..].iter().all(|s| s.percept == self.frozen) {
                    self.base.joint_prob(&history.prefix(k))
                } else {
                    Rational::zero()
                }
            }
        }
    }

    fn absorbing_reward(&self, history: &History) -> Option<Rational> {
        first_deviation(history, self.policy.as_ref())
            .map(|_| self.base.alphabet().reward(self.frozen).clone())
    }
}
