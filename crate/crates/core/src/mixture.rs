//! Finite Bayesian mixtures ξ = Σ_ν w_ν ν and their posteriors.
//!
//! Weights are kept exactly as given: they must be positive and sum to at
//! most 1, and nothing is ever renormalized behind the caller's back.

use crate::env::{EnvRef, Environment, PerceptDist};
use crate::error::{Error, Result};
use crate::history::{Action, Alphabet, History};
use crate::rational::Rational;
use num_traits::{One, Zero};
use std::sync::Arc;

#[derive(Clone)]
pub struct Mixture {
    components: Vec<(Rational, EnvRef)>,
    alphabet: Arc<Alphabet>,
}

impl std::fmt::Debug for Mixture {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Mixture({})", self.name())
    }
}

/// Posterior weights w_ν(h) = w_ν ν(h) / ξ(h), aligned with the mixture's
/// components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Posterior {
    pub prior: Vec<Rational>,
    pub weights: Vec<Rational>,
}

impl Posterior {
    /// w_ν(h) / w_ν for component `i`.
    pub fn ratio(&self, i: usize) -> Rational {
        &self.weights[i] / &self.prior[i]
    }
}

impl Mixture {
    pub fn new(components: Vec<(Rational, EnvRef)>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::param("components", "mixture needs at least one component"))?;
        let alphabet = first.1.alphabet().clone();
        let mut total = Rational::zero();
        for (w, env) in &components {
            if *w <= Rational::zero() {
                return Err(Error::param(
                    "weight",
                    format!("weight {w} of {} must be positive", env.name()),
                ));
            }
            if env.alphabet().as_ref() != alphabet.as_ref() {
                return Err(Error::param(
                    "components",
                    format!("{} uses a different alphabet", env.name()),
                ));
            }
            total += w;
        }
        if total > Rational::one() {
            return Err(Error::param(
                "weight",
                format!("weights sum to {total}, above 1"),
            ));
        }
        Ok(Self {
            components,
            alphabet,
        })
    }

    pub fn components(&self) -> &[(Rational, EnvRef)] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn total_weight(&self) -> Rational {
        self.components.iter().map(|(w, _)| w).sum()
    }

    fn likelihoods(&self, history: &History) -> Vec<Rational> {
        self.components
            .iter()
            .map(|(w, env)| w * env.joint_prob(history))
            .collect()
    }

    pub fn posterior(&self, history: &History) -> Result<Posterior> {
        let weighted = self.likelihoods(history);
        let total: Rational = weighted.iter().sum();
        if total.is_zero() {
            return Err(Error::MeasureZeroHistory(history.to_string()));
        }
        Ok(Posterior {
            prior: self.components.iter().map(|(w, _)| w.clone()).collect(),
            weights: weighted.into_iter().map(|x| x / &total).collect(),
        })
    }

    /// Σ_ν w_ν(h) ν(· | h, a); errors on measure-zero histories.
    pub fn mixture_step(&self, history: &History, action: Action) -> Result<PerceptDist> {
        let post = self.posterior(history)?;
        let mut out = PerceptDist::empty();
        for ((_, env), w) in self.components.iter().zip(&post.weights) {
            if !w.is_zero() {
                out.add_scaled(&env.step(history, action), w);
            }
        }
        Ok(out)
    }
}

impl Environment for Mixture {
    fn name(&self) -> String {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(w, env)| format!("{w}·{}", env.name()))
            .collect();
        format!("mix{{{}}}", parts.join(" + "))
    }

    fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    fn step(&self, history: &History, action: Action) -> PerceptDist {
        self.mixture_step(history, action)
            .unwrap_or_else(|_| PerceptDist::empty())
    }

    fn joint_prob(&self, history: &History) -> Rational {
        self.likelihoods(history).iter().sum()
    }

    fn absorbing_reward(&self, history: &History) -> Option<Rational> {
        let mut reward: Option<Rational> = None;
        for (w, env) in &self.components {
            if (w * env.joint_prob(history)).is_zero() {
                continue;
            }
            let r = env.absorbing_reward(history)?;
            match &reward {
                Some(prev) if *prev != r => return None,
                _ => reward = Some(r),
            }
        }
        reward
    }
}

/// ξ′ = q·ξ + q′·ρ, flattening ξ's components; ρ is appended last and
/// dropped when q′ = 0.
pub fn mix(q: &Rational, xi: &Mixture, q_prime: &Rational, rho: EnvRef) -> Result<Mixture> {
    if *q <= Rational::zero() {
        return Err(Error::param("q", "must be positive"));
    }
    if *q_prime < Rational::zero() {
        return Err(Error::param("q_prime", "must be nonnegative"));
    }
    if q + q_prime > Rational::one() {
        return Err(Error::param("q + q_prime", "must not exceed 1"));
    }
    let mut components: Vec<(Rational, EnvRef)> = xi
        .components
        .iter()
        .map(|(w, env)| (w * q, env.clone()))
        .collect();
    if !q_prime.is_zero() {
        components.push((q_prime.clone(), rho));
    }
    Mixture::new(components)
}
