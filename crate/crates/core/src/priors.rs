//! Adversarial mixtures: indifference, dogmatic, emulation and
//! adversarial-gate priors.

use crate::discount::DiscountSchedule;
use crate::env::{DogmaticEnvironment, EnvRef, Environment, GateEnvironment, PerceptDist};
use crate::error::{Error, Result};
use crate::history::{Action, Alphabet, History};
use crate::mixture::{mix, Mixture};
use crate::planner::Planner;
use crate::policy::{on_policy_histories, PolicyRef};
use crate::rational::{self, Rational};
use num_traits::{One, Zero};
use std::sync::Arc;

/// Feeds the base environment the agent's actions shifted by a mask
/// s_{1:m} (addition mod |A|), averaged uniformly over all masks. The
/// first m percepts are then independent of the first m actions.
#[derive(Clone)]
pub struct IndifferenceEnvironment {
    base: EnvRef,
    lifetime: usize,
}

impl IndifferenceEnvironment {
    pub fn lifetime(&self) -> usize {
        self.lifetime
    }

    fn shift(&self, a: Action, s: u16) -> Action {
        let n = self.base.alphabet().num_actions() as u16;
        Action((a.0 + s) % n)
    }

    /// All masks of the given length, as digit vectors.
    fn masks(&self, len: usize) -> Vec<Vec<u16>> {
        let n = self.base.alphabet().num_actions() as u16;
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|m| {
                    (0..n).map(move |d| {
                        let mut m = m.clone();
                        m.push(d);
                        m
                    })
                })
                .collect();
        }
        out
    }

    fn masked(&self, history: &History, mask: &[u16]) -> History {
        let mut h = History::empty();
        for (i, s) in history.steps().iter().enumerate() {
            let a = match mask.get(i) {
                Some(d) => self.shift(s.action, *d),
                None => s.action,
            };
            h.push(a, s.percept);
        }
        h
    }
}

impl Environment for IndifferenceEnvironment {
    fn name(&self) -> String {
        format!("indifference[m={} | {}]", self.lifetime, self.base.name())
    }

    fn alphabet(&self) -> &Arc<Alphabet> {
        self.base.alphabet()
    }

    fn step(&self, history: &History, action: Action) -> PerceptDist {
        let t = history.len() + 1;
        let mut out = PerceptDist::empty();
        let mut norm = Rational::zero();
        for mask in self.masks(t.min(self.lifetime)) {
            let h = self.masked(history, &mask);
            let w = self.base.joint_prob(&h);
            if w.is_zero() {
                continue;
            }
            let a = match mask.get(t - 1) {
                Some(d) => self.shift(action, *d),
                None => action,
            };
            out.add_scaled(&self.base.step(&h, a), &w);
            norm += w;
        }
        if norm.is_zero() {
            return PerceptDist::empty();
        }
        out.scaled(&(Rational::one() / norm))
    }

    fn joint_prob(&self, history: &History) -> Rational {
        let len = history.len().min(self.lifetime);
        let masks = self.masks(len);
        let count = rational::int(masks.len() as i64);
        let total: Rational = masks
            .iter()
            .map(|m| self.base.joint_prob(&self.masked(history, m)))
            .sum();
        total / count
    }
}

/// An environment whose first `m` percepts ignore the actions.
pub fn make_indifference_mixture(xi: EnvRef, m: usize) -> Result<IndifferenceEnvironment> {
    if m == 0 {
        return Err(Error::param("m", "lifetime must be positive"));
    }
    Ok(IndifferenceEnvironment {
        base: xi,
        lifetime: m,
    })
}

/// ξ′ = ½ ν_dogma + (ε/2) ξ, where ν_dogma mimics ξ along π and sends
/// deviators to hell. The dogmatic component is the last one.
pub fn make_dogmatic_mixture(pi: PolicyRef, xi: &Mixture, eps: &Rational) -> Result<Mixture> {
    if *eps <= Rational::zero() {
        return Err(Error::param("eps", "must be positive"));
    }
    if *eps > Rational::one() {
        return Err(Error::param("eps", "must be at most 1 for the weights to stay ≤ 1"));
    }
    let dogma = DogmaticEnvironment::new(Arc::new(xi.clone()), pi)?;
    mix(
        &(eps / rational::int(2)),
        xi,
        &rational::ratio(1, 2),
        Arc::new(dogma),
    )
}

#[derive(Clone, Debug)]
pub struct Emulation {
    pub mixture: Mixture,
    /// Steps on which the ξ′-optimal policy is forced to copy π.
    pub k: usize,
    /// The dogmatic threshold ε′ actually used.
    pub threshold: Rational,
    /// Minimum of V^π_ξ(h) over on-policy decision histories |h| < k.
    pub min_on_policy_value: Rational,
}

/// A dogmatic mixture strong enough that every ξ′-optimal policy copies π
/// for the first k = effective_horizon(eps) steps, so that
/// |V^{π*_{ξ′}}_ν(ε) − V^π_ν(ε)| ≤ Γ_{k+1}/Γ_1 < eps in every ν.
///
/// Values are evaluated with `horizon` steps of look-ahead; truncated values
/// only underestimate, so the threshold stays strictly below the true
/// minimum.
pub fn make_emulation_mixture(
    pi: PolicyRef,
    xi: &Mixture,
    eps: &Rational,
    schedule: &DiscountSchedule,
    horizon: usize,
) -> Result<Emulation> {
    let k = schedule.effective_horizon(eps)?;
    let planner = Planner::new(Arc::new(xi.clone()), schedule.clone());
    let mut min: Option<Rational> = None;
    for h in on_policy_histories(xi, pi.as_ref(), k) {
        if schedule.big_gamma(h.len() + 1).is_zero() {
            continue;
        }
        let v = planner.value(pi.as_ref(), &h, horizon)?.value;
        if v.is_zero() {
            return Err(Error::ThresholdSelection(h.to_string()));
        }
        if min.as_ref().is_none_or(|m| v < *m) {
            min = Some(v);
        }
    }
    let min_on_policy_value = min.unwrap_or_else(Rational::one);
    let threshold = &min_on_policy_value / rational::int(2);
    let mixture = make_dogmatic_mixture(pi, xi, &threshold)?;
    Ok(Emulation {
        mixture,
        k,
        threshold,
        min_on_policy_value,
    })
}

/// ξ′ = (1−ε)·trap + ε·ξ where the trap sends `first_action` to hell and
/// every other first action to heaven.
pub fn make_adversarial_gate_mixture(
    first_action: Action,
    xi: &Mixture,
    eps: &Rational,
) -> Result<Mixture> {
    if *eps <= Rational::zero() || *eps >= Rational::one() {
        return Err(Error::param("eps", "must lie strictly between 0 and 1"));
    }
    let trap = GateEnvironment::trap(xi.alphabet().clone(), first_action)?;
    mix(eps, xi, &(Rational::one() - eps), Arc::new(trap))
}
