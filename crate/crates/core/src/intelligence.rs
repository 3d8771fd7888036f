//! Legg-Hutter intelligence Υ_ξ(π) = V^π_ξ(ε) and the experiments showing
//! how much it depends on the choice of mixture.

use crate::certify::{self, Interval, Outcome};
use crate::discount::DiscountSchedule;
use crate::env::{EnvRef, Environment, GateEnvironment, PerceptDist};
use crate::error::{Error, Result};
use crate::history::{Action, Alphabet, History, PerceptId};
use crate::mixture::{mix, Mixture};
use crate::planner::{optimal_policy, pessimal_policy, Backup, Planner, TieBreak, ValueResult};
use crate::policy::{Policy, PolicyRef, TabularPolicy};
use crate::priors::{make_adversarial_gate_mixture, make_emulation_mixture};
use crate::rational::{self, Rational};
use num_traits::{One, Zero};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntelligenceReport {
    pub upsilon: ValueResult,
    pub lower: ValueResult,
    pub upper: ValueResult,
}

impl IntelligenceReport {
    /// 0 < Υ̲ ≤ Υ(π) ≤ Ῡ < 1, certified.
    pub fn bounds_outcome(&self) -> Outcome {
        let zero = Interval::exact(Rational::zero());
        let one = Interval::exact(Rational::one());
        let lo = Interval::from(&self.lower);
        let hi = Interval::from(&self.upper);
        Outcome::all([
            certify::less(&zero, &lo),
            // the backed values dominate the policy value at equal horizons
            // even before truncation, so compare the truncated values
            Outcome::from_bool(self.lower.value <= self.upsilon.value),
            Outcome::from_bool(self.upsilon.value <= self.upper.value),
            certify::less(&hi, &one),
        ])
    }
}

pub fn upsilon(planner: &Planner, pi: &dyn Policy, horizon: usize) -> Result<ValueResult> {
    planner.value(pi, &History::empty(), horizon)
}

/// (Υ̲_ξ, Ῡ_ξ) via min- and max-backups at the empty history.
pub fn upsilon_bounds(planner: &Planner, horizon: usize) -> Result<(ValueResult, ValueResult)> {
    Ok((
        planner.pessimal_value(&History::empty(), horizon)?,
        planner.optimal_value(&History::empty(), horizon)?,
    ))
}

pub fn intelligence_report(
    planner: &Planner,
    pi: &dyn Policy,
    horizon: usize,
) -> Result<IntelligenceReport> {
    let (lower, upper) = upsilon_bounds(planner, horizon)?;
    Ok(IntelligenceReport {
        upsilon: upsilon(planner, pi, horizon)?,
        lower,
        upper,
    })
}

/// Lookup table of `pi` on all histories with |h| ≤ k, `default` beyond.
pub fn truncate_policy(pi: &dyn Policy, k: usize, default: Action, alphabet: &Alphabet) -> TabularPolicy {
    TabularPolicy::tabulate(
        format!("truncate({}, {k})", pi.name()),
        pi,
        alphabet,
        k + 1,
        default,
    )
}

/// Swaps every reward r for 1 − r. The percept set must be closed under
/// the swap.
pub struct RewardInversion {
    inner: EnvRef,
    swap: Vec<PerceptId>,
}

impl RewardInversion {
    pub fn new(inner: EnvRef) -> Result<Self> {
        let alphabet = inner.alphabet().clone();
        let swap = alphabet
            .percepts()
            .iter()
            .map(|p| alphabet.require(p.observation, &(Rational::one() - &p.reward)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { inner, swap })
    }

    fn unswap(&self, h: &History) -> History {
        let mut out = History::empty();
        for s in h.steps() {
            out.push(s.action, self.swap[s.percept.index()]);
        }
        out
    }
}

impl Environment for RewardInversion {
    fn name(&self) -> String {
        format!("inverted[{}]", self.inner.name())
    }

    fn alphabet(&self) -> &Arc<Alphabet> {
        self.inner.alphabet()
    }

    fn step(&self, history: &History, action: Action) -> PerceptDist {
        let d = self.inner.step(&self.unswap(history), action);
        PerceptDist::from_entries(d.iter().map(|(e, p)| (self.swap[e.index()], p.clone())))
    }

    fn absorbing_reward(&self, history: &History) -> Option<Rational> {
        self.inner
            .absorbing_reward(&self.unswap(history))
            .map(|r| Rational::one() - r)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstActionRange {
    pub action: Action,
    pub leads_to_heaven: bool,
    /// inf over policies starting with `action`.
    pub lowest: ValueResult,
    /// sup over policies starting with `action`.
    pub highest: ValueResult,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub lucky: Action,
    pub gate_weight: Rational,
    pub class_weight: Rational,
    pub ranges: Vec<FirstActionRange>,
    /// False when the gate weight does not exceed the class weight.
    pub gap_exists: bool,
    /// [class_weight, gate_weight] contains no Υ value.
    pub empty_interval: Outcome,
}

/// ξ′ = w_gate·gate(lucky) + w_class·ξ. Every policy's score is pinned
/// down by its first action: the exact inf/sup over policies sharing a
/// first action come from min/max backups, so the report covers all
/// policies, not a sample.
pub fn intelligence_gap_experiment(
    lucky: Action,
    gate_weight: &Rational,
    class_weight: &Rational,
    xi: &Mixture,
    schedule: &DiscountSchedule,
    horizon: usize,
) -> Result<GapReport> {
    let gate = GateEnvironment::lucky(xi.alphabet().clone(), lucky)?;
    let rigged = mix(class_weight, xi, gate_weight, Arc::new(gate.clone()))?;
    let planner = Planner::new(Arc::new(rigged), schedule.clone());
    let lows = planner.action_values(&History::empty(), horizon, Backup::Min)?;
    let highs = planner.action_values(&History::empty(), horizon, Backup::Max)?;
    let gap_exists = class_weight < gate_weight;
    let lo_edge = Interval::exact(class_weight.clone());
    let hi_edge = Interval::exact(gate_weight.clone());
    let mut ranges = Vec::new();
    let mut outcomes = Vec::new();
    for ((a, lowest), highest) in xi.alphabet().actions().zip(lows).zip(highs) {
        let heaven = !gate_weight.is_zero() && gate.leads_to_heaven(a);
        outcomes.push(if heaven {
            certify::greater(&Interval::from(&lowest), &hi_edge)
        } else {
            certify::less(&Interval::from(&highest), &lo_edge)
        });
        ranges.push(FirstActionRange {
            action: a,
            leads_to_heaven: heaven,
            lowest,
            highest,
        });
    }
    let empty_interval = if gap_exists {
        Outcome::all(outcomes)
    } else {
        Outcome::Falsified
    };
    Ok(GapReport {
        lucky,
        gate_weight: gate_weight.clone(),
        class_weight: class_weight.clone(),
        ranges,
        gap_exists,
        empty_interval,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StupidityReport {
    pub eps: Rational,
    /// Υ̲_ξ.
    pub lower: ValueResult,
    /// Depth the pessimal policy was tabulated to.
    pub truncation_depth: usize,
    /// Υ_ξ of the tabulated near-pessimal policy.
    pub near_pessimal: ValueResult,
    pub stupid_k: usize,
    pub stupid_threshold: Rational,
    /// Υ_ξ(π*_{ξ′}) for the ξ′ emulating the near-pessimal policy.
    pub stupid_aixi: ValueResult,
    /// Υ_ξ(π*_{ξ′}) < Υ̲_ξ + ε
    pub stupid: Outcome,
    pub smart_policy: String,
    /// Υ_{ξ′}(π) for the user policy.
    pub smart_value: ValueResult,
    /// Ῡ_{ξ′}.
    pub smart_upper: ValueResult,
    /// Υ_{ξ′}(π) > Ῡ_{ξ′} − ε
    pub smart: Outcome,
    pub aixi_first_action: Action,
    /// Υ_{ξ′}(π*_ξ) under the adversarial gate mixture.
    pub rigged_aixi: ValueResult,
    /// Ῡ_{ξ′} under the adversarial gate mixture.
    pub rigged_upper: ValueResult,
    /// Υ_{ξ′}(π*_ξ) ≤ ε and Ῡ_{ξ′} ≥ 1 − ε
    pub rigged: Outcome,
}

impl StupidityReport {
    pub fn outcome(&self) -> Outcome {
        Outcome::all([self.stupid, self.smart, self.rigged])
    }
}

/// Three ways to make the intelligence score say whatever we like:
/// (a) an AIXI built on a dogmatic mixture scores within ε of the minimum,
/// (b) a given policy scores within ε of the maximum under its own
/// emulation mixture, (c) the ξ-optimal policy scores at most ε under an
/// adversarial gate mixture whose maximum is at least 1 − ε.
pub fn stupidity_experiment(
    xi: &Mixture,
    eps: &Rational,
    schedule: &DiscountSchedule,
    horizon: usize,
    smart_policy: PolicyRef,
    tie_break: &TieBreak,
) -> Result<StupidityReport> {
    if *eps <= Rational::zero() {
        return Err(Error::param("eps", "must be positive"));
    }
    let alphabet = xi.alphabet().clone();
    let half_eps = eps / rational::int(2);
    let base = Arc::new(Planner::new(Arc::new(xi.clone()), schedule.clone()));
    let root = History::empty();

    // (a) density step, then emulation
    let lower = base.pessimal_value(&root, horizon)?;
    let pessimal = pessimal_policy(&base, horizon, tie_break.clone())?;
    let truncation_depth = schedule.effective_horizon(&half_eps)?;
    let all: Vec<Action> = alphabet.actions().collect();
    let near: PolicyRef = Arc::new(truncate_policy(
        &pessimal,
        truncation_depth,
        tie_break.choose(&all),
        &alphabet,
    ));
    let near_pessimal = base.value(near.as_ref(), &root, horizon)?;
    let emulation = make_emulation_mixture(near, xi, &half_eps, schedule, horizon)?;
    let emulating = Arc::new(Planner::new(Arc::new(emulation.mixture), schedule.clone()));
    let stupid_policy = optimal_policy(&emulating, horizon, tie_break.clone())?;
    let stupid_aixi = base.value(&stupid_policy, &root, horizon)?;
    let stupid = certify::less(
        &Interval::from(&stupid_aixi),
        &Interval::from(&lower).shift(eps),
    );

    // (b) the user policy made smart
    let smart_name = smart_policy.name();
    let smart_em = make_emulation_mixture(smart_policy.clone(), xi, eps, schedule, horizon)?;
    let smart_planner = Planner::new(Arc::new(smart_em.mixture), schedule.clone());
    let smart_value = smart_planner.value(smart_policy.as_ref(), &root, horizon)?;
    let smart_upper = smart_planner.optimal_value(&root, horizon)?;
    let smart = certify::greater(
        &Interval::from(&smart_value),
        &Interval::from(&smart_upper).shift(&-eps.clone()),
    );

    // (c) rig the measure against the ξ-optimal policy
    let aixi = optimal_policy(&base, horizon, tie_break.clone())?;
    let aixi_first_action = aixi.act(&root);
    let rigged_mix = make_adversarial_gate_mixture(aixi_first_action, xi, eps)?;
    let rigged_planner = Planner::new(Arc::new(rigged_mix), schedule.clone());
    let rigged_aixi = rigged_planner.value(&aixi, &root, horizon)?;
    let rigged_upper = rigged_planner.optimal_value(&root, horizon)?;
    let rigged = Outcome::all([
        certify::at_most(&Interval::from(&rigged_aixi), &Interval::exact(eps.clone())),
        certify::at_least(
            &Interval::from(&rigged_upper),
            &Interval::exact(Rational::one() - eps),
        ),
    ]);

    Ok(StupidityReport {
        eps: eps.clone(),
        lower,
        truncation_depth,
        near_pessimal,
        stupid_k: emulation.k,
        stupid_threshold: emulation.threshold,
        stupid_aixi,
        stupid,
        smart_policy: smart_name,
        smart_value,
        smart_upper,
        smart,
        aixi_first_action,
        rigged_aixi,
        rigged_upper,
        rigged,
    })
}
