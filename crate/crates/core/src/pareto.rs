//! Pareto dominance between deterministic policies, buddy environments, and
//! the brute-force check that buddies make every policy Pareto optimal.
//!
//! "Lexicographically first" always refers to the canonical history order:
//! step by step, action index first, then percept index.

use crate::certify::{self, Interval, Outcome};
use crate::discount::DiscountSchedule;
use crate::env::{BuddyEnvironment, EnvRef};
use crate::error::{Error, Result};
use crate::history::{Action, Alphabet, History};
use crate::planner::{Planner, ValueResult};
use crate::policy::{Policy, TabularPolicy};
use crate::rational::Rational;
use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Every deterministic policy that is tabular on histories shorter than
/// `depth`, under full percept branching. Beyond the table each policy
/// plays action 0.
#[derive(Clone, Debug)]
pub struct PolicySpace {
    alphabet: Arc<Alphabet>,
    depth: usize,
    histories: Vec<History>,
    len: u64,
}

impl PolicySpace {
    pub fn new(alphabet: Arc<Alphabet>, depth: usize) -> Result<Self> {
        let histories = alphabet.histories_shorter_than(depth);
        let len = u32::try_from(histories.len())
            .ok()
            .and_then(|n| (alphabet.num_actions() as u64).checked_pow(n))
            .ok_or_else(|| Error::param("depth", "policy space too large to enumerate"))?;
        Ok(Self {
            alphabet,
            depth,
            histories,
            len,
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn histories(&self) -> &[History] {
        &self.histories
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The `index`-th policy: its table, read in canonical history order,
    /// is the base-|A| expansion of `index` (most significant digit first).
    pub fn policy(&self, index: u64) -> TabularPolicy {
        assert!(index < self.len, "policy index out of range");
        let base = self.alphabet.num_actions() as u64;
        let mut digits = vec![Action(0); self.histories.len()];
        let mut rest = index;
        for slot in digits.iter_mut().rev() {
            *slot = Action((rest % base) as u16);
            rest /= base;
        }
        let table = self.histories.iter().cloned().zip(digits).collect();
        TabularPolicy::new(format!("p{index}"), table, Action(0))
    }

    pub fn iter(&self) -> impl Iterator<Item = TabularPolicy> + '_ {
        (0..self.len).map(|i| self.policy(i))
    }

    /// A uniformly random member of the space.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> TabularPolicy {
        let n = self.alphabet.num_actions() as u16;
        let table: BTreeMap<History, Action> = self
            .histories
            .iter()
            .map(|h| (h.clone(), Action(rng.gen_range(0..n))))
            .collect();
        TabularPolicy::new("sampled", table, Action(0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DominanceOutcome {
    Dominates,
    DoesNotDominate,
    /// Some comparison could not be settled within the truncation bounds.
    Uncertifiable,
}

impl DominanceOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            DominanceOutcome::Dominates => "dominates",
            DominanceOutcome::DoesNotDominate => "does-not-dominate",
            DominanceOutcome::Uncertifiable => "uncertifiable",
        }
    }
}

/// Dominance from per-environment values (π̃ first, π second).
fn compare_values(tilde: &[ValueResult], pi: &[ValueResult]) -> DominanceOutcome {
    let mut weak = Outcome::HoldsExactly;
    let mut strict_somewhere = false;
    let mut strict_unknown = false;
    for (t, p) in tilde.iter().zip(pi) {
        let (t, p) = (Interval::from(t), Interval::from(p));
        let ge = certify::at_least(&t, &p);
        if ge == Outcome::Falsified {
            return DominanceOutcome::DoesNotDominate;
        }
        weak = weak.and(ge);
        match certify::greater(&t, &p) {
            o if o.holds() => strict_somewhere = true,
            Outcome::Uncertifiable => strict_unknown = true,
            _ => {}
        }
    }
    if !weak.holds() {
        DominanceOutcome::Uncertifiable
    } else if strict_somewhere {
        DominanceOutcome::Dominates
    } else if strict_unknown {
        DominanceOutcome::Uncertifiable
    } else {
        DominanceOutcome::DoesNotDominate
    }
}

fn values_in(
    planners: &[Planner],
    pi: &dyn Policy,
    horizon: usize,
) -> Result<Vec<ValueResult>> {
    planners
        .iter()
        .map(|p| p.value(pi, &History::empty(), horizon))
        .collect()
}

fn planners_for(class: &[EnvRef], schedule: &DiscountSchedule) -> Vec<Planner> {
    class
        .iter()
        .map(|env| Planner::new(env.clone(), schedule.clone()))
        .collect()
}

/// Does π̃ weakly improve on π in every environment of `class` and
/// strictly in at least one?
pub fn dominates(
    pi_tilde: &dyn Policy,
    pi: &dyn Policy,
    class: &[EnvRef],
    schedule: &DiscountSchedule,
    horizon: usize,
) -> Result<DominanceOutcome> {
    let planners = planners_for(class, schedule);
    Ok(compare_values(
        &values_in(&planners, pi_tilde, horizon)?,
        &values_in(&planners, pi, horizon)?,
    ))
}

/// Shortest, lexicographically first history consistent with both
/// policies at which they choose differently, under full percept
/// branching, among histories shorter than `max_len`.
pub fn first_divergence(
    pi: &dyn Policy,
    pi_tilde: &dyn Policy,
    alphabet: &Alphabet,
    max_len: usize,
) -> Option<History> {
    let mut layer = vec![History::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for h in &layer {
            let a = pi.act(h);
            if a != pi_tilde.act(h) {
                return Some(h.clone());
            }
            next.extend(alphabet.percept_ids().map(|e| h.extended(a, e)));
        }
        layer = next;
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatingHistory {
    /// h′, of length k − 1.
    pub history: History,
    pub k: usize,
    pub pi_action: Action,
    pub pi_tilde_action: Action,
}

/// Scans histories consistent with both policies and possible under ρ,
/// shortest first and canonically ordered within a length, for the first
/// h′ with π(h′) ≠ π̃(h′) and V^π̃_ρ(h′) > V^π_ρ(h′) (certified).
pub fn find_separating_history(
    pi: &dyn Policy,
    pi_tilde: &dyn Policy,
    rho: EnvRef,
    schedule: &DiscountSchedule,
    horizon: usize,
) -> Result<SeparatingHistory> {
    let planner = Planner::new(rho.clone(), schedule.clone());
    let mut layer = vec![History::empty()];
    for _ in 0..horizon {
        let mut next = Vec::new();
        for h in &layer {
            let (a, b) = (pi.act(h), pi_tilde.act(h));
            if a != b {
                let v = planner.value(pi, h, horizon)?;
                let w = planner.value(pi_tilde, h, horizon)?;
                if certify::greater(&Interval::from(&w), &Interval::from(&v)).holds() {
                    return Ok(SeparatingHistory {
                        history: h.clone(),
                        k: h.len() + 1,
                        pi_action: a,
                        pi_tilde_action: b,
                    });
                }
                continue;
            }
            for (e, p) in rho.step(h, a).iter() {
                if !p.is_zero() {
                    next.push(h.extended(a, *e));
                }
            }
        }
        next.sort();
        layer = next;
    }
    Err(Error::NoSeparatingHistory(horizon))
}

/// The buddy environment for `sep`, pinned to π's action.
pub fn buddy_for(alphabet: Arc<Alphabet>, sep: &SeparatingHistory) -> Result<BuddyEnvironment> {
    BuddyEnvironment::new(alphabet, sep.history.clone(), sep.pi_action)
}

/// Γ_1·(V^π_μ(ε) − V^π̃_μ(ε)) in the buddy environment μ built from `sep`;
/// must equal Γ_k exactly.
pub fn verify_buddy_gap(
    pi: &dyn Policy,
    pi_tilde: &dyn Policy,
    sep: &SeparatingHistory,
    alphabet: Arc<Alphabet>,
    schedule: &DiscountSchedule,
) -> Result<Rational> {
    let mu = buddy_for(alphabet, sep)?;
    let planner = Planner::new(Arc::new(mu), schedule.clone());
    let root = History::empty();
    // the buddy is absorbing from step k on, so this look-ahead is exact
    let v = planner.value(pi, &root, sep.k)?;
    let w = planner.value(pi_tilde, &root, sep.k)?;
    let expected = schedule.big_gamma(sep.k);
    let gap = (v.value - w.value) * schedule.big_gamma(1);
    if gap != expected || !v.truncation_bound.is_zero() || !w.truncation_bound.is_zero() {
        return Err(Error::BuddyGapMismatch {
            expected: Box::new(expected),
            actual: Box::new(gap),
        });
    }
    Ok(gap)
}

/// Buddies (h′, a) for every history h′ shorter than `depth` and every
/// action a, in canonical order.
pub fn buddy_closure(alphabet: &Arc<Alphabet>, depth: usize) -> Result<Vec<EnvRef>> {
    let mut out: Vec<EnvRef> = Vec::new();
    for h in alphabet.histories_shorter_than(depth) {
        for a in alphabet.actions() {
            out.push(Arc::new(BuddyEnvironment::new(alphabet.clone(), h.clone(), a)?));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct DominanceMatrix {
    pub class_names: Vec<String>,
    /// values[i][j] = V^{π_i}_{ν_j}(ε)
    pub values: Vec<Vec<ValueResult>>,
    /// outcomes[i][j]: does π_i dominate π_j?
    pub outcomes: Vec<Vec<DominanceOutcome>>,
}

impl DominanceMatrix {
    pub fn dominated_by(&self, j: usize) -> Vec<usize> {
        (0..self.outcomes.len())
            .filter(|&i| self.outcomes[i][j] == DominanceOutcome::Dominates)
            .collect()
    }

    pub fn is_pareto_optimal(&self, j: usize) -> bool {
        self.outcomes
            .iter()
            .all(|row| row[j] == DominanceOutcome::DoesNotDominate)
    }

    pub fn dominated_policies(&self) -> Vec<usize> {
        (0..self.outcomes.len())
            .filter(|&j| !self.dominated_by(j).is_empty())
            .collect()
    }
}

/// Brute-force dominance over every ordered pair in `space`.
pub fn dominance_sweep(
    class: &[EnvRef],
    space: &PolicySpace,
    schedule: &DiscountSchedule,
    horizon: usize,
) -> Result<DominanceMatrix> {
    let planners = planners_for(class, schedule);
    let values = (0..space.len())
        .into_par_iter()
        .map(|i| values_in(&planners, &space.policy(i), horizon))
        .collect::<Result<Vec<_>>>()?;
    let outcomes = values
        .par_iter()
        .map(|vi| values.iter().map(|vj| compare_values(vi, vj)).collect())
        .collect();
    Ok(DominanceMatrix {
        class_names: class.iter().map(|e| e.name()).collect(),
        values,
        outcomes,
    })
}

/// Why π_dominator fails to dominate π: an environment where π does
/// strictly better (None when the two are value-equivalent on the class).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Defense {
    pub policy: u64,
    pub dominator: u64,
    pub defender: Option<String>,
}

#[derive(Clone, Debug)]
pub struct ParetoReport {
    pub lifetime: usize,
    pub base_size: usize,
    pub buddy_count: usize,
    pub matrix: DominanceMatrix,
    pub pareto_optimal: Vec<bool>,
    pub defenses: Vec<Defense>,
}

impl ParetoReport {
    pub fn all_pareto_optimal(&self) -> bool {
        self.pareto_optimal.iter().all(|&b| b)
    }
}

/// Augments `class` with every buddy environment for the space, then
/// checks every ordered pair of policies for dominance.
pub fn verify_pareto_triviality(
    class: &[EnvRef],
    space: &PolicySpace,
    schedule: &DiscountSchedule,
) -> Result<ParetoReport> {
    let lifetime = schedule.lifetime().ok_or(Error::NeedsFiniteLifetime)?;
    let buddies = buddy_closure(space.alphabet(), space.depth())?;
    let mut augmented = class.to_vec();
    augmented.extend(buddies.iter().cloned());
    let matrix = dominance_sweep(&augmented, space, schedule, lifetime)?;
    let n = matrix.values.len();
    let pareto_optimal = (0..n).map(|j| matrix.is_pareto_optimal(j)).collect();
    let mut defenses = Vec::new();
    for p in 0..n {
        for d in (0..n).filter(|&d| d != p) {
            let defender = matrix.values[p]
                .iter()
                .zip(&matrix.values[d])
                .position(|(mine, theirs)| {
                    certify::greater(&Interval::from(mine), &Interval::from(theirs)).holds()
                })
                .map(|j| matrix.class_names[j].clone());
            defenses.push(Defense {
                policy: p as u64,
                dominator: d as u64,
                defender,
            });
        }
    }
    Ok(ParetoReport {
        lifetime,
        base_size: class.len(),
        buddy_count: buddies.len(),
        matrix,
        pareto_optimal,
        defenses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{ConstantEnvironment, GateEnvironment};
    use crate::policy::FnPolicy;
    use crate::rational::{int, ratio};

    fn bin() -> Arc<Alphabet> {
        Arc::new(Alphabet::binary(2).unwrap())
    }

    #[test]
    fn space_size_and_order() {
        let s = PolicySpace::new(bin(), 2).unwrap();
        assert_eq!(s.histories().len(), 5);
        assert_eq!(s.len(), 32);
        let p0 = s.policy(0);
        assert!(p0.table().values().all(|&a| a == Action(0)));
        let p1 = s.policy(1);
        assert_eq!(p1.act(s.histories().last().unwrap()), Action(1));
        assert_eq!(p1.act(&History::empty()), Action(0));
        let p16 = s.policy(16);
        assert_eq!(p16.act(&History::empty()), Action(1));
    }

    #[test]
    fn dominance_examples() {
        let al = bin();
        let sched = DiscountSchedule::finite_lifetime(2).unwrap();
        let heaven: EnvRef = Arc::new(ConstantEnvironment::heaven(al.clone()).unwrap());
        let gate: EnvRef = Arc::new(GateEnvironment::lucky(al.clone(), Action(0)).unwrap());
        let lucky = FnPolicy::constant(Action(0));
        let unlucky = FnPolicy::constant(Action(1));
        let d = |a: &dyn Policy, b: &dyn Policy, c: &[EnvRef]| dominates(a, b, c, &sched, 2).unwrap();
        assert_eq!(d(&lucky, &lucky, std::slice::from_ref(&gate)), DominanceOutcome::DoesNotDominate);
        assert_eq!(d(&lucky, &unlucky, std::slice::from_ref(&heaven)), DominanceOutcome::DoesNotDominate);
        assert_eq!(d(&lucky, &unlucky, std::slice::from_ref(&gate)), DominanceOutcome::Dominates);
        assert_eq!(d(&unlucky, &lucky, &[gate]), DominanceOutcome::DoesNotDominate);
    }

    #[test]
    fn separating_history_at_root() {
        let al = bin();
        let sched = DiscountSchedule::finite_lifetime(3).unwrap();
        let gate: EnvRef = Arc::new(GateEnvironment::lucky(al.clone(), Action(1)).unwrap());
        let pi = FnPolicy::constant(Action(0));
        let tilde = FnPolicy::constant(Action(1));
        let sep = find_separating_history(&pi, &tilde, gate, &sched, 3).unwrap();
        assert_eq!(sep.history, History::empty());
        assert_eq!(sep.k, 1);
        let gap = verify_buddy_gap(&pi, &tilde, &sep, al, &sched).unwrap();
        assert_eq!(gap, int(3));
    }

    #[test]
    fn separating_history_deeper() {
        let al = bin();
        let space = PolicySpace::new(al.clone(), 2).unwrap();
        // agree at the root (action 0), differ after (0, e=1)
        let h = History::parse("0:1", &al).unwrap();
        let idx = space.histories().iter().position(|x| *x == h).unwrap();
        let pi = space.policy(0);
        let tilde = space.policy(1 << (space.histories().len() - 1 - idx));
        let div = first_divergence(&pi, &tilde, &al, 2).unwrap();
        assert_eq!(div, h);
        let rho: EnvRef = Arc::new(BuddyEnvironment::new(al.clone(), div, tilde.act(&h)).unwrap());
        let sched = DiscountSchedule::geometric(ratio(1, 2)).unwrap();
        let sep = find_separating_history(&pi, &tilde, rho, &sched, 3).unwrap();
        assert_eq!(sep.history, h);
        assert_eq!(sep.k, 2);
        assert_eq!(verify_buddy_gap(&pi, &tilde, &sep, al, &sched).unwrap(), ratio(1, 2));
    }

    #[test]
    fn identical_policies_have_no_separation() {
        let al = bin();
        let sched = DiscountSchedule::finite_lifetime(3).unwrap();
        let gate: EnvRef = Arc::new(GateEnvironment::lucky(al, Action(1)).unwrap());
        let pi = FnPolicy::constant(Action(0));
        assert!(matches!(
            find_separating_history(&pi, &pi, gate, &sched, 3),
            Err(Error::NoSeparatingHistory(3))
        ));
    }

    #[test]
    fn buddy_gap_at_last_step() {
        let al = bin();
        let sched = DiscountSchedule::finite_lifetime(3).unwrap();
        let sep = SeparatingHistory {
            history: History::parse("0:0 0:0", &al).unwrap(),
            k: 3,
            pi_action: Action(0),
            pi_tilde_action: Action(1),
        };
        let pi = FnPolicy::constant(Action(0));
        let tilde = FnPolicy::new("late", |h: &History| Action((h.len() == 2) as u16));
        assert_eq!(verify_buddy_gap(&pi, &tilde, &sep, al, &sched).unwrap(), int(1));
    }

    #[test]
    fn buddies_make_everything_pareto_optimal() {
        let al = bin();
        let space = PolicySpace::new(al.clone(), 2).unwrap();
        let sched = DiscountSchedule::finite_lifetime(2).unwrap();
        let gate: EnvRef = Arc::new(GateEnvironment::lucky(al.clone(), Action(0)).unwrap());
        let report = verify_pareto_triviality(std::slice::from_ref(&gate), &space, &sched).unwrap();
        assert_eq!(report.buddy_count, 10);
        assert!(report.all_pareto_optimal());

        let control = dominance_sweep(&[gate], &space, &sched, 2).unwrap();
        assert!(!control.dominated_policies().is_empty());
    }

    #[test]
    fn heaven_alone_dominates_nothing() {
        let al = bin();
        let space = PolicySpace::new(al.clone(), 2).unwrap();
        let sched = DiscountSchedule::finite_lifetime(2).unwrap();
        let heaven: EnvRef = Arc::new(ConstantEnvironment::heaven(al).unwrap());
        let m = dominance_sweep(&[heaven], &space, &sched, 2).unwrap();
        assert!(m
            .outcomes
            .iter()
            .flatten()
            .all(|&o| o == DominanceOutcome::DoesNotDominate));
    }

    #[test]
    fn needs_finite_lifetime() {
        let al = bin();
        let space = PolicySpace::new(al, 1).unwrap();
        let sched = DiscountSchedule::geometric(ratio(1, 2)).unwrap();
        assert!(matches!(
            verify_pareto_triviality(&[], &space, &sched),
            Err(Error::NeedsFiniteLifetime)
        ));
    }
}
