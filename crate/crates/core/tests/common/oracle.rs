//! Brute-force reference computations that share nothing with the planner
//! except the environment's one-step conditionals: expected rewards are
//! summed over explicitly enumerated histories, and the optimum is a max
//! over every deterministic policy tree.

#![allow(dead_code)]

use priorlab::policy::consistent_with;
use priorlab::rational::{self, zero};
use priorlab::{Action, DiscountSchedule, Environment, History, Policy, Rational};
use priorlab::policy::TabularPolicy;
use std::collections::BTreeMap;

/// Joint probability as a plain product of conditionals.
pub fn joint(env: &dyn Environment, h: &History) -> Rational {
    let mut p = rational::one();
    let mut prefix = History::empty();
    for s in h.steps() {
        p *= env.step(&prefix, s.action).prob(s.percept);
        if p == zero() {
            return p;
        }
        prefix.push(s.action, s.percept);
    }
    p
}

/// (1/Γ_1) Σ_{t ≤ n} γ_t E[r_t], enumerating every history of length t
/// consistent with `pi`.
pub fn expected_value(
    env: &dyn Environment,
    pi: &dyn Policy,
    schedule: &DiscountSchedule,
    n: usize,
) -> Rational {
    let alphabet = env.alphabet().clone();
    let mut total = zero();
    for t in 1..=n {
        let gamma = schedule.gamma(t);
        if gamma == zero() {
            continue;
        }
        for h in alphabet.histories_of_len(t) {
            if !consistent_with(&h, pi) {
                continue;
            }
            let p = joint(env, &h);
            if p == zero() {
                continue;
            }
            let r = alphabet.reward(h.steps()[t - 1].percept);
            total += &gamma * p * r;
        }
    }
    total / schedule.big_gamma(1)
}

/// Every deterministic policy, restricted to the histories it can itself
/// produce, on histories shorter than `n`.
pub fn all_policy_trees(env: &dyn Environment, n: usize) -> Vec<TabularPolicy> {
    let alphabet = env.alphabet().clone();
    let mut partial: Vec<BTreeMap<History, Action>> = vec![BTreeMap::new()];
    let mut frontier: Vec<Vec<History>> = vec![vec![History::empty()]];
    for _ in 0..n {
        let mut next_partial = Vec::new();
        let mut next_frontier = Vec::new();
        for (table, open) in partial.into_iter().zip(frontier) {
            let mut choices: Vec<(BTreeMap<History, Action>, Vec<History>)> =
                vec![(table, Vec::new())];
            for h in &open {
                let mut grown = Vec::new();
                for (t, f) in &choices {
                    for a in alphabet.actions() {
                        let mut t = t.clone();
                        t.insert(h.clone(), a);
                        let mut f = f.clone();
                        f.extend(alphabet.percept_ids().map(|e| h.extended(a, e)));
                        grown.push((t, f));
                    }
                }
                choices = grown;
            }
            for (t, f) in choices {
                next_partial.push(t);
                next_frontier.push(f);
            }
        }
        partial = next_partial;
        frontier = next_frontier;
    }
    partial
        .into_iter()
        .map(|t| TabularPolicy::new("tree", t, Action(0)))
        .collect()
}

/// max over all policy trees of the expected value.
pub fn brute_force_optimum(env: &dyn Environment, schedule: &DiscountSchedule, n: usize) -> Rational {
    all_policy_trees(env, n)
        .iter()
        .map(|pi| expected_value(env, pi, schedule, n))
        .max()
        .expect("at least one policy")
}

/// min over all policy trees of the expected value.
pub fn brute_force_pessimum(env: &dyn Environment, schedule: &DiscountSchedule, n: usize) -> Rational {
    all_policy_trees(env, n)
        .iter()
        .map(|pi| expected_value(env, pi, schedule, n))
        .min()
        .expect("at least one policy")
}
