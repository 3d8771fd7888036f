//! Deterministic policies: maps from histories to actions.

use crate::env::Environment;
use crate::history::{Action, Alphabet, History};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolicyKind {
    Programmatic,
    Tabular,
    DerivedOptimal,
}

pub trait Policy: Send + Sync {
    fn act(&self, history: &History) -> Action;

    fn kind(&self) -> PolicyKind;

    fn name(&self) -> String;
}

pub type PolicyRef = Arc<dyn Policy>;

impl fmt::Debug for dyn Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Policy({})", self.name())
    }
}

type Decide = dyn Fn(&History) -> Action + Send + Sync;

/// A policy given by an arbitrary closure.
#[derive(Clone)]
pub struct FnPolicy {
    name: String,
    decide: Arc<Decide>,
}

impl FnPolicy {
    pub fn new(
        name: impl Into<String>,
        decide: impl Fn(&History) -> Action + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            decide: Arc::new(decide),
        }
    }

    pub fn constant(action: Action) -> Self {
        Self::new(format!("constant({action})"), move |_| action)
    }

    /// Open-loop: plays `actions[t mod n]` at step t+1, ignoring percepts.
    pub fn cycle(actions: Vec<Action>) -> Self {
        assert!(!actions.is_empty());
        let name = format!(
            "cycle({})",
            actions
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        Self::new(name, move |h| actions[h.len() % actions.len()])
    }
}

impl Policy for FnPolicy {
    fn act(&self, history: &History) -> Action {
        (self.decide)(history)
    }

    fn kind(&self) -> PolicyKind {
        PolicyKind::Programmatic
    }

    fn name(&self) -> String {
        self.name.clone()
    }
}

/// Lookup table with a default action for histories not in the table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabularPolicy {
    name: String,
    table: BTreeMap<History, Action>,
    default: Action,
}

impl TabularPolicy {
    pub fn new(name: impl Into<String>, table: BTreeMap<History, Action>, default: Action) -> Self {
        Self {
            name: name.into(),
            table,
            default,
        }
    }

    pub fn table(&self) -> &BTreeMap<History, Action> {
        &self.table
    }

    pub fn default_action(&self) -> Action {
        self.default
    }

    /// Tabulates `policy` on every history shorter than `len`.
    pub fn tabulate(
        name: impl Into<String>,
        policy: &dyn Policy,
        alphabet: &Alphabet,
        len: usize,
        default: Action,
    ) -> Self {
        let table = alphabet
            .histories_shorter_than(len)
            .into_iter()
            .map(|h| {
                let a = policy.act(&h);
                (h, a)
            })
            .collect();
        Self::new(name, table, default)
    }
}

impl Policy for TabularPolicy {
    fn act(&self, history: &History) -> Action {
        self.table.get(history).copied().unwrap_or(self.default)
    }

    fn kind(&self) -> PolicyKind {
        PolicyKind::Tabular
    }

    fn name(&self) -> String {
        self.name.clone()
    }
}

/// True iff `policy` chose every action recorded in `history`.
pub fn consistent_with(history: &History, policy: &dyn Policy) -> bool {
    first_deviation(history, policy).is_none()
}

/// Index (0-based) of the first cycle whose action differs from `policy`.
pub fn first_deviation(history: &History, policy: &dyn Policy) -> Option<usize> {
    let mut prefix = History::empty();
    for (i, step) in history.steps().iter().enumerate() {
        if policy.act(&prefix) != step.action {
            return Some(i);
        }
        prefix.push(step.action, step.percept);
    }
    None
}

/// Histories consistent with `policy`, of length < `len`, with positive
/// probability under `env`; shortest first, canonical order within a length.
pub fn on_policy_histories(env: &dyn Environment, policy: &dyn Policy, len: usize) -> Vec<History> {
    let mut out = Vec::new();
    let mut layer = vec![History::empty()];
    for depth in 0..len {
        out.extend(layer.iter().cloned());
        if depth + 1 == len {
            break;
        }
        let mut next = Vec::new();
        for h in &layer {
            let a = policy.act(h);
            for (e, p) in env.step(h, a).iter() {
                if !p.is_zero() {
                    next.push(h.extended(a, *e));
                }
            }
        }
        next.sort();
        layer = next;
    }
    out
}
