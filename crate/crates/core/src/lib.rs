//! Exact Bayesian general reinforcement learning over finite environment
//! classes.
//!
//! Everything here works in exact rational arithmetic: environments are
//! chronological conditional semimeasures given by one-step conditionals,
//! mixtures are finite weighted classes, and the planner evaluates the
//! discounted value recursion by exhaustive expectimax. On top of that sit
//! constructors for adversarial priors (indifference, dogmatic, emulation,
//! adversarial gate), the Legg-Hutter intelligence measure, and a
//! brute-force Pareto optimality checker with buddy environments.

pub mod certify;
pub mod discount;
pub mod env;
pub mod error;
pub mod history;
pub mod intelligence;
pub mod mixture;
pub mod pareto;
pub mod planner;
pub mod policy;
pub mod priors;
pub mod rational;

pub use discount::DiscountSchedule;
pub use env::{EnvRef, Environment, PerceptDist};
pub use error::{Error, Result};
pub use history::{Action, Alphabet, History, Percept, PerceptId, Step};
pub use mixture::{Mixture, Posterior};
pub use planner::{ActionChoice, Backup, Planner, TieBreak, ValueResult};
pub use policy::{Policy, PolicyKind, PolicyRef};
pub use rational::Rational;
