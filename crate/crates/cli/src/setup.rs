//! Turns a parsed config into alphabet, schedule, class and policies.

use priorlab::env::{
    BernoulliBandit, BuddyEnvironment, ConstantEnvironment, DogmaticEnvironment,
    GateEnvironment, SeededEnvironment, SequencePrediction,
};
use priorlab::planner::{optimal_policy, pessimal_policy};
use priorlab::policy::{FnPolicy, TabularPolicy};
use priorlab::rational;
use priorlab::{
    Action, Alphabet, DiscountSchedule, EnvRef, History, Mixture, Percept, Planner, PolicyRef,
    Rational, TieBreak,
};
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::config::{ClassEntry, Config, DiscountSpec, EnvSpec, PolicySpec, TieBreakSpec};
use crate::RunError;

fn field_err(field: &str, e: impl std::fmt::Display) -> RunError {
    RunError::Config(format!("{field}: {e}"))
}

pub fn parse_rational(s: &str, field: &str) -> Result<Rational, RunError> {
    rational::parse(s).map_err(|e| field_err(field, e))
}

pub struct Setup {
    pub alphabet: Arc<Alphabet>,
    pub schedule: DiscountSchedule,
    pub tie_break: TieBreak,
    pub horizon: usize,
    pub seed: u64,
    pub class: Vec<(Rational, EnvRef)>,
}

impl Setup {
    pub fn from_config(cfg: &Config) -> Result<Self, RunError> {
        let alphabet = Arc::new(match &cfg.alphabet.percepts {
            None => Alphabet::binary(cfg.alphabet.actions),
            Some(ps) => {
                let percepts = ps
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        let field = format!("alphabet.percepts[{i}].reward");
                        Ok(Percept::new(p.observation, parse_rational(&p.reward, &field)?))
                    })
                    .collect::<Result<Vec<_>, RunError>>()?;
                Alphabet::new(cfg.alphabet.actions, percepts)
            }
        }
        .map_err(|e| field_err("alphabet", e))?);

        let schedule = match &cfg.discount {
            DiscountSpec::Geometric { gamma } => {
                DiscountSchedule::geometric(parse_rational(gamma, "discount.gamma")?)
            }
            DiscountSpec::FiniteLifetime { m } => DiscountSchedule::finite_lifetime(*m),
            DiscountSpec::Table { values } => DiscountSchedule::table(
                values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| parse_rational(v, &format!("discount.values[{i}]")))
                    .collect::<Result<_, _>>()?,
            ),
        }
        .map_err(|e| field_err("discount", e))?;
        if schedule.big_gamma(1) == rational::zero() {
            return Err(field_err("discount", "schedule is identically zero"));
        }

        let tie_break = match &cfg.tie_break {
            TieBreakSpec::Lowest => TieBreak::LowestIndex,
            TieBreakSpec::Highest => TieBreak::HighestIndex,
            TieBreakSpec::Preference(order) => {
                TieBreak::FixedPreference(order.iter().map(|a| Action(*a)).collect())
            }
        };
        tie_break
            .validate(&alphabet)
            .map_err(|e| field_err("tie_break", e))?;

        let horizon = match (cfg.horizon, &cfg.target_eps) {
            (Some(h), _) => h,
            (None, Some(eps)) => schedule
                .effective_horizon(&parse_rational(eps, "target_eps")?)
                .map_err(|e| field_err("target_eps", e))?,
            (None, None) => schedule.lifetime().ok_or_else(|| {
                field_err(
                    "horizon",
                    "required when the discount has no finite lifetime (or set target_eps)",
                )
            })?,
        };
        if horizon == 0 {
            return Err(field_err("horizon", "must be at least 1"));
        }

        let mut setup = Setup {
            alphabet,
            schedule,
            tie_break,
            horizon,
            seed: cfg.seed.unwrap_or(0),
            class: Vec::new(),
        };
        setup.class = setup.entries(&cfg.class, "class", false)?;
        if !setup.class.is_empty() {
            Mixture::new(setup.class.clone()).map_err(|e| field_err("class", e))?;
        }
        Ok(setup)
    }

    fn entries(
        &self,
        entries: &[ClassEntry],
        field: &str,
        allow_dogmatic: bool,
    ) -> Result<Vec<(Rational, EnvRef)>, RunError> {
        entries
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let f = format!("{field}[{i}]");
                let w = parse_rational(&c.weight, &format!("{f}.weight"))?;
                if w <= rational::zero() {
                    return Err(field_err(&format!("{f}.weight"), "must be positive"));
                }
                Ok((w, self.build_env(&c.env, &format!("{f}.env"), allow_dogmatic)?))
            })
            .collect()
    }

    /// The configured class as a mixture.
    pub fn xi(&self) -> Result<Mixture, RunError> {
        if self.class.is_empty() {
            return Err(field_err("class", "this experiment needs a nonempty class"));
        }
        Mixture::new(self.class.clone()).map_err(|e| field_err("class", e))
    }

    pub fn class_envs(&self) -> Vec<EnvRef> {
        self.class.iter().map(|(_, e)| e.clone()).collect()
    }

    pub fn env(&self, spec: &EnvSpec, field: &str) -> Result<EnvRef, RunError> {
        self.build_env(spec, field, true)
    }

    fn build_env(&self, spec: &EnvSpec, field: &str, allow_dogmatic: bool) -> Result<EnvRef, RunError> {
        let al = self.alphabet.clone();
        let err = |e: priorlab::Error| field_err(field, e);
        Ok(match spec {
            EnvSpec::Heaven => Arc::new(ConstantEnvironment::heaven(al).map_err(err)?),
            EnvSpec::Hell => Arc::new(ConstantEnvironment::hell(al).map_err(err)?),
            EnvSpec::Gate { lucky } => Arc::new(GateEnvironment::lucky(al, Action(*lucky)).map_err(err)?),
            EnvSpec::Trap { doomed } => Arc::new(GateEnvironment::trap(al, Action(*doomed)).map_err(err)?),
            EnvSpec::Bandit { means } => {
                let means = means
                    .iter()
                    .enumerate()
                    .map(|(i, m)| parse_rational(m, &format!("{field}.means[{i}]")))
                    .collect::<Result<_, _>>()?;
                Arc::new(BernoulliBandit::new(al, means).map_err(err)?)
            }
            EnvSpec::Seqpred { bits } => {
                Arc::new(SequencePrediction::new(al, parse_bits(bits, field)?).map_err(err)?)
            }
            EnvSpec::Seeded { seed, deficit } => Arc::new(SeededEnvironment::new(al, *seed, *deficit)),
            EnvSpec::Dogmatic { policy } => {
                if !allow_dogmatic {
                    return Err(field_err(field, "a dogmatic environment is built from the class and cannot be part of it"));
                }
                let pi = self.policy(policy, &format!("{field}.policy"))?;
                Arc::new(DogmaticEnvironment::new(Arc::new(self.xi()?), pi).map_err(err)?)
            }
            EnvSpec::Buddy { script, pinned } => {
                let h = History::parse(script, &al).map_err(err)?;
                Arc::new(BuddyEnvironment::new(al, h, Action(*pinned)).map_err(err)?)
            }
            EnvSpec::Mixture { components } => {
                let parts = self.entries(components, &format!("{field}.components"), allow_dogmatic)?;
                Arc::new(Mixture::new(parts).map_err(err)?)
            }
        })
    }

    pub fn policy(&self, spec: &PolicySpec, field: &str) -> Result<PolicyRef, RunError> {
        let check = |a: u16| {
            self.alphabet
                .check_action(Action(a))
                .map_err(|e| field_err(field, e))
        };
        Ok(match spec {
            PolicySpec::Constant { action } => Arc::new(FnPolicy::constant(check(*action)?)),
            PolicySpec::Cycle { actions } => {
                if actions.is_empty() {
                    return Err(field_err(field, "cycle needs at least one action"));
                }
                let actions = actions.iter().map(|a| check(*a)).collect::<Result<_, _>>()?;
                Arc::new(FnPolicy::cycle(actions))
            }
            PolicySpec::Table { entries, default } => {
                let mut table = BTreeMap::new();
                for (h, a) in entries {
                    let hist = History::parse(h, &self.alphabet).map_err(|e| field_err(field, e))?;
                    table.insert(hist, check(*a)?);
                }
                Arc::new(TabularPolicy::new("table", table, check(*default)?))
            }
            PolicySpec::EveryThird { bits } => {
                let bits = parse_bits(bits, field)?;
                Arc::new(FnPolicy::new("every-third", move |h: &History| {
                    let t = h.len() + 1;
                    let bit = bits[(t - 1) % bits.len()] as u16;
                    Action(if t.is_multiple_of(3) { bit } else { 1 - bit })
                }))
            }
            PolicySpec::Optimal | PolicySpec::Pessimal => {
                let planner = Arc::new(Planner::new(Arc::new(self.xi()?), self.schedule.clone()));
                let planned = if matches!(spec, PolicySpec::Optimal) {
                    optimal_policy(&planner, self.horizon, self.tie_break.clone())
                } else {
                    pessimal_policy(&planner, self.horizon, self.tie_break.clone())
                };
                Arc::new(planned.map_err(|e| field_err(field, e))?)
            }
        })
    }
}

fn parse_bits(bits: &str, field: &str) -> Result<Vec<u8>, RunError> {
    let out: Vec<u8> = bits
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(field_err(field, format!("`{bits}` is not a bit string"))),
        })
        .collect::<Result<_, _>>()?;
    if out.is_empty() {
        return Err(field_err(field, "bit string is empty"));
    }
    Ok(out)
}
