//! Small random instances for the lemma suites, fully determined by a seed.

#![allow(dead_code)]

use priorlab::env::{ConstantEnvironment, SeededEnvironment};
use priorlab::policy::TabularPolicy;
use priorlab::rational::ratio;
use priorlab::{Action, Alphabet, DiscountSchedule, EnvRef, Mixture, Percept, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub struct Instance {
    pub alphabet: Arc<Alphabet>,
    pub schedule: DiscountSchedule,
    pub depth: usize,
    pub rng: ChaCha8Rng,
}

/// |A|, |E| ∈ {2, 3}; E always contains (0,0) and (0,1).
pub fn alphabet(actions: usize, percepts: usize) -> Arc<Alphabet> {
    let mut es = vec![Percept::new(0, ratio(0, 1)), Percept::new(0, ratio(1, 1))];
    if percepts == 3 {
        es.push(Percept::new(1, ratio(1, 2)));
    }
    Arc::new(Alphabet::new(actions, es).unwrap())
}

pub fn schedule(rng: &mut ChaCha8Rng, depth: usize) -> DiscountSchedule {
    match rng.gen_range(0..3) {
        0 => DiscountSchedule::finite_lifetime(rng.gen_range(1..=depth)).unwrap(),
        1 => DiscountSchedule::geometric(ratio(rng.gen_range(1..4), 4)).unwrap(),
        _ => DiscountSchedule::table(
            (0..depth).map(|_| ratio(rng.gen_range(0..4), 3)).chain([ratio(1, 1)]).collect(),
        )
        .unwrap(),
    }
}

pub fn instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = alphabet(rng.gen_range(2..=3), rng.gen_range(2..=3));
    let depth = rng.gen_range(1..=3);
    let schedule = schedule(&mut rng, depth);
    Instance {
        alphabet,
        schedule,
        depth,
        rng,
    }
}

impl Instance {
    pub fn seeded_env(&mut self) -> EnvRef {
        let deficit = self.rng.gen_bool(0.3);
        Arc::new(SeededEnvironment::new(self.alphabet.clone(), self.rng.gen(), deficit))
    }

    /// A seeded environment, or a mixture of seeded ones with heaven/hell.
    pub fn env(&mut self) -> EnvRef {
        if self.rng.gen_bool(0.5) {
            return self.seeded_env();
        }
        let mut parts: Vec<(Rational, EnvRef)> = vec![
            (ratio(1, 4), self.seeded_env()),
            (ratio(1, 4), self.seeded_env()),
        ];
        parts.push(match self.rng.gen_range(0..2) {
            0 => (ratio(1, 4), Arc::new(ConstantEnvironment::heaven(self.alphabet.clone()).unwrap())),
            _ => (ratio(1, 4), Arc::new(ConstantEnvironment::hell(self.alphabet.clone()).unwrap())),
        });
        Arc::new(Mixture::new(parts).unwrap())
    }

    pub fn random_action(&mut self) -> Action {
        Action(self.rng.gen_range(0..self.alphabet.num_actions() as u16))
    }

    /// Uniformly random table on histories shorter than `len`.
    pub fn policy(&mut self, len: usize) -> TabularPolicy {
        let table = self
            .alphabet
            .histories_shorter_than(len)
            .into_iter()
            .map(|h| (h, self.random_action()))
            .collect();
        let default = self.random_action();
        TabularPolicy::new("random", table, default)
    }

    /// Agrees with `pi` on every history shorter than `k`, random elsewhere.
    pub fn agreeing_policy(&mut self, pi: &TabularPolicy, k: usize, len: usize) -> TabularPolicy {
        use priorlab::Policy;
        let table = self
            .alphabet
            .histories_shorter_than(len)
            .into_iter()
            .map(|h| {
                let a = if h.len() < k { pi.act(&h) } else { self.random_action() };
                (h, a)
            })
            .collect();
        let default = self.random_action();
        TabularPolicy::new("agreeing", table, default)
    }

    pub fn rational_weight(&mut self, max_num: i64, den: i64) -> Rational {
        ratio(self.rng.gen_range(1..=max_num), den)
    }
}

impl Instance {
    pub fn rng_k(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..=n)
    }

    /// The largest depth ≤ 3 whose policy-tree count stays small enough
    /// for exhaustive search.
    pub fn oracle_depth(&self) -> usize {
        let a = self.alphabet.num_actions() as u64;
        let e = self.alphabet.num_percepts() as u32;
        let nodes = |d: u32| (0..d).map(|i| (e as u64).pow(i)).sum::<u64>() as u32;
        (1..=3).rev().find(|&d| a.pow(nodes(d)) <= 500).unwrap_or(1) as usize
    }
}
