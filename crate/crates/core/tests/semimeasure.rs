//! Fuzzes every environment constructor: each one-step conditional must be
//! a semimeasure, the joint must be the product of conditionals, and joint
//! probabilities must never grow along a history.

mod common;

use common::instances::instance;
use common::oracle;
use priorlab::env::{BuddyEnvironment, DogmaticEnvironment, GateEnvironment};
use priorlab::priors::{make_dogmatic_mixture, make_indifference_mixture};
use priorlab::rational::{ratio, zero};
use priorlab::{EnvRef, Environment, History, Mixture, PolicyRef, Rational};
use proptest::prelude::*;
use std::sync::Arc;

fn check(env: &dyn Environment, depth: usize) -> Result<(), TestCaseError> {
    let alphabet = env.alphabet().clone();
    // a mixture with total weight below 1 starts with that much mass
    let root = env.joint_prob(&History::empty());
    for h in alphabet.histories_shorter_than(depth + 1) {
        let joint = env.joint_prob(&h);
        prop_assert_eq!(&joint, &(&root * oracle::joint(env, &h)), "{} at {}", env.name(), h);
        if h.len() == depth {
            continue;
        }
        for a in alphabet.actions() {
            let d = env.step(&h, a);
            prop_assert!(d.is_semimeasure(), "{} at {} / {}", env.name(), h, a);
            let children: Rational = alphabet
                .percept_ids()
                .map(|e| env.joint_prob(&h.extended(a, e)))
                .sum();
            prop_assert!(children <= joint, "{} grows at {}", env.name(), h);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn every_constructor_yields_a_semimeasure(seed in any::<u64>()) {
        let mut inst = instance(seed);
        let depth = inst.depth;
        let al = inst.alphabet.clone();
        let base = inst.env();
        let xi = Mixture::new(vec![(ratio(1, 2), base.clone()), (ratio(1, 3), inst.seeded_env())]).unwrap();
        let pi: PolicyRef = Arc::new(inst.policy(depth));
        let eps = inst.rational_weight(4, 4);
        let script_history = {
            // any history works as a script, including impossible ones
            let mut h = History::empty();
            for _ in 0..inst.rng_k(depth) {
                let a = inst.random_action();
                h.push(a, priorlab::PerceptId(0));
            }
            h
        };
        let envs: Vec<EnvRef> = vec![
            base.clone(),
            Arc::new(xi.clone()),
            Arc::new(DogmaticEnvironment::new(Arc::new(xi.clone()), pi.clone()).unwrap()),
            Arc::new(make_dogmatic_mixture(pi, &xi, &eps).unwrap()),
            Arc::new(make_indifference_mixture(base, depth).unwrap()),
            Arc::new(GateEnvironment::lucky(al.clone(), inst.random_action()).unwrap()),
            Arc::new(BuddyEnvironment::new(al, script_history, inst.random_action()).unwrap()),
        ];
        for env in &envs {
            check(env.as_ref(), depth)?;
        }
        prop_assert!(envs[0].joint_prob(&History::empty()) > zero());
    }
}
