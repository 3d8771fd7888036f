use super::{Environment, PerceptDist};
use crate::error::Result;
use crate::history::{Action, Alphabet, History, PerceptId};
use crate::rational::Rational;
use num_traits::{One, Zero};
use std::sync::Arc;

/// Replays the percepts of a separating history h′ (length k−1), then pays
/// reward 1 forever if a_k is the pinned action and reward 0 forever
/// otherwise. Percepts off the script before step k have probability 0.
#[derive(Clone, Debug)]
pub struct BuddyEnvironment {
    alphabet: Arc<Alphabet>,
    script: History,
    pinned: Action,
    hell: PerceptId,
    heaven: PerceptId,
}

/// The finite-state view of a buddy environment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BuddyState {
    /// Replaying; the payload is the number of cycles done so far (< k).
    Replay(usize),
    Rewarding,
    Punishing,
}

impl BuddyEnvironment {
    pub fn new(alphabet: Arc<Alphabet>, script: History, pinned: Action) -> Result<Self> {
        alphabet.check_action(pinned)?;
        let hell = alphabet.require(0, &Rational::zero())?;
        let heaven = alphabet.require(0, &Rational::one())?;
        Ok(Self {
            alphabet,
            script,
            pinned,
            hell,
            heaven,
        })
    }

    pub fn script(&self) -> &History {
        &self.script
    }

    pub fn pinned(&self) -> Action {
        self.pinned
    }

    /// The step index k at which the pinned action is checked.
    pub fn k(&self) -> usize {
        self.script.len() + 1
    }

    /// k replay states plus the two absorbing ones.
    pub fn state_count(&self) -> usize {
        self.k() + 2
    }

    pub fn state(&self, history: &History) -> BuddyState {
        let n = history.len();
        if n < self.k() {
            BuddyState::Replay(n)
        } else if history.steps()[self.k() - 1].action == self.pinned {
            BuddyState::Rewarding
        } else {
            BuddyState::Punishing
        }
    }
}

impl Environment for BuddyEnvironment {
    fn name(&self) -> String {
        format!("buddy[{} ; pin={}]", self.script, self.pinned)
    }

    fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    fn step(&self, history: &History, action: Action) -> PerceptDist {
        match self.state(history) {
            BuddyState::Replay(n) if n + 1 < self.k() => {
                PerceptDist::point(self.script.steps()[n].percept)
            }
            BuddyState::Replay(_) if action == self.pinned => PerceptDist::point(self.heaven),
            BuddyState::Replay(_) => PerceptDist::point(self.hell),
            BuddyState::Rewarding => PerceptDist::point(self.heaven),
            BuddyState::Punishing => PerceptDist::point(self.hell),
        }
    }

    fn absorbing_reward(&self, history: &History) -> Option<Rational> {
        match self.state(history) {
            BuddyState::Replay(_) => None,
            BuddyState::Rewarding => Some(Rational::one()),
            BuddyState::Punishing => Some(Rational::zero()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use std::collections::{HashMap, HashSet};

    fn buddy() -> (Arc<Alphabet>, BuddyEnvironment) {
        let al = Arc::new(Alphabet::binary(2).unwrap());
        let script = History::parse("1:0 0:1", &al).unwrap();
        let env = BuddyEnvironment::new(al.clone(), script, Action(0)).unwrap();
        (al, env)
    }

    #[test]
    fn replays_then_rewards_pinned_action() {
        let (al, env) = buddy();
        let good = History::parse("1:0 0:1 0:1 1:1", &al).unwrap();
        assert_eq!(env.joint_prob(&good), ratio(1, 1));
        let bad = History::parse("1:0 0:1 1:0 0:0", &al).unwrap();
        assert_eq!(env.joint_prob(&bad), ratio(1, 1));
        // actions during replay do not matter, percepts do
        let other = History::parse("0:0 1:1", &al).unwrap();
        assert_eq!(env.joint_prob(&other), ratio(1, 1));
        let off = History::parse("1:1", &al).unwrap();
        assert_eq!(env.joint_prob(&off), ratio(0, 1));
        let wrong_reward = History::parse("1:0 0:1 0:0", &al).unwrap();
        assert_eq!(env.joint_prob(&wrong_reward), ratio(0, 1));
    }

    #[test]
    fn finite_state_structure() {
        let (al, env) = buddy();
        let mut seen = HashSet::new();
        let mut by_state: HashMap<(BuddyState, Action), PerceptDist> = HashMap::new();
        for h in al.histories_shorter_than(6) {
            let s = env.state(&h);
            seen.insert(s);
            for a in al.actions() {
                let d = env.step(&h, a);
                let prev = by_state.entry((s, a)).or_insert_with(|| d.clone());
                assert_eq!(*prev, d, "step must depend on state only");
            }
        }
        assert!(seen.len() <= env.state_count());
        assert_eq!(seen.len(), env.state_count());
    }
}
