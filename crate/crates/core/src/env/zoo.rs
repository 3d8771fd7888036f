use super::{Environment, PerceptDist};
use crate::error::{Error, Result};
use crate::history::{Action, Alphabet, History, PerceptId};
use crate::rational::Rational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn reward_percepts(alphabet: &Alphabet) -> Result<(PerceptId, PerceptId)> {
    let hell = alphabet.require(0, &Rational::zero())?;
    let heaven = alphabet.require(0, &Rational::one())?;
    Ok((hell, heaven))
}

/// Emits the same percept with probability 1 forever.
#[derive(Clone, Debug)]
pub struct ConstantEnvironment {
    name: String,
    alphabet: Arc<Alphabet>,
    percept: PerceptId,
}

impl ConstantEnvironment {
    /// Reward 1 forever.
    pub fn heaven(alphabet: Arc<Alphabet>) -> Result<Self> {
        let heaven = alphabet.require(0, &Rational::one())?;
        Ok(Self {
            name: "heaven".into(),
            alphabet,
            percept: heaven,
        })
    }

    /// Reward 0 forever.
    pub fn hell(alphabet: Arc<Alphabet>) -> Result<Self> {
        let hell = alphabet.require(0, &Rational::zero())?;
        Ok(Self {
            name: "hell".into(),
            alphabet,
            percept: hell,
        })
    }
}

impl Environment for ConstantEnvironment {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    fn step(&self, _history: &History, _action: Action) -> PerceptDist {
        PerceptDist::point(self.percept)
    }

    fn absorbing_reward(&self, _history: &History) -> Option<Rational> {
        Some(self.alphabet.reward(self.percept).clone())
    }
}

/// The first action decides between heaven and hell, including the reward
/// for step 1 itself.
#[derive(Clone, Debug)]
pub struct GateEnvironment {
    name: String,
    alphabet: Arc<Alphabet>,
    heaven_actions: Vec<bool>,
    hell: PerceptId,
    heaven: PerceptId,
}

impl GateEnvironment {
    /// `lucky` leads to heaven, every other first action to hell.
    pub fn lucky(alphabet: Arc<Alphabet>, lucky: Action) -> Result<Self> {
        alphabet.check_action(lucky)?;
        let heaven_actions = alphabet.actions().map(|a| a == lucky).collect();
        Self::build(format!("gate(lucky={lucky})"), alphabet, heaven_actions)
    }

    /// `doomed` leads to hell, every other first action to heaven.
    pub fn trap(alphabet: Arc<Alphabet>, doomed: Action) -> Result<Self> {
        alphabet.check_action(doomed)?;
        let heaven_actions = alphabet.actions().map(|a| a != doomed).collect();
        Self::build(format!("trap(doomed={doomed})"), alphabet, heaven_actions)
    }

    fn build(name: String, alphabet: Arc<Alphabet>, heaven_actions: Vec<bool>) -> Result<Self> {
        let (hell, heaven) = reward_percepts(&alphabet)?;
        Ok(Self {
            name,
            alphabet,
            heaven_actions,
            hell,
            heaven,
        })
    }

    pub fn leads_to_heaven(&self, first: Action) -> bool {
        self.heaven_actions[first.index()]
    }

    fn outcome(&self, first: Action) -> PerceptId {
        if self.leads_to_heaven(first) {
            self.heaven
        } else {
            self.hell
        }
    }
}

impl Environment for GateEnvironment {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    fn step(&self, history: &History, action: Action) -> PerceptDist {
        let first = history.steps().first().map_or(action, |s| s.action);
        PerceptDist::point(self.outcome(first))
    }

    fn absorbing_reward(&self, history: &History) -> Option<Rational> {
        let first = history.steps().first()?.action;
        Some(self.alphabet.reward(self.outcome(first)).clone())
    }
}

/// Bernoulli rewards per arm over {(0,0), (0,1)}; one arm per action.
#[derive(Clone, Debug)]
pub struct BernoulliBandit {
    alphabet: Arc<Alphabet>,
    means: Vec<Rational>,
    lose: PerceptId,
    win: PerceptId,
}

impl BernoulliBandit {
    pub fn new(alphabet: Arc<Alphabet>, means: Vec<Rational>) -> Result<Self> {
        if means.len() != alphabet.num_actions() {
            return Err(Error::param(
                "means",
                format!(
                    "{} arm means for {} actions",
                    means.len(),
                    alphabet.num_actions()
                ),
            ));
        }
        if let Some(m) = means
            .iter()
            .find(|m| **m < Rational::zero() || **m > Rational::one())
        {
            return Err(Error::param("means", format!("{m} is not in [0, 1]")));
        }
        let (lose, win) = reward_percepts(&alphabet)?;
        Ok(Self {
            alphabet,
            means,
            lose,
            win,
        })
    }

    pub fn means(&self) -> &[Rational] {
        &self.means
    }
}

impl Environment for BernoulliBandit {
    fn name(&self) -> String {
        let means: Vec<String> = self.means.iter().map(|m| m.to_string()).collect();
        format!("bandit({})", means.join(", "))
    }

    fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    fn step(&self, _history: &History, action: Action) -> PerceptDist {
        let mean = &self.means[action.index()];
        PerceptDist::from_entries([
            (self.win, mean.clone()),
            (self.lose, Rational::one() - mean),
        ])
    }
}

/// Predict the next bit of a cyclic sequence: the observation reveals the
/// bit, the reward is 1 iff the action equalled it.
#[derive(Clone, Debug)]
pub struct SequencePrediction {
    alphabet: Arc<Alphabet>,
    bits: Vec<u8>,
    // percepts[bit][correct]
    percepts: [[PerceptId; 2]; 2],
}

impl SequencePrediction {
    pub fn new(alphabet: Arc<Alphabet>, bits: Vec<u8>) -> Result<Self> {
        if alphabet.num_actions() != 2 {
            return Err(Error::param(
                "actions",
                "sequence prediction needs exactly two actions",
            ));
        }
        if bits.is_empty() || bits.iter().any(|b| *b > 1) {
            return Err(Error::param("bits", "must be a nonempty string of 0s and 1s"));
        }
        let mut percepts = [[PerceptId(0); 2]; 2];
        for bit in 0..2u32 {
            percepts[bit as usize][0] = alphabet.require(bit, &Rational::zero())?;
            percepts[bit as usize][1] = alphabet.require(bit, &Rational::one())?;
        }
        Ok(Self {
            alphabet,
            bits,
            percepts,
        })
    }

    /// The bit revealed at (1-based) step t.
    pub fn bit_at(&self, t: usize) -> u8 {
        self.bits[(t - 1) % self.bits.len()]
    }
}

impl Environment for SequencePrediction {
    fn name(&self) -> String {
        let s: String = self.bits.iter().map(|b| char::from(b'0' + b)).collect();
        format!("seqpred({s})")
    }

    fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    fn step(&self, history: &History, action: Action) -> PerceptDist {
        let bit = self.bit_at(history.len() + 1);
        let correct = action.0 == bit as u16;
        PerceptDist::point(self.percepts[bit as usize][correct as usize])
    }
}

/// Pseudo-random conditionals fixed by a seed: every (history, action)
/// gets its own small-denominator distribution, optionally with deficit.
#[derive(Clone, Debug)]
pub struct SeededEnvironment {
    alphabet: Arc<Alphabet>,
    seed: u64,
    deficit: bool,
}

impl SeededEnvironment {
    pub fn new(alphabet: Arc<Alphabet>, seed: u64, deficit: bool) -> Self {
        Self {
            alphabet,
            seed,
            deficit,
        }
    }

    fn key(&self, history: &History, action: Action) -> u64 {
        // FNV-1a over the canonical encoding
        let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ self.seed;
        let mut feed = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        for s in history.steps() {
            feed(s.action.0 as u64);
            feed(s.percept.0 as u64 | 1 << 32);
        }
        feed(action.0 as u64 | 2 << 32);
        h
    }
}

impl Environment for SeededEnvironment {
    fn name(&self) -> String {
        if self.deficit {
            format!("seeded({}, deficit)", self.seed)
        } else {
            format!("seeded({})", self.seed)
        }
    }

    fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    fn step(&self, history: &History, action: Action) -> PerceptDist {
        let mut rng = ChaCha8Rng::seed_from_u64(self.key(history, action));
        let mut weights: Vec<i64> = self
            .alphabet
            .percept_ids()
            .map(|_| rng.gen_range(0..4))
            .collect();
        if weights.iter().all(|w| *w == 0) {
            let n = weights.len();
            weights[rng.gen_range(0..n)] = 1;
        }
        let lost = if self.deficit { rng.gen_range(0..3) } else { 0 };
        let total: i64 = weights.iter().sum::<i64>() + lost;
        PerceptDist::from_entries(
            self.alphabet
                .percept_ids()
                .zip(weights)
                .map(|(e, w)| (e, crate::rational::ratio(w, total))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn bin() -> Arc<Alphabet> {
        Arc::new(Alphabet::binary(2).unwrap())
    }

    #[test]
    fn heaven_and_hell() {
        let al = bin();
        let heaven = ConstantEnvironment::heaven(al.clone()).unwrap();
        let hell = ConstantEnvironment::hell(al.clone()).unwrap();
        let h = History::empty();
        assert_eq!(heaven.step(&h, Action(1)), PerceptDist::point(PerceptId(1)));
        assert_eq!(hell.step(&h, Action(0)), PerceptDist::point(PerceptId(0)));
        let one = h.extended(Action(0), PerceptId(1));
        assert_eq!(heaven.joint_prob(&one), ratio(1, 1));
        assert_eq!(heaven.joint_prob(&History::empty()), ratio(1, 1));
    }

    #[test]
    fn gate_routes_on_first_action() {
        let al = bin();
        let gate = GateEnvironment::lucky(al.clone(), Action(1)).unwrap();
        let h = History::empty();
        assert_eq!(gate.step(&h, Action(1)), PerceptDist::point(PerceptId(1)));
        assert_eq!(gate.step(&h, Action(0)), PerceptDist::point(PerceptId(0)));
        let lucky = h.extended(Action(1), PerceptId(1));
        assert_eq!(gate.step(&lucky, Action(0)), PerceptDist::point(PerceptId(1)));
        assert_eq!(gate.absorbing_reward(&lucky), Some(ratio(1, 1)));
        assert_eq!(gate.absorbing_reward(&h), None);
        let trap = GateEnvironment::trap(al, Action(1)).unwrap();
        assert!(!trap.leads_to_heaven(Action(1)));
        assert!(trap.leads_to_heaven(Action(0)));
    }

    #[test]
    fn bandit_validation() {
        let al = bin();
        assert!(BernoulliBandit::new(al.clone(), vec![ratio(1, 2)]).is_err());
        assert!(BernoulliBandit::new(al.clone(), vec![ratio(1, 2), ratio(5, 4)]).is_err());
        let b = BernoulliBandit::new(al, vec![ratio(3, 4), ratio(1, 4)]).unwrap();
        let d = b.step(&History::empty(), Action(0));
        assert_eq!(d.prob(PerceptId(1)), ratio(3, 4));
        assert_eq!(d.mass(), ratio(1, 1));
    }

    #[test]
    fn missing_percepts_are_reported() {
        let al = Arc::new(
            Alphabet::new(2, vec![crate::Percept::new(0, ratio(1, 2))]).unwrap(),
        );
        assert!(matches!(
            ConstantEnvironment::heaven(al),
            Err(Error::MissingPercept { .. })
        ));
    }

    #[test]
    fn fair_coin_observations_two_steps() {
        // observation is a fair coin regardless of action
        let al = Arc::new(
            Alphabet::new(
                2,
                vec![
                    crate::Percept::new(0, Rational::zero()),
                    crate::Percept::new(1, Rational::zero()),
                ],
            )
            .unwrap(),
        );
        let coin = BernoulliBandit {
            alphabet: al.clone(),
            means: vec![ratio(1, 2), ratio(1, 2)],
            lose: PerceptId(0),
            win: PerceptId(1),
        };
        let h = History::empty()
            .extended(Action(0), PerceptId(1))
            .extended(Action(1), PerceptId(0));
        assert_eq!(coin.joint_prob(&h), ratio(1, 4));
    }

    #[test]
    fn seeded_is_deterministic_semimeasure() {
        let al = bin();
        let env = SeededEnvironment::new(al.clone(), 7, true);
        for h in al.histories_shorter_than(3) {
            for a in al.actions() {
                let d = env.step(&h, a);
                assert!(d.is_semimeasure());
                assert_eq!(d, env.step(&h, a));
            }
        }
    }

    #[test]
    fn sequence_prediction_rewards() {
        let al = Arc::new(
            Alphabet::new(
                2,
                (0..2)
                    .flat_map(|o| [(o, 0), (o, 1)])
                    .map(|(o, r)| crate::Percept::new(o, ratio(r, 1)))
                    .collect(),
            )
            .unwrap(),
        );
        let env = SequencePrediction::new(al.clone(), vec![0, 1, 1]).unwrap();
        let d = env.step(&History::empty(), Action(0));
        assert_eq!(al.percept(d.iter().next().unwrap().0.to_owned()).reward, ratio(1, 1));
        assert_eq!(env.bit_at(5), 1);
        assert!(SequencePrediction::new(al, vec![2]).is_err());
    }
}
