use crate::rational::Rational;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid discount schedule: {0}")]
    InvalidSchedule(String),

    #[error("discount schedule is identically zero")]
    ZeroSchedule,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("percept (observation {observation}, reward {reward}) is not in the declared percept set")]
    MissingPercept { observation: u32, reward: Box<Rational> },

    #[error("history `{0}` has probability zero")]
    MeasureZeroHistory(String),

    #[error("cannot parse rational `{0}`")]
    ParseRational(String),

    #[error("cannot parse history `{0}`")]
    ParseHistory(String),

    #[error("no separating history within {0} steps")]
    NoSeparatingHistory(usize),

    #[error("buddy gap mismatch: expected {expected}, got {actual}")]
    BuddyGapMismatch {
        expected: Box<Rational>,
        actual: Box<Rational>,
    },

    #[error("cannot choose emulation threshold: on-policy value is 0 at `{0}`")]
    ThresholdSelection(String),

    #[error("schedule has no finite lifetime; exact comparison requires one")]
    NeedsFiniteLifetime,
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
