//! The environment catalog printed by `list-zoo`.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Param {
    pub name: &'static str,
    #[serde(rename = "type")]
    pub ty: &'static str,
    pub description: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub kind: &'static str,
    pub description: &'static str,
    pub anchor: &'static str,
    pub params: Vec<Param>,
}

const fn p(name: &'static str, ty: &'static str, description: &'static str) -> Param {
    Param { name, ty, description }
}

pub fn catalog() -> Vec<Entry> {
    vec![
        Entry {
            kind: "heaven",
            description: "reward 1 forever",
            anchor: "Sec. 2 Heaven",
            params: vec![],
        },
        Entry {
            kind: "hell",
            description: "reward 0 forever",
            anchor: "Sec. 2 Hell",
            params: vec![],
        },
        Entry {
            kind: "gate",
            description: "the lucky first action leads to heaven, any other to hell",
            anchor: "Remark 7 gate",
            params: vec![p("lucky", "action", "first action that leads to heaven")],
        },
        Entry {
            kind: "trap",
            description: "the doomed first action leads to hell, any other to heaven",
            anchor: "Cor. 9 trap",
            params: vec![p("doomed", "action", "first action that leads to hell")],
        },
        Entry {
            kind: "bandit",
            description: "Bernoulli arms with rewards in {0, 1}",
            anchor: "Sec. 6.1 bandit",
            params: vec![p("means", "list of rationals", "one success probability per action")],
        },
        Entry {
            kind: "seqpred",
            description: "cycled bit string; observation is the bit, reward 1 for predicting it",
            anchor: "Sec. 6.1 sequence prediction",
            params: vec![p("bits", "bit string", "sequence to predict, cycled")],
        },
        Entry {
            kind: "seeded",
            description: "pseudo-random rational conditionals fixed by a seed",
            anchor: "test fixture",
            params: vec![
                p("seed", "integer", "determines every conditional"),
                p("deficit", "bool", "allow probability mass to go missing"),
            ],
        },
        Entry {
            kind: "dogmatic",
            description: "mimics the configured class on a policy, frozen at (0,0) after a deviation",
            anchor: "Thm. 2 dogmatic",
            params: vec![p("policy", "policy", "the protected policy")],
        },
        Entry {
            kind: "buddy",
            description: "replays a script, then rewards the pinned action forever",
            anchor: "Thm. 12 buddy",
            params: vec![
                p("script", "history", "percepts to replay, `a:e a:e` notation"),
                p("pinned", "action", "action rewarded right after the script"),
            ],
        },
        Entry {
            kind: "mixture",
            description: "weighted mixture of other environments",
            anchor: "Eq. 1 mixture",
            params: vec![p("components", "list of {weight, env}", "weights positive, sum at most 1")],
        },
    ]
}
