//! One runner per experiment kind. Each returns its checks, tidy rows and
//! a JSON details block; nothing here depends on wall-clock time or thread
//! scheduling, so reports are reproducible for any `--jobs`.

use priorlab::certify::{self, Interval, Outcome};
use priorlab::env::GateEnvironment;
use priorlab::intelligence::{
    intelligence_gap_experiment, intelligence_report, stupidity_experiment, truncate_policy, upsilon,
};
use priorlab::mixture::mix;
use priorlab::pareto::{
    dominance_sweep, find_separating_history, first_divergence, verify_buddy_gap,
    verify_pareto_triviality, DominanceMatrix, PolicySpace,
};
use priorlab::planner::optimal_policy;
use priorlab::policy::{on_policy_histories, TabularPolicy};
use priorlab::priors::{make_dogmatic_mixture, make_emulation_mixture, make_indifference_mixture};
use priorlab::rational::{self, int, Rational};
use priorlab::env::BuddyEnvironment;
use priorlab::{Action, Alphabet, Environment, EnvRef, Error, History, Planner, Policy, PolicyRef};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;
use std::sync::Arc;

use crate::config::{EnvSpec, ExperimentSpec, PolicySpec};
use crate::report::{Check, Row, Table};
use crate::setup::{parse_rational, Setup};
use crate::RunError;

#[derive(Default)]
pub struct Findings {
    pub checks: Vec<Check>,
    pub rows: Vec<Row>,
    pub details: serde_json::Value,
    pub tables: Vec<Table>,
}

fn core(field: &str) -> impl Fn(Error) -> RunError + '_ {
    move |e| RunError::Core {
        context: field.to_string(),
        error: e,
    }
}

fn actions(list: &[Action]) -> Vec<u16> {
    list.iter().map(|a| a.0).collect()
}

/// A uniformly random deterministic table on histories shorter than `depth`.
pub fn random_tabular(alphabet: &Alphabet, depth: usize, rng: &mut ChaCha8Rng, name: String) -> TabularPolicy {
    let n = alphabet.num_actions() as u16;
    let table = alphabet
        .histories_shorter_than(depth)
        .into_iter()
        .map(|h| (h, Action(rng.gen_range(0..n))))
        .collect();
    TabularPolicy::new(name, table, Action(0))
}

pub fn run(setup: &Setup, spec: &ExperimentSpec) -> Result<Findings, RunError> {
    match spec {
        ExperimentSpec::Value { policy } => value(setup, policy),
        ExperimentSpec::Optimal {} => optimal(setup),
        ExperimentSpec::Dogmatic { policy, eps } => dogmatic(setup, policy, eps),
        ExperimentSpec::Indifference { m } => indifference(setup, *m),
        ExperimentSpec::Emulation {
            policy,
            eps,
            test_envs,
        } => emulation(setup, policy, eps, test_envs),
        ExperimentSpec::Intelligence {
            policies,
            samples,
            depth,
            truncate,
        } => intelligence(setup, policies, *samples, *depth, *truncate),
        ExperimentSpec::Gap {
            lucky,
            gate_weight,
            class_weight,
            samples,
            depth,
        } => gap(setup, *lucky, gate_weight, class_weight, *samples, *depth),
        ExperimentSpec::Stupidity { eps, policy } => stupidity(setup, eps, policy),
        ExperimentSpec::Pareto {
            depth,
            control,
            expect_control_dominated,
            buddy_gaps,
        } => pareto(setup, *depth, *control, *expect_control_dominated, *buddy_gaps),
    }
}

fn value(setup: &Setup, policy: &PolicySpec) -> Result<Findings, RunError> {
    let xi = setup.xi()?;
    let pi = setup.policy(policy, "experiment.policy")?;
    let planner = Planner::new(Arc::new(xi), setup.schedule.clone());
    let v = planner
        .value(pi.as_ref(), &History::empty(), setup.horizon)
        .map_err(core("value"))?;
    let iv = Interval::from(&v);
    let in_range = Outcome::all([
        certify::at_least(&iv, &Interval::exact(rational::zero())),
        certify::at_most(&iv, &Interval::exact(rational::one())),
    ]);
    Ok(Findings {
        checks: vec![Check::new("0 <= V <= 1", in_range, "")],
        rows: vec![Row::value("ε", format!("V[{}]", pi.name()), &v)],
        details: json!({ "policy": pi.name() }),
        tables: vec![],
    })
}

fn optimal(setup: &Setup) -> Result<Findings, RunError> {
    let xi = setup.xi()?;
    let planner = Arc::new(Planner::new(Arc::new(xi), setup.schedule.clone()));
    let root = History::empty();
    let h = setup.horizon;
    let choice = planner
        .optimal_action(&root, h, &setup.tie_break)
        .map_err(core("optimal"))?;
    let best = planner.optimal_value(&root, h).map_err(core("optimal"))?;
    let worst = planner.pessimal_value(&root, h).map_err(core("optimal"))?;
    let aixi = optimal_policy(&planner, h, setup.tie_break.clone()).map_err(core("optimal"))?;
    let attained = planner.value(&aixi, &root, h).map_err(core("optimal"))?;

    let mut rows = vec![
        Row::value("ε", "optimal value", &best),
        Row::value("ε", "pessimal value", &worst),
        Row::value("ε", "value of optimal policy", &attained),
    ];
    for (a, v) in setup.alphabet.actions().zip(&choice.action_values) {
        rows.push(Row::value("ε", format!("Q(a={a})"), v));
    }
    let mut checks = vec![Check::new(
        "pessimal value <= optimal value",
        Outcome::from_bool(worst.value <= best.value),
        "",
    )];
    // with a finite lifetime inside the horizon every look-ahead is exact,
    // so the planned policy must reproduce the root optimum exactly
    if setup.schedule.lifetime().is_some_and(|m| m <= h) {
        checks.push(Check::new(
            "optimal policy attains the optimal value",
            Outcome::from_bool(attained == best),
            "",
        ));
    }
    Ok(Findings {
        checks,
        rows,
        details: json!({
            "action": choice.action.0,
            "tie_set": actions(&choice.tie_set),
            "gap": choice.gap.to_string(),
        }),
        tables: vec![],
    })
}

fn dogmatic(setup: &Setup, policy: &PolicySpec, eps: &str) -> Result<Findings, RunError> {
    let eps = parse_rational(eps, "experiment.eps")?;
    let xi = setup.xi()?;
    let pi = setup.policy(policy, "experiment.policy")?;
    let rigged = make_dogmatic_mixture(pi.clone(), &xi, &eps).map_err(core("experiment.eps"))?;
    let dogma = rigged.len() - 1;
    let plain = Planner::new(Arc::new(xi.clone()), setup.schedule.clone());
    let planner = Planner::new(Arc::new(rigged.clone()), setup.schedule.clone());
    let h = setup.horizon;
    let ratio = int(2) / (int(1) + &eps);
    let off_cap = Interval::exact(&eps / (int(1) + &eps));
    let eps_iv = Interval::exact(eps.clone());

    let mut posterior = Vec::new();
    let mut followed = Vec::new();
    let mut off = Vec::new();
    let mut rows = Vec::new();
    let mut nodes = Vec::new();
    // posteriors down to depth `horizon`, decisions strictly above it
    for node in on_policy_histories(&xi, pi.as_ref(), h + 1) {
        let post = rigged.posterior(&node).map_err(core("dogmatic"))?;
        posterior.push(Outcome::from_bool(post.ratio(dogma) == ratio));
        if node.len() == h || setup.schedule.big_gamma(node.len() + 1) == rational::zero() {
            continue;
        }
        let mine = pi.act(&node);
        let v = plain.value(pi.as_ref(), &node, h).map_err(core("dogmatic"))?;
        let choice = planner
            .optimal_action(&node, h, &setup.tie_break)
            .map_err(core("dogmatic"))?;
        let above = certify::greater(&Interval::from(&v), &eps_iv);
        if above.holds() {
            followed.push(Outcome::from_bool(choice.tie_set == vec![mine]));
        }
        rows.push(Row::value(node.to_string(), "V[pi] in xi", &v));
        for (a, q) in setup.alphabet.actions().zip(&choice.action_values) {
            rows.push(Row::value(node.to_string(), format!("Q'(a={a})"), q));
            if a != mine {
                off.push(certify::at_most(&Interval::from(q), &off_cap));
            }
        }
        nodes.push(json!({
            "history": node.to_string(),
            "policy_action": mine.0,
            "tie_set": actions(&choice.tie_set),
            "value_exceeds_eps": above.holds(),
        }));
    }
    let count = nodes.len();
    Ok(Findings {
        checks: vec![
            Check::new(
                "dogma posterior ratio is 2/(1+eps) on every on-policy history",
                Outcome::all(posterior),
                format!("expected {ratio}"),
            ),
            Check::new(
                "optimal action is exactly the policy's where its value exceeds eps",
                Outcome::all(followed),
                "",
            ),
            Check::new(
                "off-policy action values are at most eps/(1+eps)",
                Outcome::all(off),
                format!("cap {}", off_cap.lo),
            ),
        ],
        rows,
        details: json!({ "policy": pi.name(), "decision_nodes": count, "nodes": nodes }),
        tables: vec![],
    })
}

fn indifference(setup: &Setup, m: usize) -> Result<Findings, RunError> {
    let xi = setup.xi()?;
    let ind = make_indifference_mixture(Arc::new(xi), m).map_err(core("experiment.m"))?;
    let planner = Planner::new(Arc::new(ind.clone()), setup.schedule.clone());
    let all: Vec<Action> = setup.alphabet.actions().collect();
    let mut ties = Vec::new();
    let mut rows = Vec::new();
    let mut count = 0;
    for node in setup.alphabet.histories_shorter_than(m.min(setup.horizon)) {
        if ind.joint_prob(&node) == rational::zero() {
            continue;
        }
        count += 1;
        let c = planner
            .optimal_action(&node, setup.horizon, &setup.tie_break)
            .map_err(core("indifference"))?;
        ties.push(Outcome::from_bool(c.tie_set == all));
        for (a, q) in all.iter().zip(&c.action_values) {
            rows.push(Row::value(node.to_string(), format!("Q(a={a})"), q));
        }
    }
    let lifetime_note = match setup.schedule.lifetime() {
        Some(l) if l <= m => String::new(),
        _ => format!("discount lifetime exceeds m = {m}; ties are only guaranteed within it"),
    };
    Ok(Findings {
        checks: vec![Check::new(
            "every action ties at every decision node",
            Outcome::all(ties),
            lifetime_note,
        )],
        rows,
        details: json!({ "m": m, "decision_nodes": count }),
        tables: vec![],
    })
}

fn emulation(setup: &Setup, policy: &PolicySpec, eps: &str, test_envs: &[EnvSpec]) -> Result<Findings, RunError> {
    let eps = parse_rational(eps, "experiment.eps")?;
    let xi = setup.xi()?;
    let pi = setup.policy(policy, "experiment.policy")?;
    let h = setup.horizon;
    let em = make_emulation_mixture(pi.clone(), &xi, &eps, &setup.schedule, h)
        .map_err(core("emulation"))?;
    let planner = Arc::new(Planner::new(Arc::new(em.mixture.clone()), setup.schedule.clone()));
    let aixi = optimal_policy(&planner, h, setup.tie_break.clone()).map_err(core("emulation"))?;
    let envs: Vec<EnvRef> = if test_envs.is_empty() {
        setup.class_envs()
    } else {
        test_envs
            .iter()
            .enumerate()
            .map(|(i, e)| setup.env(e, &format!("experiment.test_envs[{i}]")))
            .collect::<Result<_, _>>()?
    };
    let root = History::empty();
    let mut outcomes = Vec::new();
    let mut rows = vec![
        Row::exact("ε", "threshold eps'", &em.threshold),
        Row::exact("ε", "min on-policy value", &em.min_on_policy_value),
    ];
    for env in &envs {
        let p = Planner::new(env.clone(), setup.schedule.clone());
        let a = p.value(&aixi, &root, h).map_err(core("emulation"))?;
        let b = p.value(pi.as_ref(), &root, h).map_err(core("emulation"))?;
        outcomes.push(certify::within(&Interval::from(&a), &Interval::from(&b), &eps));
        rows.push(Row::value(env.name(), "V[optimal for emulation mixture]", &a));
        rows.push(Row::value(env.name(), format!("V[{}]", pi.name()), &b));
    }
    Ok(Findings {
        checks: vec![Check::new(
            "|V[optimal for emulation mixture] - V[pi]| < eps in every test environment",
            Outcome::all(outcomes),
            format!("{} environments", envs.len()),
        )],
        rows,
        details: json!({
            "policy": pi.name(),
            "k": em.k,
            "threshold": em.threshold.to_string(),
            "test_envs": envs.iter().map(|e| e.name()).collect::<Vec<_>>(),
        }),
        tables: vec![],
    })
}

fn policies_with_samples(
    setup: &Setup,
    specs: &[PolicySpec],
    samples: usize,
    depth: usize,
) -> Result<Vec<PolicyRef>, RunError> {
    let mut out = specs
        .iter()
        .enumerate()
        .map(|(i, p)| setup.policy(p, &format!("experiment.policies[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(setup.seed);
    for i in 0..samples {
        out.push(Arc::new(random_tabular(&setup.alphabet, depth, &mut rng, format!("sample{i}"))));
    }
    Ok(out)
}

fn intelligence(
    setup: &Setup,
    specs: &[PolicySpec],
    samples: usize,
    depth: Option<usize>,
    truncate: Option<usize>,
) -> Result<Findings, RunError> {
    let xi = setup.xi()?;
    let planner = Planner::new(Arc::new(xi), setup.schedule.clone());
    let h = setup.horizon;
    let policies = policies_with_samples(setup, specs, samples, depth.unwrap_or(h))?;
    let all: Vec<Action> = setup.alphabet.actions().collect();
    let default = setup.tie_break.choose(&all);
    let results = policies
        .par_iter()
        .map(|pi| -> Result<_, Error> {
            let report = intelligence_report(&planner, pi.as_ref(), h)?;
            let truncated = match truncate {
                Some(k) => {
                    let t = truncate_policy(pi.as_ref(), k, default, &setup.alphabet);
                    Some(upsilon(&planner, &t, h)?)
                }
                None => None,
            };
            Ok((report, truncated))
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(core("intelligence"))?;

    let mut rows = Vec::new();
    let mut bounds = Vec::new();
    let mut density = Vec::new();
    if let Some((first, _)) = results.first() {
        rows.push(Row::value("ε", "lower bound", &first.lower));
        rows.push(Row::value("ε", "upper bound", &first.upper));
    }
    for (pi, (report, truncated)) in policies.iter().zip(&results) {
        bounds.push(report.bounds_outcome());
        rows.push(Row::value(pi.name(), "intelligence", &report.upsilon));
        if let (Some(k), Some(t)) = (truncate, truncated) {
            // both values are truncated at the same horizon and the policies
            // agree on at least the first k actions, so the bound applies to
            // the truncated values exactly
            let diff = rational::abs(&(&report.upsilon.value - &t.value));
            density.push(Outcome::from_bool(diff <= setup.schedule.tail_ratio(k)));
            rows.push(Row::value(pi.name(), format!("intelligence after truncation at {k}"), t));
        }
    }
    let mut checks = vec![Check::new(
        "0 < lower <= intelligence <= upper < 1 for every policy",
        Outcome::all(bounds),
        format!("{} policies", policies.len()),
    )];
    if let Some(k) = truncate {
        checks.push(Check::new(
            format!("truncation at depth {k} moves intelligence by at most the tail weight"),
            Outcome::all(density),
            format!("bound {}", setup.schedule.tail_ratio(k)),
        ));
    }
    Ok(Findings {
        checks,
        rows,
        details: json!({ "policies": policies.len(), "samples": samples, "truncate": truncate }),
        tables: vec![],
    })
}

fn gap(
    setup: &Setup,
    lucky: u16,
    gate_weight: &str,
    class_weight: &str,
    samples: usize,
    depth: Option<usize>,
) -> Result<Findings, RunError> {
    let w_gate = parse_rational(gate_weight, "experiment.gate_weight")?;
    let w_class = parse_rational(class_weight, "experiment.class_weight")?;
    let lucky = setup
        .alphabet
        .check_action(Action(lucky))
        .map_err(core("experiment.lucky"))?;
    let xi = setup.xi()?;
    let h = setup.horizon;
    let report = intelligence_gap_experiment(lucky, &w_gate, &w_class, &xi, &setup.schedule, h)
        .map_err(core("gap"))?;
    let mut rows = Vec::new();
    for r in &report.ranges {
        rows.push(Row::value(format!("first action {}", r.action), "lowest intelligence", &r.lowest));
        rows.push(Row::value(format!("first action {}", r.action), "highest intelligence", &r.highest));
    }
    let mut checks = vec![Check::new(
        "no policy scores inside [class_weight, gate_weight]",
        report.empty_interval,
        if report.gap_exists {
            "exhaustive over first actions".to_string()
        } else {
            "no gap: gate weight does not exceed class weight".to_string()
        },
    )];

    if samples > 0 {
        let gate = GateEnvironment::lucky(setup.alphabet.clone(), lucky).map_err(core("gap"))?;
        let rigged = mix(&w_class, &xi, &w_gate, Arc::new(gate)).map_err(core("gap"))?;
        let planner = Planner::new(Arc::new(rigged), setup.schedule.clone());
        let policies = policies_with_samples(setup, &[], samples, depth.unwrap_or(h))?;
        let (lo, hi) = (Interval::exact(w_class.clone()), Interval::exact(w_gate.clone()));
        let mut outside = Vec::new();
        for pi in &policies {
            let v = upsilon(&planner, pi.as_ref(), h).map_err(core("gap"))?;
            let iv = Interval::from(&v);
            let above = certify::greater(&iv, &hi);
            outside.push(if above.holds() { above } else { certify::less(&iv, &lo) });
            rows.push(Row::value(pi.name(), "intelligence", &v));
        }
        checks.push(Check::new(
            "every sampled policy scores above gate_weight or below class_weight",
            Outcome::all(outside),
            format!("{samples} samples"),
        ));
    }
    Ok(Findings {
        checks,
        rows,
        details: json!({
            "lucky": lucky.0,
            "gate_weight": w_gate.to_string(),
            "class_weight": w_class.to_string(),
            "gap_exists": report.gap_exists,
        }),
        tables: vec![],
    })
}

fn stupidity(setup: &Setup, eps: &str, policy: &PolicySpec) -> Result<Findings, RunError> {
    let eps = parse_rational(eps, "experiment.eps")?;
    let xi = setup.xi()?;
    let pi = setup.policy(policy, "experiment.policy")?;
    let r = stupidity_experiment(&xi, &eps, &setup.schedule, setup.horizon, pi, &setup.tie_break)
        .map_err(core("stupidity"))?;
    let rows = vec![
        Row::value("class", "lower bound", &r.lower),
        Row::value("class", "near-pessimal tabular policy", &r.near_pessimal),
        Row::value("class", "optimal policy of the stupid mixture", &r.stupid_aixi),
        Row::value("smart mixture", format!("V[{}]", r.smart_policy), &r.smart_value),
        Row::value("smart mixture", "upper bound", &r.smart_upper),
        Row::value("adversarial gate mixture", "optimal policy of the class", &r.rigged_aixi),
        Row::value("adversarial gate mixture", "upper bound", &r.rigged_upper),
    ];
    Ok(Findings {
        checks: vec![
            Check::new("an optimal policy scores below lower + eps", r.stupid, ""),
            Check::new("the given policy scores above upper - eps", r.smart, ""),
            Check::new(
                "the class-optimal policy scores at most eps while the upper bound is at least 1 - eps",
                r.rigged,
                "",
            ),
        ],
        rows,
        details: json!({
            "eps": eps.to_string(),
            "truncation_depth": r.truncation_depth,
            "stupid_k": r.stupid_k,
            "stupid_threshold": r.stupid_threshold.to_string(),
            "aixi_first_action": r.aixi_first_action.0,
        }),
        tables: vec![],
    })
}

fn dominance_table(name: &str, m: &DominanceMatrix) -> Table {
    let n = m.outcomes.len();
    let mut header = vec!["dominator\\dominated".to_string()];
    header.extend((0..n).map(|j| format!("p{j}")));
    Table {
        name: name.to_string(),
        header,
        rows: (0..n)
            .map(|i| {
                std::iter::once(format!("p{i}"))
                    .chain(m.outcomes[i].iter().map(|o| o.as_str().to_string()))
                    .collect()
            })
            .collect(),
    }
}

/// Buddy gap for one ordered pair: None when the two policies never
/// diverge on a history both can produce.
fn pair_gap(
    space: &PolicySpace,
    i: u64,
    j: u64,
    setup: &Setup,
) -> Result<Option<(String, usize, Rational)>, Error> {
    let (pi, tilde) = (space.policy(i), space.policy(j));
    let Some(div) = first_divergence(&pi, &tilde, &setup.alphabet, space.depth()) else {
        return Ok(None);
    };
    let rho: EnvRef = Arc::new(BuddyEnvironment::new(setup.alphabet.clone(), div.clone(), tilde.act(&div))?);
    let sep = find_separating_history(&pi, &tilde, rho, &setup.schedule, space.depth() + 1)?;
    let gap = verify_buddy_gap(&pi, &tilde, &sep, setup.alphabet.clone(), &setup.schedule)?;
    Ok(Some((sep.history.to_string(), sep.k, gap)))
}

fn pareto(
    setup: &Setup,
    depth: usize,
    control: bool,
    expect_control_dominated: bool,
    buddy_gaps: bool,
) -> Result<Findings, RunError> {
    let space = PolicySpace::new(setup.alphabet.clone(), depth).map_err(core("experiment.depth"))?;
    let class = setup.class_envs();
    let mut checks = Vec::new();
    let mut tables = Vec::new();
    let mut rows = Vec::new();
    let mut details = serde_json::Map::new();
    details.insert("policies".into(), json!(space.len()));
    details.insert(
        "history_order".into(),
        json!("canonical: per step, action index then percept index"),
    );

    match setup.schedule.lifetime() {
        Some(lifetime) => {
            let report = verify_pareto_triviality(&class, &space, &setup.schedule)
                .map_err(core("pareto"))?;
            let dominated: Vec<usize> = report.matrix.dominated_policies();
            checks.push(Check::new(
                "every policy is Pareto optimal once buddies are added",
                Outcome::from_bool(report.all_pareto_optimal()),
                format!("{} buddies, {} dominated", report.buddy_count, dominated.len()),
            ));
            for (i, vals) in report.matrix.values.iter().enumerate() {
                for (env, v) in report.matrix.class_names.iter().zip(vals) {
                    rows.push(Row::value(format!("p{i}"), format!("V in {env}"), v));
                }
            }
            tables.push(dominance_table("dominance", &report.matrix));
            details.insert("lifetime".into(), json!(lifetime));
            details.insert("buddies".into(), json!(report.buddy_count));
            details.insert(
                "defenses".into(),
                json!(report
                    .defenses
                    .iter()
                    .map(|d| json!({
                        "policy": d.policy,
                        "attempted_dominator": d.dominator,
                        "defender": d.defender,
                    }))
                    .collect::<Vec<_>>()),
            );
            if control {
                let m = dominance_sweep(&class, &space, &setup.schedule, lifetime)
                    .map_err(core("pareto"))?;
                let dominated = m.dominated_policies();
                details.insert("control_dominated".into(), json!(dominated));
                tables.push(dominance_table("dominance_control", &m));
                if expect_control_dominated {
                    checks.push(Check::new(
                        "without buddies some policy is dominated",
                        Outcome::from_bool(!dominated.is_empty()),
                        format!("{} dominated", dominated.len()),
                    ));
                }
            }
        }
        None => {
            details.insert(
                "triviality".into(),
                json!("skipped: exhaustive dominance needs a finite lifetime"),
            );
        }
    }

    if buddy_gaps {
        let n = space.len();
        let pairs: Vec<(u64, u64)> = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        let results: Vec<_> = pairs
            .par_iter()
            .map(|&(i, j)| pair_gap(&space, i, j, setup))
            .collect();
        let mut outcomes = Vec::new();
        let mut table_rows = Vec::new();
        let mut verified = 0usize;
        for (&(i, j), r) in pairs.iter().zip(results) {
            match r {
                Ok(Some((h, k, gap))) => {
                    verified += 1;
                    outcomes.push(Outcome::HoldsExactly);
                    table_rows.push(vec![
                        format!("p{i}"),
                        format!("p{j}"),
                        h,
                        k.to_string(),
                        gap.to_string(),
                        setup.schedule.big_gamma(k).to_string(),
                    ]);
                }
                Ok(None) => {}
                Err(Error::BuddyGapMismatch { expected, actual }) => {
                    outcomes.push(Outcome::Falsified);
                    table_rows.push(vec![
                        format!("p{i}"),
                        format!("p{j}"),
                        String::new(),
                        String::new(),
                        actual.to_string(),
                        expected.to_string(),
                    ]);
                }
                Err(e) => return Err(core("pareto buddy gaps")(e)),
            }
        }
        checks.push(Check::new(
            "buddy gap equals the tail weight at k for every diverging pair",
            Outcome::all(outcomes),
            format!("{verified} of {} ordered pairs diverge", pairs.len()),
        ));
        details.insert("buddy_gap_pairs".into(), json!(verified));
        tables.push(Table {
            name: "buddy_gaps".into(),
            header: ["pi", "pi_tilde", "separating_history", "k", "gap", "tail_weight"]
                .map(String::from)
                .to_vec(),
            rows: table_rows,
        });
    }

    Ok(Findings {
        checks,
        rows,
        details: serde_json::Value::Object(details),
        tables,
    })
}
