#![allow(dead_code)]

pub mod lemmas;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use wtc::logic::{desugar, free_vars, BindSpec, Environment, Formula};
use wtc::pes::{EventSet, Label, PrimeEventStructure, RawPes};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn load(name: &str) -> PrimeEventStructure {
    let path = format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"));
    wtc::frontend::parse_pes(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn term(src: &str) -> PrimeEventStructure {
    wtc::frontend::compile_term(&wtc::frontend::parse_term(src).unwrap()).unwrap()
}

/// Random structure: random forward causal pairs and random conflicts, retried until valid.
pub fn random_pes(
    rng: &mut ChaCha8Rng,
    max_events: usize,
    labels: &[&str],
    tau_weight: f64,
) -> PrimeEventStructure {
    loop {
        let n = rng.gen_range(0..=max_events);
        let mut raw = RawPes::new();
        for i in 0..n {
            let label = if rng.gen_bool(tau_weight) {
                Label::Tau
            } else {
                Label::visible(*labels.choose(rng).unwrap())
            };
            raw = raw.event(&format!("e{i}"), label);
        }
        for i in 0..n {
            for j in i + 1..n {
                match rng.gen_range(0..6) {
                    0 | 1 => raw = raw.cause(&format!("e{i}"), &format!("e{j}")),
                    2 => raw = raw.conflict(&format!("e{i}"), &format!("e{j}")),
                    _ => {}
                }
            }
        }
        if let Ok(p) = raw.validate() {
            return p;
        }
    }
}

fn subset(rng: &mut ChaCha8Rng, pool: &[&str], exclude: &str) -> Vec<String> {
    pool.iter()
        .filter(|v| **v != exclude && rng.gen_bool(0.3))
        .map(|v| v.to_string())
        .collect()
}

fn random_spec(rng: &mut ChaCha8Rng, vars: &[&str], labels: &[&str]) -> BindSpec {
    let z = *vars.choose(rng).unwrap();
    let causes = subset(rng, vars, z);
    let indep: Vec<String> = subset(rng, vars, z)
        .into_iter()
        .filter(|v| !causes.contains(v))
        .collect();
    BindSpec {
        causes,
        indep,
        label: labels.choose(rng).unwrap().to_string(),
        var: z.to_string(),
    }
}

/// Random formula of the full logic (no fixpoints) over the given variables and labels.
pub fn random_formula(
    rng: &mut ChaCha8Rng,
    depth: usize,
    vars: &[&str],
    labels: &[&str],
) -> Formula {
    if depth == 0 {
        return match rng.gen_range(0..3) {
            0 => Formula::not(Formula::True),
            _ => Formula::True,
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_formula(rng, depth - 1, vars, labels);
    match rng.gen_range(0..10) {
        0 => Formula::True,
        1 => Formula::not(sub(rng)),
        2 => Formula::and(sub(rng), sub(rng)),
        3 => Formula::or(sub(rng), sub(rng)),
        4 => Formula::bind(random_spec(rng, vars, labels), sub(rng)),
        5 => Formula::exec(vars.choose(rng).unwrap(), sub(rng)),
        6 => Formula::bind_exec(random_spec(rng, vars, labels), sub(rng)),
        7 => Formula::DualBind(random_spec(rng, vars, labels), Box::new(sub(rng))),
        8 => Formula::DualExec(vars.choose(rng).unwrap().to_string(), Box::new(sub(rng))),
        _ => {
            let a = random_spec(rng, vars, labels);
            let mut b = random_spec(rng, vars, labels);
            if b.var == a.var {
                b = BindSpec {
                    var: format!("{}'", a.var),
                    ..b
                };
            }
            Formula::step(vec![a, b], sub(rng))
        }
    }
}

/// Random environment binding each variable to a visible event with probability one half.
pub fn random_env(rng: &mut ChaCha8Rng, pes: &PrimeEventStructure, vars: &[&str]) -> Environment {
    let events: Vec<_> = pes.visible_events().iter().collect();
    let mut env = Environment::new();
    if events.is_empty() {
        return env;
    }
    for v in vars {
        if rng.gen_bool(0.5) {
            env = env.bind(v, *events.choose(rng).unwrap());
        }
    }
    env
}

/// Direct recursive reading of the satisfaction clauses, used as an oracle for the
/// set-based model checker. Every pair outside the legal pairs of a formula fails it.
pub fn naive_sat(pes: &PrimeEventStructure, c: EventSet, env: &Environment, phi: &Formula) -> bool {
    let consistent = |x: EventSet| x.iter().all(|a| x.iter().all(|b| !pes.in_conflict(a, b)));
    let image = |vars: &std::collections::BTreeSet<String>| -> EventSet {
        vars.iter().map(|v| env.get(v).expect("bound")).collect()
    };
    if !consistent(c.union(image(&free_vars(phi)))) {
        return false;
    }
    match phi {
        Formula::True => true,
        Formula::And(a, b) => naive_sat(pes, c, env, a) && naive_sat(pes, c, env, b),
        Formula::Or(a, b) => naive_sat(pes, c, env, a) || naive_sat(pes, c, env, b),
        Formula::Not(a) => !naive_sat(pes, c, env, a),
        Formula::Bind(spec, body) => {
            let mut rest = free_vars(body);
            rest.remove(&spec.var);
            let rest = image(&rest);
            pes.visible_events().iter().any(|e| {
                let concurrent = |d| !pes.leq(d, e) && !pes.leq(e, d) && !pes.in_conflict(d, e);
                !c.contains(e)
                    && c.iter().all(|d| !pes.in_conflict(d, e))
                    && rest.iter().all(|d| !pes.in_conflict(d, e))
                    && pes.label(e) == &Label::visible(spec.label.as_str())
                    && spec.causes.iter().all(|x| {
                        let d = env.get(x).unwrap();
                        d != e && pes.leq(d, e)
                    })
                    && spec.indep.iter().all(|y| concurrent(env.get(y).unwrap()))
                    && naive_sat(pes, c, &env.clone().bind(&spec.var, e), body)
            })
        }
        Formula::Exec(z, body) => {
            let e = env.get(z).unwrap();
            all_configurations(pes).into_iter().any(|d| {
                c.is_subset(d)
                    && d.difference(c).intersection(pes.visible_events()) == EventSet::singleton(e)
                    && naive_sat(pes, d, env, body)
            })
        }
        Formula::DualBind(spec, body) => !naive_sat(
            pes,
            c,
            env,
            &Formula::bind(spec.clone(), Formula::not((**body).clone())),
        ),
        Formula::DualExec(z, body) => !naive_sat(
            pes,
            c,
            env,
            &Formula::exec(z, Formula::not((**body).clone())),
        ),
        Formula::BindExec(spec, body) => naive_sat(
            pes,
            c,
            env,
            &Formula::bind(spec.clone(), Formula::exec(&spec.var, (**body).clone())),
        ),
        Formula::StepProduct(..) => naive_sat(pes, c, env, &desugar(phi)),
        Formula::Prop(..) | Formula::Mu(..) | Formula::Nu(..) => {
            panic!("no fixpoints in the oracle")
        }
    }
}

/// Configurations by brute force over all subsets.
pub fn all_configurations(pes: &PrimeEventStructure) -> Vec<EventSet> {
    let n = pes.len();
    (0u64..1 << n)
        .map(EventSet)
        .filter(|&x| {
            x.iter().all(|e| x.iter().all(|d| !pes.in_conflict(d, e)))
                && x.iter()
                    .all(|e| pes.events().all(|d| !pes.leq(d, e) || x.contains(d)))
        })
        .collect()
}
