//! Randomised checks of the logic lemmas, shared by the logic and acceptance targets.

use rand::seq::SliceRandom;
use rand::Rng;

use wtc::logic::{free_vars, pomset_formula, Environment, Formula, ModelChecker};
use wtc::pes::{EventSet, PrimeEventStructure};
use wtc::pomset::{all_isomorphisms, induced_pomset};

use super::{all_configurations, naive_sat, random_env, random_formula, random_pes, rng};

const VARS: [&str; 3] = ["x", "y", "z"];
const LABELS: [&str; 2] = ["a", "b"];

#[derive(Debug, Default)]
pub struct Tally {
    pub cases: usize,
    /// Cases on which the checked side of the property held; guards against vacuity.
    pub positive: usize,
    pub failures: Vec<String>,
}

impl Tally {
    fn fail(&mut self, msg: String) {
        if self.failures.len() < 10 {
            self.failures.push(msg);
        }
    }
}

fn consistent(pes: &PrimeEventStructure, x: EventSet) -> bool {
    x.iter().all(|a| x.iter().all(|b| !pes.in_conflict(a, b)))
}

fn env_image(env: &Environment, vars: impl IntoIterator<Item = String>) -> EventSet {
    vars.into_iter().filter_map(|v| env.get(&v)).collect()
}

fn full_env(
    rng: &mut rand_chacha::ChaCha8Rng,
    pes: &PrimeEventStructure,
    vars: &[&str],
) -> Option<Environment> {
    let visible: Vec<_> = pes.visible_events().iter().collect();
    if visible.is_empty() {
        return None;
    }
    Some(vars.iter().fold(Environment::new(), |env, v| {
        env.bind(v, *visible.choose(rng).unwrap())
    }))
}

/// The set-based checker agrees with the direct clauses on random cases.
pub fn checker_matches_clauses(n: usize, seed: u64) -> Tally {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    while t.cases < n {
        let pes = random_pes(&mut rng, 4, &LABELS, 0.3);
        let Some(env) = full_env(&mut rng, &pes, &VARS) else {
            continue;
        };
        let depth = rng.gen_range(1..=4);
        let phi = random_formula(&mut rng, depth, &VARS, &LABELS);
        let configs = all_configurations(&pes);
        let c = *configs.choose(&mut rng).unwrap();
        let mc = ModelChecker::new(&pes);
        let got = mc
            .satisfies(pes.configuration(c).unwrap(), &env, &phi)
            .unwrap();
        let want = naive_sat(&pes, c, &env, &phi);
        t.cases += 1;
        t.positive += want as usize;
        if got != want {
            t.fail(format!(
                "{phi} at {} under {:?}: checker {got}, clauses {want}",
                pes.describe_set(c),
                env
            ));
        }
    }
    t
}

/// Negation: on legal pairs exactly one of `phi` and `!phi` holds.
pub fn negation(n: usize, seed: u64) -> Tally {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    while t.cases < n {
        let pes = random_pes(&mut rng, 4, &LABELS, 0.3);
        let Some(env) = full_env(&mut rng, &pes, &VARS) else {
            continue;
        };
        let depth = rng.gen_range(1..=4);
        let phi = random_formula(&mut rng, depth, &VARS, &LABELS);
        let c = *all_configurations(&pes).choose(&mut rng).unwrap();
        if !consistent(&pes, c.union(env_image(&env, free_vars(&phi)))) {
            continue;
        }
        let mc = ModelChecker::new(&pes);
        let conf = pes.configuration(c).unwrap();
        let pos = mc.satisfies(conf, &env, &phi).unwrap();
        let neg = mc
            .satisfies(conf, &env, &Formula::not(phi.clone()))
            .unwrap();
        t.cases += 1;
        t.positive += pos as usize;
        if pos == neg {
            t.fail(format!(
                "{phi} at {}: phi {pos}, !phi {neg}",
                pes.describe_set(c)
            ));
        }
    }
    t
}

/// Denotations contain legal pairs only, over exactly the free variables.
pub fn denotations_are_legal(n: usize, seed: u64) -> Tally {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    while t.cases < n {
        let pes = random_pes(&mut rng, 4, &LABELS, 0.3);
        let depth = rng.gen_range(1..=4);
        let phi = random_formula(&mut rng, depth, &VARS, &LABELS);
        let d = ModelChecker::new(&pes).denotation(&phi).unwrap();
        t.cases += 1;
        t.positive += (!d.is_empty()) as usize;
        let fv: Vec<String> = free_vars(&phi).into_iter().collect();
        if d.vars() != fv.as_slice() {
            t.fail(format!(
                "{phi}: denotation over {:?}, free variables {fv:?}",
                d.vars()
            ));
        }
        for pair in d.pairs() {
            let x = pair.config.events().union(pair.env.image());
            if !pes.is_configuration(pair.config.events()) || !consistent(&pes, x) {
                t.fail(format!(
                    "{phi}: illegal pair at {}",
                    pes.describe_set(pair.config.events())
                ));
            }
        }
    }
    t
}

/// Rebinding variables outside the free variables does not change satisfaction.
pub fn environment_irrelevance(n: usize, seed: u64) -> Tally {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    let extra = ["u", "w"];
    while t.cases < n {
        let pes = random_pes(&mut rng, 4, &LABELS, 0.3);
        let Some(env) = full_env(&mut rng, &pes, &VARS) else {
            continue;
        };
        let depth = rng.gen_range(1..=4);
        let phi = random_formula(&mut rng, depth, &VARS, &LABELS);
        let c = *all_configurations(&pes).choose(&mut rng).unwrap();
        let fv = free_vars(&phi);
        // keep the free part, redraw every other variable
        let redraw: Vec<&str> = VARS
            .iter()
            .chain(extra.iter())
            .copied()
            .filter(|v| !fv.contains(*v))
            .collect();
        let mut other = env.restrict(fv.iter());
        for (v, e) in random_env(&mut rng, &pes, &redraw).0 {
            other = other.bind(&v, e);
        }
        let mc = ModelChecker::new(&pes);
        let conf = pes.configuration(c).unwrap();
        let a = mc.satisfies(conf, &env, &phi).unwrap();
        let b = mc.satisfies(conf, &other, &phi).unwrap();
        t.cases += 1;
        t.positive += a as usize;
        if a != b {
            t.fail(format!(
                "{phi} at {}: {:?} gives {a}, {:?} gives {b}",
                pes.describe_set(c),
                env,
                other
            ));
        }
    }
    t
}

/// A pomset diamond holds iff some weak pomset move realises the pomset, under some
/// isomorphism, and the body holds after it with the bound events.
pub fn pomset_diamond(n: usize, seed: u64) -> Tally {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    while t.cases < n {
        let pes = random_pes(&mut rng, 4, &LABELS, 0.35);
        let configs = all_configurations(&pes);
        let c = *configs.choose(&mut rng).unwrap();
        let moves: Vec<EventSet> = configs
            .iter()
            .filter(|&&d| c.is_subset(d))
            .map(|&d| d.difference(c).intersection(pes.visible_events()))
            .filter(|x| !x.is_empty())
            .collect();
        // mostly pomsets that occur, sometimes one from elsewhere
        let p = if !moves.is_empty() && rng.gen_bool(0.7) {
            induced_pomset(&pes, *moves.choose(&mut rng).unwrap()).unwrap()
        } else {
            let other = random_pes(&mut rng, 3, &LABELS, 0.0);
            if other.visible_events().is_empty() {
                continue;
            }
            let top = all_configurations(&other)
                .into_iter()
                .max_by_key(|c| c.len())
                .unwrap();
            induced_pomset(&other, top.intersection(other.visible_events())).unwrap()
        };
        let zs: Vec<String> = (1..=p.len()).map(|i| format!("z{i}")).collect();
        let mut vars: Vec<&str> = zs.iter().map(|s| s.as_str()).collect();
        vars.push("x");
        let depth = rng.gen_range(0..=2);
        let psi = random_formula(&mut rng, depth, &vars, &LABELS);
        let env = match full_env(&mut rng, &pes, &["x"]) {
            Some(env) => env,
            None if !free_vars(&psi).contains("x") => Environment::new(),
            None => continue,
        };
        let phi = pomset_formula(&p, psi.clone());
        let lhs = ModelChecker::new(&pes)
            .satisfies(pes.configuration(c).unwrap(), &env, &phi)
            .unwrap();
        let legal = consistent(&pes, c.union(env_image(&env, free_vars(&phi))));
        let rhs = legal
            && configs.iter().filter(|&&d| c.is_subset(d)).any(|&d| {
                let x = d.difference(c).intersection(pes.visible_events());
                let q = induced_pomset(&pes, x).unwrap();
                all_isomorphisms(&p, &q).into_iter().any(|g| {
                    let bound = p
                        .carrier()
                        .iter()
                        .enumerate()
                        .fold(env.clone(), |acc, (i, &e)| {
                            acc.bind(&zs[i], g.get(e).unwrap())
                        });
                    naive_sat(&pes, d, &bound, &psi)
                })
            });
        t.cases += 1;
        t.positive += lhs as usize;
        if lhs != rhs {
            t.fail(format!(
                "{phi} at {}: formula {lhs}, moves {rhs}",
                pes.describe_set(c)
            ));
        }
    }
    t
}
