mod common;

use common::lemmas;
use common::{all_configurations, naive_sat, random_formula, random_pes, rng, term};
use wtc::logic::{
    bounded_logical_equiv, desugar, fragment_of, free_vars, pomset_class_member, pomset_formula,
    pomset_prefix, BindSpec, Environment, Formula, Fragment, ModelChecker,
};
use wtc::pes::Label;
use wtc::pomset::{induced_pomset, Pomset};

fn report(name: &str, t: &lemmas::Tally) {
    assert!(
        t.failures.is_empty(),
        "{name}: {} failures, first: {:#?}",
        t.failures.len(),
        t.failures
    );
    assert!(
        t.positive > 0 && t.positive < t.cases,
        "{name}: vacuous ({} of {} positive)",
        t.positive,
        t.cases
    );
}

#[test]
fn checker_agrees_with_clauses() {
    report("clauses", &lemmas::checker_matches_clauses(1500, 11));
}

#[test]
fn negation_complements_within_legal_pairs() {
    report("negation", &lemmas::negation(1000, 12));
}

#[test]
fn denotations_consist_of_legal_pairs() {
    report("legal pairs", &lemmas::denotations_are_legal(1000, 13));
}

#[test]
fn variables_outside_fv_are_irrelevant() {
    report("environment", &lemmas::environment_irrelevance(1000, 14));
}

#[test]
fn pomset_diamond_matches_weak_moves() {
    report("pomset diamond", &lemmas::pomset_diamond(1000, 15));
}

#[test]
fn conjunction_shrinks_denotations() {
    let mut rng = rng(16);
    for _ in 0..300 {
        let pes = random_pes(&mut rng, 4, &["a", "b"], 0.3);
        let phi = random_formula(&mut rng, 3, &["x", "y"], &["a", "b"]);
        let psi = random_formula(&mut rng, 3, &["x", "y"], &["a", "b"]);
        let mc = ModelChecker::new(&pes);
        let both = mc.denotation(&Formula::and(phi.clone(), psi)).unwrap();
        let one = mc.denotation(&phi).unwrap();
        for pair in both.pairs() {
            assert!(one.contains(pair.config, &pair.env), "{phi}");
        }
    }
}

#[test]
fn silent_step_hm_formulas() {
    let left = term("a.tau.b");
    let right = term("a.b");
    let phi = Formula::bind_exec(
        BindSpec::plain("a", "x"),
        Formula::bind_exec(BindSpec::new(&["x"], &[], "b", "y"), Formula::True),
    );
    for p in [&left, &right] {
        assert!(ModelChecker::new(p).holds_initially(&phi).unwrap());
    }
    // after a, b is immediately available on both sides
    let no_b = Formula::bind_exec(
        BindSpec::plain("a", "x"),
        Formula::not(Formula::bind_exec(BindSpec::plain("b", "y"), Formula::True)),
    );
    for p in [&left, &right] {
        assert!(!ModelChecker::new(p).holds_initially(&no_b).unwrap());
    }
}

#[test]
fn cause_and_independence_lists() {
    let chain = term("a.b");
    let par = term("a | b");
    let caused = Formula::bind_exec(
        BindSpec::plain("a", "x"),
        Formula::bind_exec(BindSpec::new(&["x"], &[], "b", "y"), Formula::True),
    );
    let indep = Formula::bind_exec(
        BindSpec::plain("a", "x"),
        Formula::bind_exec(BindSpec::new(&[], &["x"], "b", "y"), Formula::True),
    );
    assert!(ModelChecker::new(&chain).holds_initially(&caused).unwrap());
    assert!(!ModelChecker::new(&chain).holds_initially(&indep).unwrap());
    assert!(!ModelChecker::new(&par).holds_initially(&caused).unwrap());
    assert!(ModelChecker::new(&par).holds_initially(&indep).unwrap());
}

#[test]
fn open_formula_errors() {
    let p = term("a");
    let mc = ModelChecker::new(&p);
    let open = Formula::exec("x", Formula::True);
    assert!(mc.holds_initially(&open).is_err());
    let e = p.event_by_name("e1").unwrap();
    let env = Environment::new().bind("x", e);
    assert!(mc
        .satisfies(wtc::pes::Configuration::EMPTY, &env, &open)
        .unwrap());
}

#[test]
fn pomset_prefix_shapes() {
    let chain = Pomset::from_parts(vec![Label::visible("a"), Label::visible("b")], &[(0, 1)]);
    let prefix = pomset_prefix(&chain);
    assert_eq!(
        prefix,
        vec![
            BindSpec::plain("a", "z1"),
            BindSpec::new(&["z1"], &[], "b", "z2")
        ]
    );
    let anti = Pomset::from_parts(vec![Label::visible("a"), Label::visible("b")], &[]);
    assert_eq!(
        pomset_prefix(&anti),
        vec![
            BindSpec::plain("a", "z1"),
            BindSpec::new(&[], &["z1"], "b", "z2")
        ]
    );
    assert_eq!(
        pomset_formula(&Pomset::empty(), Formula::True),
        Formula::True
    );
    assert!(pomset_class_member(&chain, &prefix).unwrap());
    assert!(!pomset_class_member(&anti, &prefix).unwrap());
    assert!(pomset_class_member(&Pomset::empty(), &[]).unwrap());
    assert!(pomset_class_member(&chain, &[]).is_err());
}

/// Class membership against a direct reading of the clauses, over every pomset of a
/// random structure and random prefixes.
#[test]
fn class_membership_oracle() {
    let mut rng = rng(17);
    for _ in 0..300 {
        let pes = random_pes(&mut rng, 4, &["a", "b"], 0.0);
        let top = |e: &wtc::pes::PrimeEventStructure| {
            let c = all_configurations(e)
                .into_iter()
                .max_by_key(|c| c.len())
                .unwrap();
            induced_pomset(e, c).unwrap()
        };
        let p = top(&pes);
        let q = top(&random_pes(&mut rng, 4, &["a", "b"], 0.0));
        if q.len() != p.len() {
            continue;
        }
        let prefix = pomset_prefix(&q);
        let direct = prefix.iter().enumerate().all(|(i, spec)| {
            let pos = |v: &str| v[1..].parse::<usize>().unwrap() - 1;
            // prefix[i] binds the variable of some position of q; it stands for position i of p
            let at: Vec<usize> = prefix.iter().map(|s| pos(&s.var)).collect();
            let me = at.iter().position(|&k| k == pos(&spec.var)).unwrap();
            let idx = |v: &String| at.iter().position(|&k| k == pos(v)).unwrap();
            p.label_at(me) == &Label::visible(spec.label.as_str())
                && spec.causes.iter().all(|v| p.lt_at(idx(v), me))
                && spec.indep.iter().all(|v| !p.lt_at(idx(v), me))
                && i == me
        });
        assert_eq!(
            pomset_class_member(&p, &prefix).unwrap(),
            direct,
            "{p} vs {q}"
        );
    }
}

#[test]
fn derived_operators_match_their_definitions() {
    let mut rng = rng(18);
    for _ in 0..400 {
        let pes = random_pes(&mut rng, 3, &["a", "b"], 0.3);
        let phi = random_formula(&mut rng, 3, &["x", "y"], &["a", "b"]);
        let fv = free_vars(&phi);
        let visible: Vec<_> = pes.visible_events().iter().collect();
        if !fv.is_empty() && visible.is_empty() {
            continue;
        }
        let env = fv
            .iter()
            .enumerate()
            .fold(Environment::new(), |env, (i, v)| {
                env.bind(v, visible[i % visible.len()])
            });
        let mc = ModelChecker::new(&pes);
        for c in all_configurations(&pes) {
            let conf = pes.configuration(c).unwrap();
            let sugared = mc.satisfies(conf, &env, &phi).unwrap();
            assert_eq!(
                sugared,
                mc.satisfies(conf, &env, &desugar(&phi)).unwrap(),
                "{phi}"
            );
            assert_eq!(sugared, naive_sat(&pes, c, &env, &phi), "{phi}");
        }
    }
}

#[test]
fn bounded_search_examples() {
    let a = term("a");
    let b = term("b");
    let v = bounded_logical_equiv(&a, &b, Fragment::HennessyMilner, 1);
    let (sep, _) = v.separator.expect("depth one separates a from b");
    assert!(fragment_of(&sep).contains(&Fragment::HennessyMilner));
    assert!(
        !bounded_logical_equiv(&term("a.tau.b"), &term("a.b"), Fragment::HennessyMilner, 3)
            .separated()
    );
    let e = term("a | b.c");
    for f in [
        Fragment::HennessyMilner,
        Fragment::Step,
        Fragment::Pomset,
        Fragment::HistoryPreserving,
    ] {
        assert!(!bounded_logical_equiv(&e, &e, f, 2).separated());
    }
}
