use wtc::equivalence::{
    build_quotient_pes, check, check_with, distinguishing_formula, is_flat_bisimulation,
    is_hhp_bisimulation, is_hp_bisimulation, projection_relation, verify_certificate, CheckOptions,
    EquivalenceError, EquivalenceKind, Relation, Side, Witness,
};
use wtc::logic::{fragment_of, BindSpec, Formula};
use wtc::pes::{Label, PrimeEventStructure, RawPes};
use wtc::pomset::{PosetalTriple, PrefixMode};
use wtc::transition::Strength;

fn a_tau_b() -> PrimeEventStructure {
    RawPes::new()
        .event("e1", Label::visible("a"))
        .event("e2", Label::Tau)
        .event("e3", Label::visible("b"))
        .cause("e1", "e2")
        .cause("e2", "e3")
        .validate()
        .unwrap()
}

fn a_b() -> PrimeEventStructure {
    RawPes::new()
        .event("fa", Label::visible("a"))
        .event("fb", Label::visible("b"))
        .cause("fa", "fb")
        .validate()
        .unwrap()
}

fn par() -> PrimeEventStructure {
    RawPes::new()
        .event("a", Label::visible("a"))
        .event("b", Label::visible("b"))
        .validate()
        .unwrap()
}

fn interleaved() -> PrimeEventStructure {
    RawPes::new()
        .event("a1", Label::visible("a"))
        .event("b1", Label::visible("b"))
        .event("b2", Label::visible("b"))
        .event("a2", Label::visible("a"))
        .cause("a1", "b1")
        .cause("b2", "a2")
        .conflict("a1", "b2")
        .validate()
        .unwrap()
}

fn single(label: &str) -> PrimeEventStructure {
    RawPes::new()
        .event("e", Label::visible(label))
        .validate()
        .unwrap()
}

#[test]
fn silent_step_is_invisible_to_weak_relations() {
    for relation in Relation::ALL {
        let v = check(EquivalenceKind::weak(relation), &a_tau_b(), &a_b());
        assert!(v.equivalent, "{relation:?}");
        assert!(v.witness.is_some());
    }
    assert!(
        !check(
            EquivalenceKind::strong(Relation::Interleaving),
            &a_tau_b(),
            &a_b()
        )
        .equivalent
    );
}

#[test]
fn hp_witness_matches_first_events() {
    let v = check(EquivalenceKind::weak(Relation::Hp), &a_tau_b(), &a_b());
    let Some(Witness::Triples(ts)) = v.witness else {
        panic!("expected triples")
    };
    let (l, r) = (a_tau_b(), a_b());
    let e1 = l.event_by_name("e1").unwrap();
    let fa = r.event_by_name("fa").unwrap();
    assert!(ts
        .iter()
        .any(|t| t.left.events().len() == 1 && t.iso.get(e1) == Some(fa) && t.right.len() == 1));
    assert!(is_hp_bisimulation(Strength::Weak, &l, &r, &ts));
}

#[test]
fn concurrency_versus_interleaving() {
    let step = check(
        EquivalenceKind::weak(Relation::Step),
        &par(),
        &interleaved(),
    );
    assert!(!step.equivalent);
    let cert = step.certificate.expect("step certificate");
    assert_eq!(cert.satisfied_by, Side::Left);
    let expected = Formula::step(
        vec![BindSpec::plain("a", "x1"), BindSpec::plain("b", "x2")],
        Formula::True,
    );
    assert_eq!(cert.formula, expected);
    assert!(verify_certificate(&par(), &interleaved(), &cert).unwrap());
    assert!(
        check(
            EquivalenceKind::weak(Relation::Interleaving),
            &par(),
            &interleaved()
        )
        .equivalent
    );
    assert!(!check(EquivalenceKind::weak(Relation::Hp), &par(), &interleaved()).equivalent);
}

#[test]
fn distinct_labels() {
    let v = check(
        EquivalenceKind::weak(Relation::Interleaving),
        &single("a"),
        &single("b"),
    );
    let cert = distinguishing_formula(v.kind, &single("a"), &single("b"), &v)
        .unwrap()
        .unwrap();
    assert_eq!(
        cert.formula,
        Formula::bind_exec(BindSpec::plain("a", "x1"), Formula::True)
    );
    let ok = check(EquivalenceKind::weak(Relation::Pomset), &a_tau_b(), &a_b());
    assert_eq!(
        distinguishing_formula(ok.kind, &a_tau_b(), &a_b(), &ok),
        Err(EquivalenceError::NotApplicable)
    );
}

#[test]
fn certificates_live_in_their_fragment() {
    let pairs = [
        (par(), interleaved()),
        (single("a"), single("b")),
        (a_b(), par()),
    ];
    for (l, r) in &pairs {
        for relation in Relation::ALL {
            let kind = EquivalenceKind::weak(relation);
            let v = check(kind, l, r);
            if v.equivalent {
                continue;
            }
            let cert = v
                .certificate
                .unwrap_or_else(|| panic!("{kind} has no certificate"));
            assert!(
                fragment_of(&cert.formula).contains(&relation.fragment()),
                "{kind}: {}",
                cert.formula
            );
            assert!(
                verify_certificate(l, r, &cert).unwrap(),
                "{kind}: {}",
                cert.formula
            );
            assert!(v.trace.is_some());
        }
    }
}

#[test]
fn self_equivalence() {
    for p in [a_tau_b(), par(), interleaved()] {
        for kind in EquivalenceKind::all() {
            assert!(check(kind, &p, &p).equivalent, "{kind}");
        }
    }
}

#[test]
fn witnesses_recheck() {
    for (l, r) in [
        (a_tau_b(), a_b()),
        (par(), par()),
        (interleaved(), interleaved()),
    ] {
        for relation in [Relation::Interleaving, Relation::Step, Relation::Pomset] {
            let kind = EquivalenceKind::weak(relation);
            let Some(Witness::Pairs(pairs)) = check(kind, &l, &r).witness else {
                panic!()
            };
            assert!(is_flat_bisimulation(kind, &l, &r, &pairs));
        }
        let v = check(EquivalenceKind::weak(Relation::Hhp), &l, &r);
        let Some(Witness::Triples(ts)) = v.witness else {
            panic!()
        };
        assert!(is_hhp_bisimulation(
            Strength::Weak,
            &l,
            &r,
            &ts,
            PrefixMode::default()
        ));
    }
}

#[test]
fn quotient_of_silent_chain() {
    let (l, r) = (a_tau_b(), a_b());
    let Some(Witness::Triples(ts)) = check(EquivalenceKind::weak(Relation::Hhp), &l, &r).witness
    else {
        panic!()
    };
    let q = build_quotient_pes(&l, &r, &ts).unwrap();
    assert_eq!(q.structure.len(), 2);
    assert_eq!(q.structure.causality_pairs().len(), 1);
    for (k, e) in q.structure.events().enumerate() {
        assert_eq!(q.structure.label(e), l.label(q.left_projection[k]));
        assert_eq!(q.structure.label(e), r.label(q.right_projection[k]));
    }
    let rel = projection_relation(&q, &l, Side::Left);
    assert!(is_hhp_bisimulation(
        Strength::Weak,
        &q.structure,
        &l,
        &rel,
        PrefixMode::default()
    ));
    let rel = projection_relation(&q, &r, Side::Right);
    assert!(is_hhp_bisimulation(
        Strength::Weak,
        &q.structure,
        &r,
        &rel,
        PrefixMode::default()
    ));
}

#[test]
fn quotient_preconditions() {
    let p = single("a");
    let Some(Witness::Triples(ts)) = check(EquivalenceKind::weak(Relation::Hhp), &p, &p).witness
    else {
        panic!()
    };
    let q = build_quotient_pes(&p, &p, &ts).unwrap();
    assert_eq!(q.structure.len(), 1);
    let missing: Vec<PosetalTriple> = ts
        .into_iter()
        .filter(|t| *t != PosetalTriple::empty())
        .collect();
    assert!(matches!(
        build_quotient_pes(&p, &p, &missing),
        Err(EquivalenceError::NotABisimulation(_))
    ));
}

#[test]
fn strong_relations_keep_silent_events() {
    for relation in Relation::ALL {
        let v = check_with(
            EquivalenceKind::strong(relation),
            &a_tau_b(),
            &a_b(),
            CheckOptions::default(),
        );
        assert!(!v.equivalent, "{relation:?}");
        assert!(v.certificate.is_none());
        assert!(v.trace.is_some());
    }
}
