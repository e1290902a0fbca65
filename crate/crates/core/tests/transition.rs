mod common;

use std::collections::BTreeSet;

use rand::seq::SliceRandom;

use common::{all_configurations, load, random_pes, rng};
use wtc::pes::{EventSet, PrimeEventStructure};
use wtc::transition::{
    strong_successors, tau_closure, weak_event_successors, weak_pomset_moves,
    weak_pomset_moves_by_paths, weak_step_successors, ConfigurationGraph, TransitionError,
};

/// Configurations reachable from `c` one event at a time, restricted to events accepted by `step`.
fn reach(
    pes: &PrimeEventStructure,
    c: EventSet,
    step: impl Fn(usize) -> bool,
) -> BTreeSet<EventSet> {
    let configs: BTreeSet<EventSet> = all_configurations(pes).into_iter().collect();
    let mut seen = BTreeSet::from([c]);
    let mut frontier = vec![c];
    while let Some(d) = frontier.pop() {
        for i in (0..pes.len()).filter(|&i| step(i)) {
            let next = EventSet(d.0 | 1 << i);
            if next != d && configs.contains(&next) && seen.insert(next) {
                frontier.push(next);
            }
        }
    }
    seen
}

#[test]
fn weak_moves_from_definition_and_paths_agree() {
    let mut rng = rng(20);
    for _ in 0..500 {
        let p = random_pes(&mut rng, 6, &["a", "b"], 0.4);
        for c in p.enumerate_configurations() {
            let want: Vec<_> = reach(&p, c.events(), |_| true)
                .into_iter()
                .map(|d| (d.difference(c.events()).intersection(p.visible_events()), d))
                .filter(|(x, _)| !x.is_empty())
                .collect();
            let got: Vec<_> = weak_pomset_moves(&p, c)
                .into_iter()
                .map(|(x, d)| (x, d.events()))
                .collect();
            let mut want = want;
            want.sort();
            assert_eq!(got, want);
            assert_eq!(weak_pomset_moves_by_paths(&p, c), weak_pomset_moves(&p, c));
        }
    }
}

#[test]
fn tau_closure_and_event_successors() {
    let mut rng = rng(21);
    for _ in 0..300 {
        let p = random_pes(&mut rng, 6, &["a"], 0.5);
        let c = p
            .configuration(*all_configurations(&p).choose(&mut rng).unwrap())
            .unwrap();
        let want = reach(&p, c.events(), |i| p.is_tau(wtc::pes::EventId(i as u8)));
        let got: BTreeSet<EventSet> = tau_closure(&p, c).into_iter().map(|d| d.events()).collect();
        assert_eq!(got, want);
        for e in p.events() {
            let r = weak_event_successors(&p, c, e);
            if p.is_tau(e) {
                assert_eq!(r, Err(TransitionError::TauArgument(e)));
                continue;
            }
            let got: BTreeSet<EventSet> = r.unwrap().into_iter().map(|d| d.events()).collect();
            let want: BTreeSet<EventSet> = all_configurations(&p)
                .into_iter()
                .filter(|&d| c.events().is_subset(d))
                .filter(|&d| {
                    d.difference(c.events()).intersection(p.visible_events())
                        == EventSet::singleton(e)
                })
                .collect();
            assert_eq!(got, want);
        }
    }
}

#[test]
fn steps_are_concurrent_pomset_moves() {
    let mut rng = rng(22);
    for _ in 0..300 {
        let p = random_pes(&mut rng, 6, &["a", "b"], 0.3);
        for c in p.enumerate_configurations() {
            let moves = weak_pomset_moves(&p, c);
            let steps = weak_step_successors(&p, c);
            let concurrent: Vec<_> = moves
                .iter()
                .filter(|(x, _)| {
                    x.iter().all(|e| {
                        x.iter().all(|f| {
                            e == f || (!p.leq(e, f) && !p.leq(f, e) && !p.in_conflict(e, f))
                        })
                    })
                })
                .collect();
            assert_eq!(steps.len(), concurrent.len());
            for ((pom, d), (x, d2)) in steps.iter().zip(concurrent) {
                assert_eq!(d, d2);
                assert_eq!(pom.len(), x.len());
                assert!(pom.is_antichain());
            }
        }
    }
}

#[test]
fn graph_collects_all_edges() {
    let p = load("a-tau-b.pes");
    let g = ConfigurationGraph::build(&p);
    assert_eq!(g.nodes.len(), 4);
    assert_eq!(g.strong_edges.len(), 3);
    // from the empty set: {a} twice, {a,b}; from {a}: {b}; from {a,tau}: {b}
    assert_eq!(g.weak_pomset_edges.len(), 5);
    assert_eq!(g.weak_step_edges.len(), 4);
    for &(s, e, t) in &g.strong_edges {
        assert!(strong_successors(&p, g.nodes[s]).contains(&(e, g.nodes[t])));
    }
    let json = serde_json::to_string(&g.export(&p)).unwrap();
    assert!(json.contains("\"e1\""));
    assert_eq!(g.index_of(g.nodes[2]), Some(2));
}
