//! The event structure induced by a weak hhp-bisimulation.

use std::collections::BTreeSet;

use super::game::Side;
use super::recheck::is_hhp_bisimulation;
use super::EquivalenceError;
use crate::pes::{Configuration, EventId, EventSet, PrimeEventStructure, RawPes};
use crate::pomset::{
    is_pomset_iso, pointwise_prefixes_with, restrict, Iso, PosetalTriple, PrefixMode,
};
use crate::transition::Strength;

/// Events are triples `(e1, f, e2)` with `(⌈e1⌉, f, ⌈e2⌉)` in the relation.
#[derive(Debug, Clone)]
pub struct QuotientPes {
    pub structure: PrimeEventStructure,
    pub events: Vec<(EventId, Iso, EventId)>,
    pub left_projection: Vec<EventId>,
    pub right_projection: Vec<EventId>,
    /// The weak hhp-bisimulation the quotient was built from.
    pub relation: Vec<PosetalTriple>,
}

pub fn build_quotient_pes(
    left: &PrimeEventStructure,
    right: &PrimeEventStructure,
    relation: &[PosetalTriple],
) -> Result<QuotientPes, EquivalenceError> {
    if !relation.contains(&PosetalTriple::empty()) {
        return Err(EquivalenceError::NotABisimulation(
            "the empty triple is missing".into(),
        ));
    }
    if !is_hhp_bisimulation(Strength::Weak, left, right, relation, PrefixMode::default()) {
        return Err(EquivalenceError::NotABisimulation(
            "transfer or prefix closure fails".into(),
        ));
    }
    let mut events: BTreeSet<(EventId, Iso, EventId)> = BTreeSet::new();
    for t in relation {
        for e1 in left.visible_events().iter() {
            let Some(e2) = t.iso.get(e1) else { continue };
            let c1 = left.closure(EventSet::singleton(e1));
            let c2 = right.closure(EventSet::singleton(e2));
            if t.left.events() == c1 && t.right.events() == c2 {
                events.insert((e1, t.iso.clone(), e2));
            }
        }
    }
    let events: Vec<(EventId, Iso, EventId)> = events.into_iter().collect();
    let name = |k: usize| format!("q{k}");
    let mut raw = RawPes::named("quotient");
    for (k, (e1, _, _)) in events.iter().enumerate() {
        raw = raw.event(&name(k), left.label(*e1).clone());
    }
    for (i, (_, f, _)) in events.iter().enumerate() {
        for (j, (_, g, _)) in events.iter().enumerate() {
            if i != j && f.is_subset(g) {
                raw = raw.cause(&name(i), &name(j));
            }
        }
    }
    for i in 0..events.len() {
        for j in i + 1..events.len() {
            let (f, g) = (&events[i].1, &events[j].1);
            if !relation
                .iter()
                .any(|t| f.is_subset(&t.iso) && g.is_subset(&t.iso))
            {
                raw = raw.conflict(&name(i), &name(j));
            }
        }
    }
    let structure = raw
        .validate()
        .map_err(|e| EquivalenceError::NotABisimulation(format!("quotient is not a PES: {e}")))?;
    Ok(QuotientPes {
        structure,
        left_projection: events.iter().map(|e| e.0).collect(),
        right_projection: events.iter().map(|e| e.2).collect(),
        events,
        relation: relation.to_vec(),
    })
}

/// The least part of a weak hhp-bisimulation that holds the empty triple, every triple
/// answering a single-event move from a triple it holds, and every prefix of those. It is
/// again a weak hhp-bisimulation, without triples that only silent steps reach.
pub fn reachable_part(
    left: &PrimeEventStructure,
    right: &PrimeEventStructure,
    relation: &[PosetalTriple],
    mode: PrefixMode,
) -> Vec<PosetalTriple> {
    let mut seen: BTreeSet<PosetalTriple> = BTreeSet::from([PosetalTriple::empty()]);
    let mut stack = vec![PosetalTriple::empty()];
    while let Some(t) = stack.pop() {
        let next = relation
            .iter()
            .filter(|u| u.iso.len() == t.iso.len() + 1 && t.is_prefix_of(u))
            .cloned()
            .chain(pointwise_prefixes_with(left, right, &t, mode, false));
        for u in next.collect::<Vec<_>>() {
            if seen.insert(u.clone()) {
                stack.push(u);
            }
        }
    }
    seen.into_iter().collect()
}

/// Relation between the quotient and one side: a configuration `C` of the quotient is
/// paired with every configuration `D` of that side that the source relation relates
/// under the isomorphism `C` encodes.
pub fn projection_relation(
    quotient: &QuotientPes,
    target: &PrimeEventStructure,
    side: Side,
) -> Vec<PosetalTriple> {
    let q = &quotient.structure;
    let projection = match side {
        Side::Left => &quotient.left_projection,
        Side::Right => &quotient.right_projection,
    };
    let mut out = Vec::new();
    for c in q.enumerate_configurations() {
        let iso = Iso::from_pairs(c.events().iter().map(|e| (e, projection[e.index()])));
        let across = Iso::from_pairs(c.events().iter().map(|e| {
            (
                quotient.left_projection[e.index()],
                quotient.right_projection[e.index()],
            )
        }));
        if iso.range().len() != c.len() || across.len() != c.len() {
            continue;
        }
        let p = restrict(q, c.events());
        let targets: BTreeSet<Configuration> = quotient
            .relation
            .iter()
            .filter(|t| t.iso == across)
            .map(|t| match side {
                Side::Left => t.left,
                Side::Right => t.right,
            })
            .collect();
        for d in targets {
            if is_pomset_iso(&p, &restrict(target, target.visible_of(d.events())), &iso) {
                out.push(PosetalTriple {
                    left: c,
                    iso: iso.clone(),
                    right: d,
                });
            }
        }
    }
    out.sort();
    out
}
