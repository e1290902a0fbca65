//! Direct re-checks of witness relations against the transfer clauses.
//!
//! Moves are recomputed here by exploring firing sequences, not through the
//! definition filter the checkers use.

use std::collections::HashSet;

use super::{EquivalenceKind, Relation};
use crate::pes::{Configuration, EventId, EventSet, PrimeEventStructure};
use crate::pomset::{
    is_pomset_iso, pointwise_prefixes_with, pomset_isomorphic, restrict, PosetalTriple, PrefixMode,
};
use crate::transition::{
    pairwise_concurrent, strong_successors, weak_pomset_moves_by_paths, Strength,
};

/// Configurations reachable from `c` by strong firings, with the events fired.
fn strong_reach(pes: &PrimeEventStructure, c: Configuration) -> Vec<(EventSet, Configuration)> {
    let mut seen = HashSet::from([c]);
    let mut stack = vec![c];
    let mut out = Vec::new();
    while let Some(d) = stack.pop() {
        if d != c {
            out.push((d.events().difference(c.events()), d));
        }
        for (_, next) in strong_successors(pes, d) {
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    out
}

fn flat_moves(
    pes: &PrimeEventStructure,
    c: Configuration,
    kind: EquivalenceKind,
) -> Vec<(EventSet, Configuration)> {
    let all = match kind.strength {
        Strength::Weak => weak_pomset_moves_by_paths(pes, c),
        Strength::Strong => strong_reach(pes, c),
    };
    all.into_iter()
        .filter(|(x, _)| match kind.relation {
            Relation::Interleaving => x.len() == 1,
            Relation::Step => pairwise_concurrent(pes, *x),
            _ => true,
        })
        .collect()
}

/// Whether `pairs` contains the initial pair and is closed under the transfer property
/// of the interleaving, step or pomset relation `kind`.
pub fn is_flat_bisimulation(
    kind: EquivalenceKind,
    left: &PrimeEventStructure,
    right: &PrimeEventStructure,
    pairs: &[(Configuration, Configuration)],
) -> bool {
    let set: HashSet<(Configuration, Configuration)> = pairs.iter().copied().collect();
    if !set.contains(&(Configuration::EMPTY, Configuration::EMPTY)) {
        return false;
    }
    let answered = |from: &PrimeEventStructure,
                    to: &PrimeEventStructure,
                    c: Configuration,
                    d: Configuration,
                    flip: bool| {
        let answers = flat_moves(to, d, kind);
        flat_moves(from, c, kind).iter().all(|(x, c2)| {
            let p = restrict(from, *x);
            answers.iter().any(|(y, d2)| {
                let related = if flip {
                    set.contains(&(*d2, *c2))
                } else {
                    set.contains(&(*c2, *d2))
                };
                related && pomset_isomorphic(&p, &restrict(to, *y)).is_some()
            })
        })
    };
    pairs.iter().all(|&(c1, c2)| {
        left.is_configuration(c1.events())
            && right.is_configuration(c2.events())
            && answered(left, right, c1, c2, false)
            && answered(right, left, c2, c1, true)
    })
}

fn observed(pes: &PrimeEventStructure, c: Configuration, strength: Strength) -> EventSet {
    match strength {
        Strength::Weak => pes.visible_events().intersection(c.events()),
        Strength::Strong => c.events(),
    }
}

fn single_moves(
    pes: &PrimeEventStructure,
    c: Configuration,
    strength: Strength,
) -> Vec<(EventId, Configuration)> {
    match strength {
        Strength::Weak => weak_pomset_moves_by_paths(pes, c)
            .into_iter()
            .filter(|(x, _)| x.len() == 1)
            .map(|(x, d)| (x.iter().next().unwrap(), d))
            .collect(),
        Strength::Strong => strong_successors(pes, c),
    }
}

fn is_triple(
    left: &PrimeEventStructure,
    right: &PrimeEventStructure,
    t: &PosetalTriple,
    strength: Strength,
) -> bool {
    left.is_configuration(t.left.events())
        && right.is_configuration(t.right.events())
        && is_pomset_iso(
            &restrict(left, observed(left, t.left, strength)),
            &restrict(right, observed(right, t.right, strength)),
            &t.iso,
        )
}

/// Whether `triples` is a posetal relation containing the empty triple and closed
/// under single-event transfer with isomorphism extension.
pub fn is_hp_bisimulation(
    strength: Strength,
    left: &PrimeEventStructure,
    right: &PrimeEventStructure,
    triples: &[PosetalTriple],
) -> bool {
    let set: HashSet<&PosetalTriple> = triples.iter().collect();
    if !set.contains(&PosetalTriple::empty()) {
        return false;
    }
    triples.iter().all(|t| {
        if !is_triple(left, right, t, strength) {
            return false;
        }
        let lm = single_moves(left, t.left, strength);
        let rm = single_moves(right, t.right, strength);
        let related = |e1: EventId, c1: Configuration, e2: EventId, c2: Configuration| {
            if left.label(e1) != right.label(e2) {
                return false;
            }
            let mut f = t.iso.clone();
            f.insert_unchecked(e1, e2);
            set.contains(&PosetalTriple {
                left: c1,
                iso: f,
                right: c2,
            })
        };
        lm.iter()
            .all(|&(e1, c1)| rm.iter().any(|&(e2, c2)| related(e1, c1, e2, c2)))
            && rm
                .iter()
                .all(|&(e2, c2)| lm.iter().any(|&(e1, c1)| related(e1, c1, e2, c2)))
    })
}

/// [`is_hp_bisimulation`] plus closure under pointwise prefixes in the given mode.
pub fn is_hhp_bisimulation(
    strength: Strength,
    left: &PrimeEventStructure,
    right: &PrimeEventStructure,
    triples: &[PosetalTriple],
    mode: PrefixMode,
) -> bool {
    let set: HashSet<&PosetalTriple> = triples.iter().collect();
    is_hp_bisimulation(strength, left, right, triples)
        && triples.iter().all(|t| {
            pointwise_prefixes_with(left, right, t, mode, strength == Strength::Strong)
                .iter()
                .all(|p| set.contains(p))
        })
}
