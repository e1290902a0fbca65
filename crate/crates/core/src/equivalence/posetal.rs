//! History-preserving and hereditary history-preserving bisimulation over posetal triples.

use std::collections::HashMap;

use super::game::{Attack, Game, Refinement, Side};
use super::{certificate, CheckOptions, EquivalenceKind, Relation, Verdict, Witness};
use crate::pes::{Configuration, EventId, EventSet, PrimeEventStructure};
use crate::pomset::{
    all_isomorphisms, pointwise_prefixes_with, restrict, PosetalTriple, PrefixMode,
};
use crate::transition::{strong_successors, weak_pomset_moves, Strength};

/// Move: the single event played and the configuration it leads to.
pub(crate) type EventMove = (EventId, Configuration);

pub(crate) struct PosetalGame<'a> {
    pub kind: EquivalenceKind,
    pub left: &'a PrimeEventStructure,
    pub right: &'a PrimeEventStructure,
    pub triples: Vec<PosetalTriple>,
    pub index: HashMap<PosetalTriple, usize>,
    pub game: Game<EventMove>,
}

impl PosetalGame<'_> {
    pub fn describe_state(&self, s: usize) -> String {
        describe_triple(self.left, self.right, &self.triples[s])
    }

    pub fn describe_move(&self, side: Side, mv: &EventMove) -> String {
        let pes = match side {
            Side::Left => self.left,
            Side::Right => self.right,
        };
        format!(
            "{}:{} to {}",
            pes.event_name(mv.0),
            pes.label(mv.0),
            pes.describe_set(mv.1.events())
        )
    }
}

pub(crate) fn describe_triple(
    left: &PrimeEventStructure,
    right: &PrimeEventStructure,
    t: &PosetalTriple,
) -> String {
    let f: Vec<String> = t
        .iso
        .pairs()
        .map(|(a, b)| format!("{}->{}", left.event_name(a), right.event_name(b)))
        .collect();
    format!(
        "({}, {{{}}}, {})",
        left.describe_set(t.left.events()),
        f.join(", "),
        right.describe_set(t.right.events())
    )
}

fn observed(pes: &PrimeEventStructure, c: Configuration, strength: Strength) -> EventSet {
    match strength {
        Strength::Weak => pes
            .visible_part(c.events())
            .expect("configuration of this structure"),
        Strength::Strong => c.events(),
    }
}

/// Every posetal triple of the two structures.
pub(crate) fn all_triples(
    left: &PrimeEventStructure,
    right: &PrimeEventStructure,
    strength: Strength,
) -> Vec<PosetalTriple> {
    let lc = left.enumerate_configurations();
    let rc = right.enumerate_configurations();
    let mut out = Vec::new();
    for &c1 in &lc {
        let o1 = observed(left, c1, strength);
        let p = restrict(left, o1);
        for &c2 in &rc {
            let o2 = observed(right, c2, strength);
            if o1.len() != o2.len() {
                continue;
            }
            for iso in all_isomorphisms(&p, &restrict(right, o2)) {
                out.push(PosetalTriple {
                    left: c1,
                    iso,
                    right: c2,
                });
            }
        }
    }
    out
}

fn single_moves(pes: &PrimeEventStructure, c: Configuration, strength: Strength) -> Vec<EventMove> {
    match strength {
        Strength::Weak => weak_pomset_moves(pes, c)
            .into_iter()
            .filter(|(x, _)| x.len() == 1)
            .map(|(x, d)| (x.iter().next().unwrap(), d))
            .collect(),
        Strength::Strong => strong_successors(pes, c),
    }
}

pub(crate) fn build<'a>(
    kind: EquivalenceKind,
    left: &'a PrimeEventStructure,
    right: &'a PrimeEventStructure,
    prefix_mode: PrefixMode,
) -> PosetalGame<'a> {
    let strength = kind.strength;
    let triples = all_triples(left, right, strength);
    let index: HashMap<PosetalTriple, usize> = triples
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect();
    let mut lmoves: HashMap<Configuration, Vec<EventMove>> = HashMap::new();
    let mut rmoves: HashMap<Configuration, Vec<EventMove>> = HashMap::new();
    let mut attacks = Vec::with_capacity(triples.len());
    let mut requires = Vec::with_capacity(triples.len());
    for t in &triples {
        let lm = lmoves
            .entry(t.left)
            .or_insert_with(|| single_moves(left, t.left, strength))
            .clone();
        let rm = rmoves
            .entry(t.right)
            .or_insert_with(|| single_moves(right, t.right, strength))
            .clone();
        let target = |e1: EventId, c1: Configuration, e2: EventId, c2: Configuration| {
            let mut f = t.iso.clone();
            f.insert_unchecked(e1, e2);
            index
                .get(&PosetalTriple {
                    left: c1,
                    iso: f,
                    right: c2,
                })
                .copied()
        };
        let mut here = Vec::new();
        for &(e1, c1) in &lm {
            let responses = rm
                .iter()
                .filter(|(e2, _)| left.label(e1) == right.label(*e2))
                .filter_map(|&(e2, c2)| target(e1, c1, e2, c2).map(|s| ((e2, c2), s)))
                .collect();
            here.push(Attack {
                side: Side::Left,
                mv: (e1, c1),
                responses,
            });
        }
        for &(e2, c2) in &rm {
            let responses = lm
                .iter()
                .filter(|(e1, _)| left.label(*e1) == right.label(e2))
                .filter_map(|&(e1, c1)| target(e1, c1, e2, c2).map(|s| ((e1, c1), s)))
                .collect();
            here.push(Attack {
                side: Side::Right,
                mv: (e2, c2),
                responses,
            });
        }
        attacks.push(here);
        let mut req = Vec::new();
        if kind.relation == Relation::Hhp {
            for p in
                pointwise_prefixes_with(left, right, t, prefix_mode, strength == Strength::Strong)
            {
                if p != *t {
                    req.push(
                        *index
                            .get(&p)
                            .expect("prefix of a posetal triple is posetal"),
                    );
                }
            }
        }
        requires.push(req);
    }
    PosetalGame {
        kind,
        left,
        right,
        triples,
        index,
        game: Game { attacks, requires },
    }
}

pub(crate) fn root(game: &PosetalGame<'_>) -> usize {
    game.index[&PosetalTriple::empty()]
}

/// Greatest history-preserving bisimulation.
pub fn check_hp_bisim(
    strength: Strength,
    left: &PrimeEventStructure,
    right: &PrimeEventStructure,
) -> Verdict {
    check_posetal_with(
        EquivalenceKind {
            relation: Relation::Hp,
            strength,
        },
        left,
        right,
        CheckOptions::default(),
    )
}

/// Greatest downward-closed history-preserving bisimulation, with the default prefix mode.
pub fn check_hhp_bisim(
    strength: Strength,
    left: &PrimeEventStructure,
    right: &PrimeEventStructure,
) -> Verdict {
    check_posetal_with(
        EquivalenceKind {
            relation: Relation::Hhp,
            strength,
        },
        left,
        right,
        CheckOptions::default(),
    )
}

pub(crate) fn check_posetal_with(
    kind: EquivalenceKind,
    left: &PrimeEventStructure,
    right: &PrimeEventStructure,
    options: CheckOptions,
) -> Verdict {
    assert!(
        matches!(kind.relation, Relation::Hp | Relation::Hhp),
        "{kind} is not a posetal relation"
    );
    let pg = build(kind, left, right, options.prefix_mode);
    let refinement = pg.game.refine();
    verdict(&pg, &refinement, options)
}

fn verdict(pg: &PosetalGame<'_>, refinement: &Refinement, options: CheckOptions) -> Verdict {
    let r = root(pg);
    if refinement.alive(r) {
        let triples = (0..pg.game.len())
            .filter(|&s| refinement.alive(s))
            .map(|s| pg.triples[s].clone())
            .collect();
        return Verdict {
            kind: pg.kind,
            equivalent: true,
            witness: Some(Witness::Triples(triples)),
            certificate: None,
            trace: None,
        };
    }
    let certificate = if options.certificate && pg.kind.strength == Strength::Weak {
        certificate::posetal_certificate(pg, refinement, options)
    } else {
        None
    };
    let trace = options.trace.then(|| {
        pg.game
            .trace(refinement, r, &|s| pg.describe_state(s), &|side, mv| {
                pg.describe_move(side, mv)
            })
    });
    Verdict {
        kind: pg.kind,
        equivalent: false,
        witness: None,
        certificate,
        trace,
    }
}
