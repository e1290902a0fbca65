//! Interleaving, step and pomset bisimulation over configuration pairs.

use std::collections::HashMap;

use super::game::{Attack, Game, Refinement, Side};
use super::{certificate, CheckOptions, EquivalenceKind, Relation, Verdict, Witness};
use crate::pes::{Configuration, EventSet, PrimeEventStructure};
use crate::pomset::{pomset_isomorphic, restrict, Pomset};
use crate::transition::{pairwise_concurrent, weak_pomset_moves, Strength};

/// Move: the pomset class played and the event set realising it.
pub(crate) type FlatMove = (usize, EventSet);

pub(crate) struct FlatGame<'a> {
    pub kind: EquivalenceKind,
    pub left: &'a PrimeEventStructure,
    pub right: &'a PrimeEventStructure,
    pub left_configs: Vec<Configuration>,
    pub right_configs: Vec<Configuration>,
    pub classes: Vec<Pomset>,
    pub game: Game<FlatMove>,
}

impl FlatGame<'_> {
    pub fn state(&self, i: usize, j: usize) -> usize {
        i * self.right_configs.len() + j
    }

    pub fn pair(&self, s: usize) -> (Configuration, Configuration) {
        let n = self.right_configs.len();
        (self.left_configs[s / n], self.right_configs[s % n])
    }

    pub fn describe_state(&self, s: usize) -> String {
        let (c1, c2) = self.pair(s);
        format!(
            "({}, {})",
            self.left.describe_set(c1.events()),
            self.right.describe_set(c2.events())
        )
    }

    pub fn describe_move(&self, side: Side, mv: &FlatMove) -> String {
        let pes = match side {
            Side::Left => self.left,
            Side::Right => self.right,
        };
        format!("{} {}", pes.describe_set(mv.1), self.classes[mv.0])
    }
}

/// Moves of one configuration: played event set and target configuration index.
fn moves(
    pes: &PrimeEventStructure,
    configs: &[Configuration],
    index: &HashMap<Configuration, usize>,
    c: Configuration,
    kind: EquivalenceKind,
) -> Vec<(EventSet, usize)> {
    let raw: Vec<(EventSet, Configuration)> = match kind.strength {
        Strength::Weak => weak_pomset_moves(pes, c),
        Strength::Strong => configs
            .iter()
            .filter(|&&d| d != c && c.is_subset(d))
            .map(|&d| (d.events().difference(c.events()), d))
            .collect(),
    };
    raw.into_iter()
        .filter(|(x, _)| match kind.relation {
            Relation::Interleaving => x.len() == 1,
            Relation::Step => pairwise_concurrent(pes, *x),
            _ => true,
        })
        .map(|(x, d)| (x, index[&d]))
        .collect()
}

fn classify(classes: &mut Vec<Pomset>, p: Pomset) -> usize {
    if let Some(k) = classes
        .iter()
        .position(|q| pomset_isomorphic(q, &p).is_some())
    {
        return k;
    }
    classes.push(p);
    classes.len() - 1
}

pub(crate) fn build<'a>(
    kind: EquivalenceKind,
    left: &'a PrimeEventStructure,
    right: &'a PrimeEventStructure,
) -> FlatGame<'a> {
    let left_configs = left.enumerate_configurations();
    let right_configs = right.enumerate_configurations();
    let li: HashMap<Configuration, usize> = left_configs
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();
    let ri: HashMap<Configuration, usize> = right_configs
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();
    let mut classes = Vec::new();
    let mut classified =
        |pes: &PrimeEventStructure, ms: Vec<(EventSet, usize)>| -> Vec<(FlatMove, usize)> {
            ms.into_iter()
                .map(|(x, t)| ((classify(&mut classes, restrict(pes, x)), x), t))
                .collect()
        };
    let lm: Vec<Vec<(FlatMove, usize)>> = left_configs
        .iter()
        .map(|&c| classified(left, moves(left, &left_configs, &li, c, kind)))
        .collect();
    let rm: Vec<Vec<(FlatMove, usize)>> = right_configs
        .iter()
        .map(|&c| classified(right, moves(right, &right_configs, &ri, c, kind)))
        .collect();
    let n2 = right_configs.len();
    let mut attacks = Vec::with_capacity(left_configs.len() * n2);
    for l_moves in &lm {
        for r_moves in &rm {
            let mut here = Vec::new();
            for &(mv, i2) in l_moves {
                let responses = r_moves
                    .iter()
                    .filter(|(m, _)| m.0 == mv.0)
                    .map(|&(m, j2)| (m, i2 * n2 + j2))
                    .collect();
                here.push(Attack {
                    side: Side::Left,
                    mv,
                    responses,
                });
            }
            for &(mv, j2) in r_moves {
                let responses = l_moves
                    .iter()
                    .filter(|(m, _)| m.0 == mv.0)
                    .map(|&(m, i2)| (m, i2 * n2 + j2))
                    .collect();
                here.push(Attack {
                    side: Side::Right,
                    mv,
                    responses,
                });
            }
            attacks.push(here);
        }
    }
    let requires = vec![Vec::new(); attacks.len()];
    FlatGame {
        kind,
        left,
        right,
        left_configs,
        right_configs,
        classes,
        game: Game { attacks, requires },
    }
}

/// Greatest interleaving, step or pomset bisimulation between `left` and `right`.
pub fn check_flat_bisim(
    kind: EquivalenceKind,
    left: &PrimeEventStructure,
    right: &PrimeEventStructure,
) -> Verdict {
    check_flat_with(kind, left, right, CheckOptions::default())
}

pub(crate) fn check_flat_with(
    kind: EquivalenceKind,
    left: &PrimeEventStructure,
    right: &PrimeEventStructure,
    options: CheckOptions,
) -> Verdict {
    assert!(
        matches!(
            kind.relation,
            Relation::Interleaving | Relation::Step | Relation::Pomset
        ),
        "{kind} is not a configuration-pair relation"
    );
    let fg = build(kind, left, right);
    let refinement = fg.game.refine();
    verdict(&fg, &refinement, options)
}

fn verdict(fg: &FlatGame<'_>, refinement: &Refinement, options: CheckOptions) -> Verdict {
    let root = fg.state(0, 0);
    let equivalent = refinement.alive(root);
    if equivalent {
        let pairs = (0..fg.game.len())
            .filter(|&s| refinement.alive(s))
            .map(|s| fg.pair(s))
            .collect();
        return Verdict {
            kind: fg.kind,
            equivalent,
            witness: Some(Witness::Pairs(pairs)),
            certificate: None,
            trace: None,
        };
    }
    let certificate = (options.certificate && fg.kind.strength == Strength::Weak)
        .then(|| certificate::flat_certificate(fg, refinement, root));
    let trace = options.trace.then(|| {
        fg.game
            .trace(refinement, root, &|s| fg.describe_state(s), &|side, mv| {
                fg.describe_move(side, mv)
            })
    });
    Verdict {
        kind: fg.kind,
        equivalent,
        witness: None,
        certificate,
        trace,
    }
}
