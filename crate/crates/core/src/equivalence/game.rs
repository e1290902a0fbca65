//! Round-based greatest-fixpoint refinement shared by all checkers.

use serde::Serialize;

use super::{TraceAnswer, TraceNode, TraceReason};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A move by one side from a position, with every answer the other side may give and
/// the position each answer leads to.
#[derive(Debug, Clone)]
pub(crate) struct Attack<M> {
    pub side: Side,
    pub mv: M,
    pub responses: Vec<(M, usize)>,
}

#[derive(Debug, Clone)]
pub(crate) struct Game<M> {
    pub attacks: Vec<Vec<Attack<M>>>,
    /// Positions that must stay related for this one to stay related.
    pub requires: Vec<Vec<usize>>,
}

/// Why a position was dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Reason {
    Attack(usize),
    Requires(usize),
}

#[derive(Debug, Clone)]
pub(crate) struct Refinement {
    /// Round in which each position was removed; `None` for survivors.
    pub removed: Vec<Option<usize>>,
}

impl Refinement {
    pub fn alive(&self, s: usize) -> bool {
        self.removed[s].is_none()
    }

    pub fn removed_before(&self, s: usize, round: usize) -> bool {
        self.removed[s].is_some_and(|r| r < round)
    }
}

impl<M> Game<M> {
    pub fn len(&self) -> usize {
        self.attacks.len()
    }

    pub fn refine(&self) -> Refinement {
        let n = self.len();
        let mut removed: Vec<Option<usize>> = vec![None; n];
        let mut round = 0;
        loop {
            round += 1;
            let dropped: Vec<usize> = (0..n)
                .filter(|&s| removed[s].is_none())
                .filter(|&s| {
                    self.requires[s].iter().any(|&t| removed[t].is_some())
                        || self.attacks[s]
                            .iter()
                            .any(|a| a.responses.iter().all(|&(_, t)| removed[t].is_some()))
                })
                .collect();
            if dropped.is_empty() {
                return Refinement { removed };
            }
            for s in dropped {
                removed[s] = Some(round);
            }
        }
    }

    /// The first reason, in a fixed order, for which `s` was removed in its round.
    /// Attacks are preferred over prefix requirements.
    pub fn reason(&self, refinement: &Refinement, s: usize) -> Option<Reason> {
        let round = refinement.removed[s]?;
        if let Some(i) = self.attacks[s].iter().position(|a| {
            a.responses
                .iter()
                .all(|&(_, t)| refinement.removed_before(t, round))
        }) {
            return Some(Reason::Attack(i));
        }
        self.requires[s]
            .iter()
            .copied()
            .find(|&t| refinement.removed_before(t, round))
            .map(Reason::Requires)
    }

    /// The refutation tree rooted at a removed position.
    pub fn trace(
        &self,
        refinement: &Refinement,
        s: usize,
        state: &dyn Fn(usize) -> String,
        play: &dyn Fn(Side, &M) -> String,
    ) -> TraceNode {
        let round = refinement.removed[s].expect("trace of a related position");
        let reason = match self
            .reason(refinement, s)
            .expect("removed position has a reason")
        {
            Reason::Attack(i) => {
                let a = &self.attacks[s][i];
                TraceReason::Move {
                    side: a.side,
                    play: play(a.side, &a.mv),
                    answers: a
                        .responses
                        .iter()
                        .map(|(m, t)| TraceAnswer {
                            play: play(a.side.other(), m),
                            then: self.trace(refinement, *t, state, play),
                        })
                        .collect(),
                }
            }
            Reason::Requires(t) => TraceReason::Prefix {
                prefix: Box::new(self.trace(refinement, t, state, play)),
            },
        };
        TraceNode {
            position: state(s),
            round,
            reason,
        }
    }
}
