//! Strong and weak bisimulation checkers, certificates and the quotient construction.

mod certificate;
mod flat;
mod game;
mod posetal;
mod quotient;
mod recheck;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::logic::{Formula, Fragment};
use crate::pes::{Configuration, PrimeEventStructure};
use crate::pomset::{PosetalTriple, PrefixMode};
use crate::transition::Strength;

pub use certificate::{distinguishing_formula, verify_certificate};
pub use flat::check_flat_bisim;
pub use game::Side;
pub use posetal::{check_hhp_bisim, check_hp_bisim};
pub use quotient::{build_quotient_pes, projection_relation, reachable_part, QuotientPes};
pub use recheck::{is_flat_bisimulation, is_hhp_bisimulation, is_hp_bisimulation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    #[serde(rename = "hm")]
    Interleaving,
    Step,
    Pomset,
    Hp,
    Hhp,
}

impl Relation {
    pub const ALL: [Relation; 5] = [
        Relation::Interleaving,
        Relation::Step,
        Relation::Pomset,
        Relation::Hp,
        Relation::Hhp,
    ];

    pub fn fragment(self) -> Fragment {
        match self {
            Relation::Interleaving => Fragment::HennessyMilner,
            Relation::Step => Fragment::Step,
            Relation::Pomset => Fragment::Pomset,
            Relation::Hp => Fragment::HistoryPreserving,
            Relation::Hhp => Fragment::Full,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EquivalenceKind {
    pub relation: Relation,
    pub strength: Strength,
}

impl EquivalenceKind {
    pub fn weak(relation: Relation) -> EquivalenceKind {
        EquivalenceKind {
            relation,
            strength: Strength::Weak,
        }
    }

    pub fn strong(relation: Relation) -> EquivalenceKind {
        EquivalenceKind {
            relation,
            strength: Strength::Strong,
        }
    }

    pub fn all() -> Vec<EquivalenceKind> {
        [Strength::Weak, Strength::Strong]
            .into_iter()
            .flat_map(|strength| {
                Relation::ALL
                    .into_iter()
                    .map(move |relation| EquivalenceKind { relation, strength })
            })
            .collect()
    }
}

impl fmt::Display for EquivalenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.strength {
            Strength::Weak => "weak",
            Strength::Strong => "strong",
        };
        let r = match self.relation {
            Relation::Interleaving => "hm",
            Relation::Step => "step",
            Relation::Pomset => "pomset",
            Relation::Hp => "hp",
            Relation::Hhp => "hhp",
        };
        write!(f, "{s}-{r}")
    }
}

impl FromStr for EquivalenceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<EquivalenceKind, String> {
        EquivalenceKind::all()
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| {
                format!(
                    "unknown relation `{s}`, expected {{weak|strong}}-{{hm|step|pomset|hp|hhp}}"
                )
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Pairs(Vec<(Configuration, Configuration)>),
    Triples(Vec<PosetalTriple>),
}

impl Witness {
    pub fn len(&self) -> usize {
        match self {
            Witness::Pairs(p) => p.len(),
            Witness::Triples(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A closed formula and the side on which it holds; it fails on the other side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub formula: Formula,
    pub satisfied_by: Side,
}

/// A losing position of the refutation game and the reason it is lost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceNode {
    pub position: String,
    pub round: usize,
    #[serde(flatten)]
    pub reason: TraceReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "lowercase")]
pub enum TraceReason {
    /// `side` makes a move that every answer of the other side loses against.
    Move {
        side: Side,
        play: String,
        answers: Vec<TraceAnswer>,
    },
    /// A prefix of the position is already lost.
    Prefix { prefix: Box<TraceNode> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceAnswer {
    pub play: String,
    pub then: TraceNode,
}

impl TraceNode {
    pub fn depth(&self) -> usize {
        match &self.reason {
            TraceReason::Move { answers, .. } => {
                1 + answers.iter().map(|a| a.then.depth()).max().unwrap_or(0)
            }
            TraceReason::Prefix { prefix } => 1 + prefix.depth(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub kind: EquivalenceKind,
    pub equivalent: bool,
    /// The greatest relation found; present when the structures are equivalent.
    pub witness: Option<Witness>,
    pub certificate: Option<Certificate>,
    pub trace: Option<TraceNode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub certificate: bool,
    pub trace: bool,
    /// Largest formula depth searched for when no history-preserving certificate exists.
    pub hhp_depth_bound: usize,
    pub prefix_mode: PrefixMode,
}

impl Default for CheckOptions {
    fn default() -> CheckOptions {
        CheckOptions {
            certificate: true,
            trace: true,
            hhp_depth_bound: 8,
            prefix_mode: PrefixMode::default(),
        }
    }
}

impl CheckOptions {
    /// Verdict and witness only.
    pub fn verdict_only() -> CheckOptions {
        CheckOptions {
            certificate: false,
            trace: false,
            ..CheckOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceError {
    #[error("the structures are equivalent; there is nothing to distinguish")]
    NotApplicable,
    #[error("not a bisimulation: {0}")]
    NotABisimulation(String),
}

pub fn check(
    kind: EquivalenceKind,
    left: &PrimeEventStructure,
    right: &PrimeEventStructure,
) -> Verdict {
    check_with(kind, left, right, CheckOptions::default())
}

pub fn check_with(
    kind: EquivalenceKind,
    left: &PrimeEventStructure,
    right: &PrimeEventStructure,
    options: CheckOptions,
) -> Verdict {
    match kind.relation {
        Relation::Interleaving | Relation::Step | Relation::Pomset => {
            flat::check_flat_with(kind, left, right, options)
        }
        Relation::Hp => posetal::check_posetal_with(kind, left, right, options),
        Relation::Hhp => posetal::check_posetal_with(kind, left, right, options),
    }
}
