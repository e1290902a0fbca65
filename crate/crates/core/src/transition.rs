//! Strong and weak transitions between configurations.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pes::{Configuration, EventId, EventSet, PrimeEventStructure};
use crate::pomset::{restrict, Pomset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strength {
    Strong,
    Weak,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransitionError {
    #[error("event {0} is silent; weak transitions are labelled by visible events")]
    TauArgument(EventId),
}

/// Single-event firings `C -e-> C ∪ {e}`, silent events included.
pub fn strong_successors(
    pes: &PrimeEventStructure,
    c: Configuration,
) -> Vec<(EventId, Configuration)> {
    pes.enabled(c)
        .iter()
        .map(|e| (e, Configuration::from_set_unchecked(c.events().with(e))))
        .collect()
}

/// Configurations reachable from `c` by firing silent events only (including `c`).
pub fn tau_closure(pes: &PrimeEventStructure, c: Configuration) -> Vec<Configuration> {
    let mut seen = BTreeSet::from([c]);
    let mut stack = vec![c];
    while let Some(d) = stack.pop() {
        for e in pes.enabled(d).iter().filter(|&e| pes.is_tau(e)) {
            let next = Configuration::from_set_unchecked(d.events().with(e));
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    seen.into_iter().collect()
}

/// All `C'` with `C =e=> C'`: silent steps, then `e`, then silent steps.
pub fn weak_event_successors(
    pes: &PrimeEventStructure,
    c: Configuration,
    e: EventId,
) -> Result<Vec<Configuration>, TransitionError> {
    if pes.is_tau(e) {
        return Err(TransitionError::TauArgument(e));
    }
    let mut out = BTreeSet::new();
    for d in tau_closure(pes, c) {
        if pes.enabled(d).contains(e) {
            let fired = Configuration::from_set_unchecked(d.events().with(e));
            out.extend(tau_closure(pes, fired));
        }
    }
    Ok(out.into_iter().collect())
}

/// Weak pomset moves computed from the definition: every configuration `C' ⊇ C` whose
/// new visible events `X` are non-empty.
pub fn weak_pomset_moves(
    pes: &PrimeEventStructure,
    c: Configuration,
) -> Vec<(EventSet, Configuration)> {
    let mut out: Vec<(EventSet, Configuration)> = pes
        .enumerate_configurations()
        .into_iter()
        .filter(|d| c.is_subset(*d))
        .filter_map(|d| {
            let x = pes.visible_of(d.events().difference(c.events()));
            (!x.is_empty()).then_some((x, d))
        })
        .collect();
    out.sort();
    out
}

/// Weak pomset moves computed by exploring firing sequences from `c`.
pub fn weak_pomset_moves_by_paths(
    pes: &PrimeEventStructure,
    c: Configuration,
) -> Vec<(EventSet, Configuration)> {
    let mut seen = HashSet::from([c]);
    let mut stack = vec![c];
    let mut out = Vec::new();
    while let Some(d) = stack.pop() {
        let x = pes.visible_of(d.events().difference(c.events()));
        if !x.is_empty() {
            out.push((x, d));
        }
        for (_, next) in strong_successors(pes, d) {
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    out.sort();
    out
}

pub fn weak_pomset_successors(
    pes: &PrimeEventStructure,
    c: Configuration,
) -> Vec<(Pomset, Configuration)> {
    weak_pomset_moves(pes, c)
        .into_iter()
        .map(|(x, d)| (restrict(pes, x), d))
        .collect()
}

pub(crate) fn pairwise_concurrent(pes: &PrimeEventStructure, x: EventSet) -> bool {
    x.iter()
        .all(|e| x.iter().all(|f| e == f || pes.concurrent(e, f)))
}

/// Weak pomset transitions whose visible events are pairwise concurrent.
pub fn weak_step_successors(
    pes: &PrimeEventStructure,
    c: Configuration,
) -> Vec<(Pomset, Configuration)> {
    weak_pomset_moves(pes, c)
        .into_iter()
        .filter(|(x, _)| pairwise_concurrent(pes, *x))
        .map(|(x, d)| (restrict(pes, x), d))
        .collect()
}

/// All configurations with strong, weak pomset and weak step edges. Nodes are sorted
/// by size then bit pattern; edges are sorted by source node, then by event set.
#[derive(Debug, Clone)]
pub struct ConfigurationGraph {
    pub nodes: Vec<Configuration>,
    pub strong_edges: Vec<(usize, EventId, usize)>,
    pub weak_pomset_edges: Vec<(usize, EventSet, usize)>,
    pub weak_step_edges: Vec<(usize, EventSet, usize)>,
    index: HashMap<Configuration, usize>,
}

impl ConfigurationGraph {
    pub fn build(pes: &PrimeEventStructure) -> ConfigurationGraph {
        let nodes = pes.enumerate_configurations();
        let index: HashMap<Configuration, usize> =
            nodes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut strong_edges = Vec::new();
        let mut weak_pomset_edges = Vec::new();
        let mut weak_step_edges = Vec::new();
        for (i, &c) in nodes.iter().enumerate() {
            for (e, d) in strong_successors(pes, c) {
                strong_edges.push((i, e, index[&d]));
            }
            for (j, &d) in nodes.iter().enumerate() {
                if !c.is_subset(d) {
                    continue;
                }
                let x = pes.visible_of(d.events().difference(c.events()));
                if x.is_empty() {
                    continue;
                }
                weak_pomset_edges.push((i, x, j));
                if pairwise_concurrent(pes, x) {
                    weak_step_edges.push((i, x, j));
                }
            }
        }
        strong_edges.sort();
        weak_pomset_edges.sort();
        weak_step_edges.sort();
        ConfigurationGraph {
            nodes,
            strong_edges,
            weak_pomset_edges,
            weak_step_edges,
            index,
        }
    }

    pub fn index_of(&self, c: Configuration) -> Option<usize> {
        self.index.get(&c).copied()
    }

    pub fn export(&self, pes: &PrimeEventStructure) -> GraphExport {
        let names = |x: EventSet| {
            x.iter()
                .map(|e| pes.event_name(e).to_string())
                .collect::<Vec<_>>()
        };
        GraphExport {
            nodes: self.nodes.iter().map(|c| names(c.events())).collect(),
            strong_edges: self
                .strong_edges
                .iter()
                .map(|&(s, e, t)| ExportEdge {
                    source: s,
                    events: vec![pes.event_name(e).to_string()],
                    target: t,
                })
                .collect(),
            weak_pomset_edges: self
                .weak_pomset_edges
                .iter()
                .map(|&(s, x, t)| ExportEdge {
                    source: s,
                    events: names(x),
                    target: t,
                })
                .collect(),
            weak_step_edges: self
                .weak_step_edges
                .iter()
                .map(|&(s, x, t)| ExportEdge {
                    source: s,
                    events: names(x),
                    target: t,
                })
                .collect(),
        }
    }
}

/// JSON shape of an exported configuration graph. Node `i` is listed by its event names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphExport {
    pub nodes: Vec<Vec<String>>,
    pub strong_edges: Vec<ExportEdge>,
    pub weak_pomset_edges: Vec<ExportEdge>,
    pub weak_step_edges: Vec<ExportEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportEdge {
    pub source: usize,
    pub events: Vec<String>,
    pub target: usize,
}
