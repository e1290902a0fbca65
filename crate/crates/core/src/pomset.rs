//! Induced pomsets, pomset isomorphism and posetal triples.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pes::{Configuration, EventId, EventSet, Label, PrimeEventStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PomsetError {
    #[error("event {0} is silent and cannot be part of a pomset")]
    TauInCarrier(EventId),
    #[error("event set is not consistent")]
    InconsistentSet,
    #[error("event {0} is already in the domain")]
    DomainClash(EventId),
    #[error("event {0} is already in the range")]
    RangeClash(EventId),
    #[error("event {0} is silent")]
    TauArgument(EventId),
}

/// A labelled partial order over a carrier of event ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pomset {
    carrier: Vec<EventId>,
    labels: Vec<Label>,
    /// `below[i]` has bit `j` set when `carrier[j] < carrier[i]`.
    below: Vec<u64>,
}

impl Pomset {
    /// Builds a pomset from labels and strict order pairs over positions; the order is
    /// transitively closed here. Carrier ids are the positions.
    pub fn from_parts(labels: Vec<Label>, order: &[(usize, usize)]) -> Pomset {
        let n = labels.len();
        let mut below = vec![0u64; n];
        for &(i, j) in order {
            below[j] |= 1 << i;
        }
        for k in 0..n {
            for i in 0..n {
                if below[i] & (1 << k) != 0 {
                    below[i] |= below[k];
                }
            }
        }
        Pomset {
            carrier: (0..n).map(|i| EventId(i as u8)).collect(),
            labels,
            below,
        }
    }

    pub fn empty() -> Pomset {
        Pomset {
            carrier: Vec::new(),
            labels: Vec::new(),
            below: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn carrier(&self) -> &[EventId] {
        &self.carrier
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label_at(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    /// Strict order between carrier positions.
    pub fn lt_at(&self, i: usize, j: usize) -> bool {
        self.below[j] & (1 << i) != 0
    }

    pub fn order_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.len() {
            for i in 0..self.len() {
                if self.lt_at(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// True when no two carrier elements are ordered.
    pub fn is_antichain(&self) -> bool {
        self.below.iter().all(|&b| b == 0)
    }

    fn position(&self, e: EventId) -> Option<usize> {
        self.carrier.iter().position(|&c| c == e)
    }

    fn signature(&self, i: usize) -> (usize, usize) {
        let above = self.below.iter().filter(|&&b| b & (1 << i) != 0).count();
        (self.below[i].count_ones() as usize, above)
    }
}

impl fmt::Display for Pomset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
        let order: Vec<String> = self
            .order_pairs()
            .iter()
            .map(|(i, j)| format!("{i}<{j}"))
            .collect();
        write!(f, "[{}]", labels.join(","))?;
        if !order.is_empty() {
            write!(f, " with {}", order.join(","))?;
        }
        Ok(())
    }
}

/// Pomset induced on a consistent set of visible events.
pub fn induced_pomset(pes: &PrimeEventStructure, x: EventSet) -> Result<Pomset, PomsetError> {
    if let Some(t) = x.iter().find(|&e| pes.is_tau(e)) {
        return Err(PomsetError::TauInCarrier(t));
    }
    if !pes.consistent(x) {
        return Err(PomsetError::InconsistentSet);
    }
    Ok(restrict(pes, x))
}

/// Restriction of order and labels to `x`, with no label check. Strong semantics use it
/// with silent events in the carrier.
pub(crate) fn restrict(pes: &PrimeEventStructure, x: EventSet) -> Pomset {
    let carrier: Vec<EventId> = x.iter().collect();
    let labels = carrier.iter().map(|&e| pes.label(e).clone()).collect();
    let below = carrier
        .iter()
        .map(|&e| {
            carrier
                .iter()
                .enumerate()
                .filter(|&(_, &d)| pes.lt(d, e))
                .fold(0u64, |acc, (j, _)| acc | (1 << j))
        })
        .collect();
    Pomset {
        carrier,
        labels,
        below,
    }
}

/// A finite bijection between event ids of two structures.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Iso(BTreeMap<EventId, EventId>);

impl Iso {
    pub fn new() -> Iso {
        Iso::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (EventId, EventId)>) -> Iso {
        Iso(pairs.into_iter().collect())
    }

    pub fn get(&self, e: EventId) -> Option<EventId> {
        self.0.get(&e).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (EventId, EventId)> + '_ {
        self.0.iter().map(|(&a, &b)| (a, b))
    }

    pub fn domain(&self) -> EventSet {
        self.0.keys().copied().collect()
    }

    pub fn range(&self) -> EventSet {
        self.0.values().copied().collect()
    }

    pub fn inverse(&self) -> Iso {
        Iso(self.0.iter().map(|(&a, &b)| (b, a)).collect())
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Iso) -> Iso {
        Iso(self
            .0
            .iter()
            .filter_map(|(&a, &b)| other.get(b).map(|c| (a, c)))
            .collect())
    }

    pub fn restrict_to(&self, dom: EventSet) -> Iso {
        Iso(self
            .0
            .iter()
            .filter(|(a, _)| dom.contains(**a))
            .map(|(&a, &b)| (a, b))
            .collect())
    }

    pub fn is_subset(&self, other: &Iso) -> bool {
        self.0.iter().all(|(a, b)| other.0.get(a) == Some(b))
    }

    pub(crate) fn insert_unchecked(&mut self, a: EventId, b: EventId) {
        self.0.insert(a, b);
    }
}

/// Finds the lexicographically least label- and order-preserving bijection
/// from `p`'s carrier to `q`'s carrier, if any.
pub fn pomset_isomorphic(p: &Pomset, q: &Pomset) -> Option<Iso> {
    if p.len() != q.len() {
        return None;
    }
    let mut lp: Vec<&Label> = p.labels.iter().collect();
    let mut lq: Vec<&Label> = q.labels.iter().collect();
    lp.sort();
    lq.sort();
    if lp != lq {
        return None;
    }
    let mut assignment = vec![usize::MAX; p.len()];
    let mut used = vec![false; q.len()];
    if backtrack(p, q, 0, &mut assignment, &mut used) {
        Some(Iso::from_pairs(
            assignment
                .iter()
                .enumerate()
                .map(|(i, &j)| (p.carrier[i], q.carrier[j])),
        ))
    } else {
        None
    }
}

fn backtrack(
    p: &Pomset,
    q: &Pomset,
    i: usize,
    assignment: &mut [usize],
    used: &mut [bool],
) -> bool {
    if i == p.len() {
        return true;
    }
    for j in 0..q.len() {
        if used[j] || p.labels[i] != q.labels[j] || p.signature(i) != q.signature(j) {
            continue;
        }
        let compatible = (0..i).all(|k| {
            let m = assignment[k];
            p.lt_at(k, i) == q.lt_at(m, j) && p.lt_at(i, k) == q.lt_at(j, m)
        });
        if !compatible {
            continue;
        }
        assignment[i] = j;
        used[j] = true;
        if backtrack(p, q, i + 1, assignment, used) {
            return true;
        }
        used[j] = false;
    }
    assignment[i] = usize::MAX;
    false
}

/// Every isomorphism from `p` to `q`, in lexicographic order.
pub fn all_isomorphisms(p: &Pomset, q: &Pomset) -> Vec<Iso> {
    fn go(
        p: &Pomset,
        q: &Pomset,
        i: usize,
        assignment: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Iso>,
    ) {
        if i == p.len() {
            out.push(Iso::from_pairs(
                assignment
                    .iter()
                    .enumerate()
                    .map(|(k, &j)| (p.carrier[k], q.carrier[j])),
            ));
            return;
        }
        for j in 0..q.len() {
            if used[j] || p.labels[i] != q.labels[j] {
                continue;
            }
            if !(0..i).all(|k| {
                p.lt_at(k, i) == q.lt_at(assignment[k], j)
                    && p.lt_at(i, k) == q.lt_at(j, assignment[k])
            }) {
                continue;
            }
            assignment.push(j);
            used[j] = true;
            go(p, q, i + 1, assignment, used, out);
            used[j] = false;
            assignment.pop();
        }
    }
    let mut out = Vec::new();
    if p.len() == q.len() {
        go(
            p,
            q,
            0,
            &mut Vec::new(),
            &mut vec![false; q.len()],
            &mut out,
        );
    }
    out
}

/// Checks that `f` is a label- and order-preserving bijection from `p` onto `q`.
pub fn is_pomset_iso(p: &Pomset, q: &Pomset, f: &Iso) -> bool {
    if f.len() != p.len() || p.len() != q.len() {
        return false;
    }
    let mut image = Vec::with_capacity(p.len());
    for (i, &e) in p.carrier.iter().enumerate() {
        let Some(target) = f.get(e) else { return false };
        let Some(j) = q.position(target) else {
            return false;
        };
        if p.labels[i] != q.labels[j] {
            return false;
        }
        image.push(j);
    }
    let mut sorted = image.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != image.len() {
        return false;
    }
    (0..p.len()).all(|i| (0..p.len()).all(|k| p.lt_at(i, k) == q.lt_at(image[i], image[k])))
}

/// `f[e1 -> e2]`, defined when `e1` is new to the domain and `e2` new to the range.
pub fn extend_iso(
    f: &Iso,
    left: &PrimeEventStructure,
    e1: EventId,
    right: &PrimeEventStructure,
    e2: EventId,
) -> Result<Iso, PomsetError> {
    if left.is_tau(e1) {
        return Err(PomsetError::TauArgument(e1));
    }
    if right.is_tau(e2) {
        return Err(PomsetError::TauArgument(e2));
    }
    if f.get(e1).is_some() {
        return Err(PomsetError::DomainClash(e1));
    }
    if f.0.values().any(|&v| v == e2) {
        return Err(PomsetError::RangeClash(e2));
    }
    let mut g = f.clone();
    g.0.insert(e1, e2);
    Ok(g)
}

/// An element of the posetal product: two configurations and an isomorphism between
/// their visible parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PosetalTriple {
    pub left: Configuration,
    pub iso: Iso,
    pub right: Configuration,
}

impl PosetalTriple {
    pub fn empty() -> PosetalTriple {
        PosetalTriple {
            left: Configuration::EMPTY,
            iso: Iso::new(),
            right: Configuration::EMPTY,
        }
    }

    /// Pointwise inclusion of triples.
    pub fn is_prefix_of(&self, other: &PosetalTriple) -> bool {
        self.left.is_subset(other.left)
            && self.right.is_subset(other.right)
            && self.iso.is_subset(&other.iso)
    }
}

pub fn is_posetal_triple(
    pes1: &PrimeEventStructure,
    pes2: &PrimeEventStructure,
    c1: Configuration,
    f: &Iso,
    c2: Configuration,
) -> bool {
    if !pes1.is_configuration(c1.events()) || !pes2.is_configuration(c2.events()) {
        return false;
    }
    let p = restrict(pes1, pes1.visible_of(c1.events()));
    let q = restrict(pes2, pes2.visible_of(c2.events()));
    is_pomset_iso(&p, &q, f)
}

/// Which sub-triples a downward-closed relation must contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PrefixMode {
    /// Every pair of sub-configurations on which the restricted map is still a bijection
    /// of visible parts, including those that differ only in silent events.
    AllConfigurations,
    /// Only sub-configurations that are the causal closure of a visibly downward-closed
    /// part of the visible events; trailing silent events are never split off.
    #[default]
    VisibleGenerated,
}

/// All pointwise predecessors of `t`, over every sub-configuration.
pub fn pointwise_prefixes(
    pes1: &PrimeEventStructure,
    pes2: &PrimeEventStructure,
    t: &PosetalTriple,
) -> Vec<PosetalTriple> {
    pointwise_prefixes_with(pes1, pes2, t, PrefixMode::AllConfigurations, false)
}

/// Pointwise predecessors of `t` under the given prefix mode. With `strong` set, silent
/// events are mapped by `t.iso` like any other event.
pub fn pointwise_prefixes_with(
    pes1: &PrimeEventStructure,
    pes2: &PrimeEventStructure,
    t: &PosetalTriple,
    mode: PrefixMode,
    strong: bool,
) -> Vec<PosetalTriple> {
    let observed = |p: &PrimeEventStructure, x: EventSet| if strong { x } else { p.visible_of(x) };
    let mut out = Vec::new();
    let left_sets = subsets(t.left.events());
    match mode {
        PrefixMode::AllConfigurations => {
            let right_sets = subsets(t.right.events());
            for &s1 in &left_sets {
                if !pes1.is_configuration(s1) {
                    continue;
                }
                let f = t.iso.restrict_to(observed(pes1, s1));
                let image = f.range();
                for &s2 in &right_sets {
                    if pes2.is_configuration(s2) && observed(pes2, s2) == image {
                        out.push(PosetalTriple {
                            left: Configuration::from_set_unchecked(s1),
                            iso: f.clone(),
                            right: Configuration::from_set_unchecked(s2),
                        });
                    }
                }
            }
        }
        PrefixMode::VisibleGenerated => {
            for v in subsets(observed(pes1, t.left.events())) {
                let s1 = pes1.closure(v);
                if observed(pes1, s1) != v {
                    continue;
                }
                let f = t.iso.restrict_to(v);
                let s2 = pes2.closure(f.range());
                if observed(pes2, s2) != f.range() {
                    continue;
                }
                out.push(PosetalTriple {
                    left: Configuration::from_set_unchecked(s1),
                    iso: f,
                    right: Configuration::from_set_unchecked(s2),
                });
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn subsets(x: EventSet) -> Vec<EventSet> {
    // Enumerate submasks of x.
    let mut out = Vec::new();
    let mut sub = x.0;
    loop {
        out.push(EventSet(sub));
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & x.0;
    }
    out
}
