//! Finite prime event structures whose labels may include the silent label `tau`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest number of events a structure may have; event sets are 64-bit masks.
pub const MAX_EVENTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Visible(String),
    Tau,
}

impl Label {
    pub fn visible(name: impl Into<String>) -> Label {
        Label::Visible(name.into())
    }

    /// Parses `tau` as the silent label and anything else as a visible name.
    pub fn parse(token: &str) -> Label {
        if token == "tau" {
            Label::Tau
        } else {
            Label::Visible(token.to_string())
        }
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, Label::Tau)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Visible(name) => f.write_str(name),
            Label::Tau => f.write_str("tau"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EventId(pub u8);

impl EventId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A set of events of one structure, stored as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EventSet(pub u64);

impl EventSet {
    pub const EMPTY: EventSet = EventSet(0);

    pub fn singleton(e: EventId) -> EventSet {
        EventSet(1u64 << e.0)
    }

    pub fn full(n: usize) -> EventSet {
        if n >= 64 {
            EventSet(u64::MAX)
        } else {
            EventSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, e: EventId) -> bool {
        self.0 & (1u64 << e.0) != 0
    }

    pub fn insert(&mut self, e: EventId) {
        self.0 |= 1u64 << e.0;
    }

    pub fn with(self, e: EventId) -> EventSet {
        EventSet(self.0 | (1u64 << e.0))
    }

    pub fn union(self, other: EventSet) -> EventSet {
        EventSet(self.0 | other.0)
    }

    pub fn intersection(self, other: EventSet) -> EventSet {
        EventSet(self.0 & other.0)
    }

    pub fn difference(self, other: EventSet) -> EventSet {
        EventSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: EventSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: EventSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = EventId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros();
            bits &= bits - 1;
            Some(EventId(i as u8))
        })
    }
}

impl FromIterator<EventId> for EventSet {
    fn from_iter<I: IntoIterator<Item = EventId>>(iter: I) -> Self {
        let mut s = EventSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

/// A downward-closed, conflict-free event set.
///
/// Only produced by [`PrimeEventStructure`] methods that check both conditions, or by
/// crate-internal code that extends a configuration along an enabled event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Configuration(EventSet);

impl Configuration {
    pub const EMPTY: Configuration = Configuration(EventSet::EMPTY);

    pub(crate) fn from_set_unchecked(set: EventSet) -> Configuration {
        Configuration(set)
    }

    pub fn events(self) -> EventSet {
        self.0
    }

    pub fn contains(self, e: EventId) -> bool {
        self.0.contains(e)
    }

    pub fn len(self) -> usize {
        self.0.len()
    }

    pub fn is_empty(self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(self, other: Configuration) -> bool {
        self.0.is_subset(other.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PesError {
    #[error("causality contains a cycle through event `{0}`")]
    CyclicCausality(String),
    #[error("event `{0}` is in conflict with itself")]
    SelfConflict(String),
    #[error("events `{0}` and `{1}` are both causally ordered and in conflict")]
    CausalConflictOverlap(String, String),
    #[error("event `{0}` is not declared")]
    DanglingEvent(String),
    #[error("event `{0}` is declared twice")]
    DuplicateEvent(String),
    #[error("unknown event {0}")]
    UnknownEvent(EventId),
    #[error("a structure may have at most {MAX_EVENTS} events, got {0}")]
    TooManyEvents(usize),
    #[error("event set is not a configuration")]
    NotAConfiguration,
}

/// Unvalidated input: declared events plus generating causal and conflict pairs, by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawPes {
    pub name: Option<String>,
    pub events: Vec<(String, Label)>,
    pub causes: Vec<(String, String)>,
    pub conflicts: Vec<(String, String)>,
}

impl RawPes {
    pub fn new() -> RawPes {
        RawPes::default()
    }

    pub fn named(name: impl Into<String>) -> RawPes {
        RawPes {
            name: Some(name.into()),
            ..RawPes::default()
        }
    }

    pub fn event(mut self, id: &str, label: Label) -> RawPes {
        self.events.push((id.to_string(), label));
        self
    }

    pub fn cause(mut self, before: &str, after: &str) -> RawPes {
        self.causes.push((before.to_string(), after.to_string()));
        self
    }

    pub fn conflict(mut self, a: &str, b: &str) -> RawPes {
        self.conflicts.push((a.to_string(), b.to_string()));
        self
    }

    pub fn validate(&self) -> Result<PrimeEventStructure, PesError> {
        validate_pes(self)
    }
}

/// A validated prime event structure.
///
/// Causality is stored transitively closed (`causes[e]` is the cause set of `e`,
/// including `e`), conflict is stored symmetric and hereditarily saturated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeEventStructure {
    name: Option<String>,
    names: Vec<String>,
    labels: Vec<Label>,
    causes: Vec<EventSet>,
    effects: Vec<EventSet>,
    conflicts: Vec<EventSet>,
    visible: EventSet,
}

pub fn validate_pes(raw: &RawPes) -> Result<PrimeEventStructure, PesError> {
    let n = raw.events.len();
    if n > MAX_EVENTS {
        return Err(PesError::TooManyEvents(n));
    }
    let mut index: HashMap<&str, EventId> = HashMap::new();
    for (i, (name, _)) in raw.events.iter().enumerate() {
        if index.insert(name.as_str(), EventId(i as u8)).is_some() {
            return Err(PesError::DuplicateEvent(name.clone()));
        }
    }
    let lookup = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| PesError::DanglingEvent(name.to_string()))
    };

    let mut causes = vec![EventSet::EMPTY; n];
    for (i, c) in causes.iter_mut().enumerate() {
        c.insert(EventId(i as u8));
    }
    for (a, b) in &raw.causes {
        let (a, b) = (lookup(a)?, lookup(b)?);
        if a == b {
            return Err(PesError::CyclicCausality(raw.events[a.index()].0.clone()));
        }
        causes[b.index()].insert(a);
    }
    // Warshall over bit rows: anything below a cause of `e` is below `e`.
    for k in 0..n {
        let below_k = causes[k];
        for row in causes.iter_mut() {
            if row.contains(EventId(k as u8)) {
                *row = row.union(below_k);
            }
        }
    }
    for i in 0..n {
        for j in causes[i].iter() {
            if j.index() != i && causes[j.index()].contains(EventId(i as u8)) {
                return Err(PesError::CyclicCausality(raw.events[i].0.clone()));
            }
        }
    }
    let mut effects = vec![EventSet::EMPTY; n];
    for (i, c) in causes.iter().enumerate() {
        for j in c.iter() {
            effects[j.index()].insert(EventId(i as u8));
        }
    }

    let mut generating = vec![EventSet::EMPTY; n];
    for (a, b) in &raw.conflicts {
        let (a, b) = (lookup(a)?, lookup(b)?);
        if a == b {
            return Err(PesError::SelfConflict(raw.events[a.index()].0.clone()));
        }
        generating[a.index()].insert(b);
        generating[b.index()].insert(a);
    }
    // e # e'' iff some cause of e is in generating conflict with some cause of e''.
    let mut conflicts = vec![EventSet::EMPTY; n];
    for (i, row) in conflicts.iter_mut().enumerate() {
        for c in causes[i].iter() {
            for d in generating[c.index()].iter() {
                *row = row.union(effects[d.index()]);
            }
        }
    }
    for i in 0..n {
        let ordered = causes[i]
            .union(effects[i])
            .difference(EventSet::singleton(EventId(i as u8)));
        if let Some(j) = conflicts[i].intersection(ordered).iter().next() {
            return Err(PesError::CausalConflictOverlap(
                raw.events[i].0.clone(),
                raw.events[j.index()].0.clone(),
            ));
        }
        if conflicts[i].contains(EventId(i as u8)) {
            return Err(PesError::SelfConflict(raw.events[i].0.clone()));
        }
    }

    let labels: Vec<Label> = raw.events.iter().map(|(_, l)| l.clone()).collect();
    let visible = labels
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.is_tau())
        .map(|(i, _)| EventId(i as u8))
        .collect();
    Ok(PrimeEventStructure {
        name: raw.name.clone(),
        names: raw.events.iter().map(|(n, _)| n.clone()).collect(),
        labels,
        causes,
        effects,
        conflicts,
        visible,
    })
}

impl PrimeEventStructure {
    pub fn empty() -> PrimeEventStructure {
        validate_pes(&RawPes::new()).expect("empty structure is valid")
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn events(&self) -> impl Iterator<Item = EventId> + '_ {
        (0..self.labels.len()).map(|i| EventId(i as u8))
    }

    pub fn all_events(&self) -> EventSet {
        EventSet::full(self.len())
    }

    pub fn visible_events(&self) -> EventSet {
        self.visible
    }

    pub fn check_event(&self, e: EventId) -> Result<(), PesError> {
        if e.index() < self.len() {
            Ok(())
        } else {
            Err(PesError::UnknownEvent(e))
        }
    }

    pub fn check_set(&self, x: EventSet) -> Result<(), PesError> {
        match x.difference(self.all_events()).iter().next() {
            Some(e) => Err(PesError::UnknownEvent(e)),
            None => Ok(()),
        }
    }

    pub fn event_name(&self, e: EventId) -> &str {
        &self.names[e.index()]
    }

    pub fn event_by_name(&self, name: &str) -> Option<EventId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| EventId(i as u8))
    }

    pub fn label(&self, e: EventId) -> &Label {
        &self.labels[e.index()]
    }

    pub fn is_tau(&self, e: EventId) -> bool {
        self.labels[e.index()].is_tau()
    }

    /// `e <= e2` in the reflexive causal order.
    pub fn leq(&self, e: EventId, e2: EventId) -> bool {
        self.causes[e2.index()].contains(e)
    }

    pub fn lt(&self, e: EventId, e2: EventId) -> bool {
        e != e2 && self.leq(e, e2)
    }

    pub fn in_conflict(&self, e: EventId, e2: EventId) -> bool {
        self.conflicts[e.index()].contains(e2)
    }

    /// Cause set of `e`, including `e`.
    pub fn causes(&self, e: EventId) -> Result<EventSet, PesError> {
        self.check_event(e)?;
        Ok(self.causes[e.index()])
    }

    pub(crate) fn strict_causes(&self, e: EventId) -> EventSet {
        self.causes[e.index()].difference(EventSet::singleton(e))
    }

    /// Events `e'` with `e <= e'`, including `e`.
    pub fn effects(&self, e: EventId) -> EventSet {
        self.effects[e.index()]
    }

    pub fn conflict_set(&self, e: EventId) -> EventSet {
        self.conflicts[e.index()]
    }

    /// Downward closure of a set.
    pub fn closure(&self, x: EventSet) -> EventSet {
        x.iter()
            .fold(EventSet::EMPTY, |acc, e| acc.union(self.causes[e.index()]))
    }

    pub(crate) fn conflicts_of(&self, x: EventSet) -> EventSet {
        x.iter().fold(EventSet::EMPTY, |acc, e| {
            acc.union(self.conflicts[e.index()])
        })
    }

    pub fn is_consistent(&self, x: EventSet) -> Result<bool, PesError> {
        self.check_set(x)?;
        Ok(self.consistent(x))
    }

    pub(crate) fn consistent(&self, x: EventSet) -> bool {
        self.conflicts_of(x).is_disjoint(x)
    }

    pub fn are_concurrent(&self, e: EventId, e2: EventId) -> Result<bool, PesError> {
        self.check_event(e)?;
        self.check_event(e2)?;
        Ok(self.concurrent(e, e2))
    }

    pub(crate) fn concurrent(&self, e: EventId, e2: EventId) -> bool {
        !self.leq(e, e2) && !self.leq(e2, e) && !self.in_conflict(e, e2)
    }

    pub fn is_configuration(&self, x: EventSet) -> bool {
        x.is_subset(self.all_events()) && self.closure(x) == x && self.consistent(x)
    }

    pub fn configuration(&self, x: EventSet) -> Result<Configuration, PesError> {
        self.check_set(x)?;
        if self.is_configuration(x) {
            Ok(Configuration(x))
        } else {
            Err(PesError::NotAConfiguration)
        }
    }

    /// Events that can be added to `c` keeping it a configuration.
    pub(crate) fn enabled(&self, c: Configuration) -> EventSet {
        let blocked = self.conflicts_of(c.0);
        self.all_events()
            .difference(c.0)
            .difference(blocked)
            .iter()
            .filter(|&e| self.strict_causes(e).is_subset(c.0))
            .collect()
    }

    /// All finite configurations, sorted by size and then by bit pattern.
    pub fn enumerate_configurations(&self) -> Vec<Configuration> {
        let mut seen: HashSet<Configuration> = HashSet::new();
        let mut queue = VecDeque::from([Configuration::EMPTY]);
        seen.insert(Configuration::EMPTY);
        while let Some(c) = queue.pop_front() {
            for e in self.enabled(c).iter() {
                let next = Configuration(c.0.with(e));
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        let mut out: Vec<Configuration> = seen.into_iter().collect();
        out.sort_by_key(|c| (c.len(), c.0 .0));
        out
    }

    pub fn visible_part(&self, x: EventSet) -> Result<EventSet, PesError> {
        self.check_set(x)?;
        Ok(x.intersection(self.visible))
    }

    pub(crate) fn visible_of(&self, x: EventSet) -> EventSet {
        x.intersection(self.visible)
    }

    /// Visible events outside `c` that are consistent with every member of `c`.
    pub fn residual(&self, c: Configuration) -> EventSet {
        self.visible
            .difference(c.0)
            .difference(self.conflicts_of(c.0))
    }

    /// Strict causal pairs `(e, e')` with `e < e'`.
    pub fn causality_pairs(&self) -> Vec<(EventId, EventId)> {
        let mut out = Vec::new();
        for e2 in self.events() {
            for e in self.strict_causes(e2).iter() {
                out.push((e, e2));
            }
        }
        out.sort();
        out
    }

    /// Covering pairs of the causal order (its transitive reduction).
    pub fn covering_pairs(&self) -> Vec<(EventId, EventId)> {
        self.causality_pairs()
            .into_iter()
            .filter(|&(e, e2)| {
                !self
                    .strict_causes(e2)
                    .iter()
                    .any(|m| m != e && self.lt(e, m))
            })
            .collect()
    }

    /// Conflict pairs `(e, e')` with `e < e'` by id.
    pub fn conflict_pairs(&self) -> Vec<(EventId, EventId)> {
        let mut out = Vec::new();
        for e in self.events() {
            for e2 in self.conflicts[e.index()].iter() {
                if e < e2 {
                    out.push((e, e2));
                }
            }
        }
        out
    }

    /// Minimal conflict pairs from which the stored conflict is the hereditary saturation.
    pub fn minimal_conflict_pairs(&self) -> Vec<(EventId, EventId)> {
        self.conflict_pairs()
            .into_iter()
            .filter(|&(e, e2)| {
                let inherited = self
                    .strict_causes(e)
                    .iter()
                    .any(|c| self.in_conflict(c, e2))
                    || self
                        .strict_causes(e2)
                        .iter()
                        .any(|c| self.in_conflict(e, c));
                !inherited
            })
            .collect()
    }

    /// The input description that regenerates this structure.
    pub fn to_raw(&self) -> RawPes {
        let name = |e: EventId| self.names[e.index()].clone();
        RawPes {
            name: self.name.clone(),
            events: self
                .events()
                .map(|e| (name(e), self.label(e).clone()))
                .collect(),
            causes: self
                .covering_pairs()
                .into_iter()
                .map(|(a, b)| (name(a), name(b)))
                .collect(),
            conflicts: self
                .minimal_conflict_pairs()
                .into_iter()
                .map(|(a, b)| (name(a), name(b)))
                .collect(),
        }
    }

    /// Set of visible labels.
    pub fn alphabet(&self) -> BTreeSet<String> {
        self.labels
            .iter()
            .filter_map(|l| match l {
                Label::Visible(n) => Some(n.clone()),
                Label::Tau => None,
            })
            .collect()
    }

    pub fn describe_set(&self, x: EventSet) -> String {
        let names: Vec<&str> = x.iter().map(|e| self.event_name(e)).collect();
        format!("{{{}}}", names.join(","))
    }
}
