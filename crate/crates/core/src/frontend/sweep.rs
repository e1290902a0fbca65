//! Exhaustive enumeration of small event structures up to isomorphism.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::FrontendError;
use crate::pes::{Label, PrimeEventStructure, RawPes};

/// Largest structures a sweep will enumerate.
pub const SWEEP_MAX_EVENTS: usize = 6;
pub const SWEEP_MAX_ALPHABET: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub max_events: usize,
    pub max_tau: usize,
    pub alphabet: Vec<String>,
    /// Structures with fewer events are skipped.
    #[serde(default)]
    pub min_events: usize,
}

impl SweepSpec {
    pub fn new(max_events: usize, alphabet: &[&str], max_tau: usize) -> SweepSpec {
        SweepSpec {
            max_events,
            max_tau,
            alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
            min_events: 0,
        }
    }

    fn check(&self) -> Result<(), FrontendError> {
        if self.max_events > SWEEP_MAX_EVENTS {
            return Err(FrontendError::BoundsExceeded(format!(
                "at most {SWEEP_MAX_EVENTS} events, asked for {}",
                self.max_events
            )));
        }
        if self.alphabet.len() > SWEEP_MAX_ALPHABET {
            return Err(FrontendError::BoundsExceeded(format!(
                "at most {SWEEP_MAX_ALPHABET} labels, asked for {}",
                self.alphabet.len()
            )));
        }
        if self.alphabet.iter().any(|l| l == "tau" || l.is_empty()) {
            return Err(FrontendError::BoundsExceeded(
                "alphabet must list visible labels only".into(),
            ));
        }
        Ok(())
    }
}

/// `below[i]` are the strict causes of `i`, `conflict[i]` the events in conflict with it.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Shape {
    labels: Vec<Label>,
    below: Vec<u64>,
    conflict: Vec<u64>,
}

type Key = Vec<(Label, u64, u64)>;

fn permute_mask(mask: u64, pos_of: &[usize]) -> u64 {
    let mut out = 0;
    for (e, &p) in pos_of.iter().enumerate() {
        if mask >> e & 1 == 1 {
            out |= 1 << p;
        }
    }
    out
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    sigs.iter()
        .map(|s| sorted.binary_search(s).unwrap())
        .collect()
}

fn colours(s: &Shape) -> Vec<usize> {
    let n = s.labels.len();
    let mut col = rank(&s.labels);
    loop {
        let members = |mask: u64, col: &[usize]| {
            let mut v: Vec<usize> = (0..n)
                .filter(|&k| mask >> k & 1 == 1)
                .map(|k| col[k])
                .collect();
            v.sort();
            v
        };
        let sigs: Vec<_> = (0..n)
            .map(|i| {
                let above = (0..n)
                    .filter(|&k| s.below[k] >> i & 1 == 1)
                    .fold(0u64, |m, k| m | 1 << k);
                (
                    col[i],
                    members(s.below[i], &col),
                    members(above, &col),
                    members(s.conflict[i], &col),
                )
            })
            .collect();
        let next = rank(&sigs);
        let classes = |c: &[usize]| c.iter().max().map_or(0, |m| m + 1);
        if classes(&next) == classes(&col) {
            return next;
        }
        col = next;
    }
}

/// Lexicographically least encoding over orderings that respect the colour classes.
fn canonical(s: &Shape) -> (Key, Shape) {
    let n = s.labels.len();
    let col = colours(s);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&e| (col[e], e));
    let mut best: Option<(Key, Vec<usize>)> = None;
    let mut perm = order.clone();
    permute_within(&mut perm, 0, &col, &mut |seq: &[usize]| {
        let mut pos_of = vec![0; n];
        for (p, &e) in seq.iter().enumerate() {
            pos_of[e] = p;
        }
        let key: Key = seq
            .iter()
            .map(|&e| {
                (
                    s.labels[e].clone(),
                    permute_mask(s.below[e], &pos_of),
                    permute_mask(s.conflict[e], &pos_of),
                )
            })
            .collect();
        if best.as_ref().is_none_or(|(b, _)| key < *b) {
            best = Some((key, seq.to_vec()));
        }
    });
    let (key, _) = best.expect("at least one ordering");
    let shape = Shape {
        labels: key.iter().map(|k| k.0.clone()).collect(),
        below: key.iter().map(|k| k.1).collect(),
        conflict: key.iter().map(|k| k.2).collect(),
    };
    (key, shape)
}

/// Visits every arrangement of `seq` that only swaps events of equal colour.
fn permute_within(
    seq: &mut Vec<usize>,
    start: usize,
    col: &[usize],
    visit: &mut dyn FnMut(&[usize]),
) {
    if start == seq.len() {
        visit(seq);
        return;
    }
    let end = (start..seq.len())
        .find(|&k| col[seq[k]] != col[seq[start]])
        .unwrap_or(seq.len());
    permute_block(seq, start, end, col, visit);
}

fn permute_block(
    seq: &mut Vec<usize>,
    k: usize,
    end: usize,
    col: &[usize],
    visit: &mut dyn FnMut(&[usize]),
) {
    if k == end {
        permute_within(seq, end, col, visit);
        return;
    }
    for i in k..end {
        seq.swap(k, i);
        permute_block(seq, k + 1, end, col, visit);
        seq.swap(k, i);
    }
}

fn extensions(s: &Shape, labels: &[Label], max_tau: usize) -> Vec<Shape> {
    let n = s.labels.len();
    let all = (1u64 << n) - 1;
    let taus = s.labels.iter().filter(|l| l.is_tau()).count();
    let mut out = Vec::new();
    for causes in 0..=all {
        let members = (0..n).filter(|&k| causes >> k & 1 == 1);
        let down_closed = members.clone().all(|k| s.below[k] & !causes == 0);
        let consistent = members.clone().all(|k| s.conflict[k] & causes == 0);
        if !down_closed || !consistent {
            continue;
        }
        let inherited = members.fold(0u64, |m, k| m | s.conflict[k]);
        for conflicts in 0..=all {
            if conflicts & inherited != inherited || conflicts & causes != 0 {
                continue;
            }
            let up_closed = (0..n).all(|k| s.below[k] & conflicts == 0 || conflicts >> k & 1 == 1);
            if !up_closed {
                continue;
            }
            for label in labels {
                if label.is_tau() && taus >= max_tau {
                    continue;
                }
                let mut next = s.clone();
                next.labels.push(label.clone());
                next.below.push(causes);
                next.conflict.push(conflicts);
                for k in 0..n {
                    if conflicts >> k & 1 == 1 {
                        next.conflict[k] |= 1 << n;
                    }
                }
                out.push(next);
            }
        }
    }
    out
}

fn to_pes(s: &Shape) -> PrimeEventStructure {
    let n = s.labels.len();
    let name = |k: usize| format!("e{}", k + 1);
    let mut raw = RawPes::new();
    for (k, l) in s.labels.iter().enumerate() {
        raw = raw.event(&name(k), l.clone());
    }
    for j in 0..n {
        for i in 0..n {
            if s.below[j] >> i & 1 == 1 {
                raw = raw.cause(&name(i), &name(j));
            }
            if i < j && s.conflict[j] >> i & 1 == 1 {
                raw = raw.conflict(&name(i), &name(j));
            }
        }
    }
    raw.validate().expect("sweep shapes are well formed")
}

/// Every structure within the bounds, one per isomorphism class, ordered by size and
/// then by canonical encoding. Events are named `e1, e2, ..`.
pub fn sweep_small_pes(spec: &SweepSpec) -> Result<Vec<PrimeEventStructure>, FrontendError> {
    spec.check()?;
    let mut labels: Vec<Label> = spec.alphabet.iter().map(Label::visible).collect();
    labels.sort();
    labels.dedup();
    if spec.max_tau > 0 {
        labels.push(Label::Tau);
    }
    let empty = Shape {
        labels: Vec::new(),
        below: Vec::new(),
        conflict: Vec::new(),
    };
    let mut level: BTreeMap<Key, Shape> = BTreeMap::from([(Vec::new(), empty)]);
    let mut out = Vec::new();
    for size in 0..=spec.max_events {
        if size >= spec.min_events {
            out.extend(level.values().map(to_pes));
        }
        if size == spec.max_events {
            break;
        }
        let mut next = BTreeMap::new();
        for s in level.values() {
            for t in extensions(s, &labels, spec.max_tau) {
                let (key, shape) = canonical(&t);
                next.entry(key).or_insert(shape);
            }
        }
        level = next;
    }
    Ok(out)
}
