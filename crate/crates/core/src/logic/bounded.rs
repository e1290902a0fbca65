//! Exhaustive search for separating formulas up to a depth.

use std::collections::{BTreeSet, HashSet};

use super::eval::ModelChecker;
use super::formula::{free_vars, BindSpec, Formula, Fragment, Var};
use crate::equivalence::Side;
use crate::pes::{Configuration, EventId, PrimeEventStructure};

/// Largest depth accepted by [`bounded_logical_equiv`].
pub const MAX_DEPTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedVerdict {
    /// A closed formula true on exactly one side, and that side.
    pub separator: Option<(Formula, Side)>,
    /// Distinct formulas (up to joint denotation) generated.
    pub explored: usize,
}

impl BoundedVerdict {
    pub fn separated(&self) -> bool {
        self.separator.is_some()
    }
}

type Key = (
    Vec<Var>,
    Vec<(Configuration, Vec<EventId>)>,
    Vec<(Configuration, Vec<EventId>)>,
);

struct Item {
    formula: Formula,
    closed: bool,
    depth: usize,
}

struct Search<'a> {
    fragment: Fragment,
    mcs: [ModelChecker<'a>; 2],
    labels: Vec<String>,
    pool: Vec<Var>,
    items: Vec<Item>,
    seen: HashSet<Key>,
    separator: Option<(Formula, Side)>,
}

impl Search<'_> {
    fn add(&mut self, formula: Formula, depth: usize) {
        if self.separator.is_some() {
            return;
        }
        let d0 = self.mcs[0]
            .denotation(&formula)
            .expect("enumerated formulas are well formed");
        let d1 = self.mcs[1]
            .denotation(&formula)
            .expect("enumerated formulas are well formed");
        let fv: Vec<Var> = free_vars(&formula).into_iter().collect();
        let key = (fv.clone(), d0.key(), d1.key());
        if !self.seen.insert(key) {
            return;
        }
        let closed = fv.is_empty();
        if closed {
            let empty = super::eval::Environment::new();
            let l = d0.contains(Configuration::EMPTY, &empty);
            let r = d1.contains(Configuration::EMPTY, &empty);
            if l != r {
                self.separator = Some((formula.clone(), if l { Side::Left } else { Side::Right }));
            }
        }
        self.items.push(Item {
            formula,
            closed,
            depth,
        });
    }

    fn boolean_operands_closed(&self) -> bool {
        matches!(
            self.fragment,
            Fragment::HennessyMilner | Fragment::Step | Fragment::Pomset
        )
    }

    fn level(&mut self, d: usize) {
        let count = self.items.len();
        let closed_only = self.boolean_operands_closed();
        for i in 0..count {
            let it = &self.items[i];
            if it.depth == d - 1
                && (it.closed || !closed_only)
                && !matches!(it.formula, Formula::Not(_))
            {
                let f = Formula::not(it.formula.clone());
                self.add(f, d);
            }
        }
        for i in 0..count {
            for j in i..count {
                let (a, b) = (&self.items[i], &self.items[j]);
                if a.depth.max(b.depth) != d - 1 || (closed_only && !(a.closed && b.closed)) {
                    continue;
                }
                let f = Formula::and(a.formula.clone(), b.formula.clone());
                self.add(f, d);
            }
        }
        for i in 0..count {
            self.diamonds(i, d);
        }
    }

    fn diamonds(&mut self, i: usize, d: usize) {
        let labels = self.labels.clone();
        match self.fragment {
            Fragment::HennessyMilner | Fragment::Step => {
                let body_depth = self.items[i].depth;
                let width = d - body_depth;
                if width == 0 || (self.fragment == Fragment::HennessyMilner && width > 1) {
                    return;
                }
                for multiset in multisets(&labels, width) {
                    let body = self.items[i].formula.clone();
                    let f = if width == 1 {
                        Formula::bind_exec(BindSpec::plain(&multiset[0], "x1"), body)
                    } else {
                        let parts = multiset
                            .iter()
                            .enumerate()
                            .map(|(k, a)| BindSpec::plain(a, &format!("x{}", k + 1)))
                            .collect();
                        Formula::step(parts, body)
                    };
                    self.add(f, d);
                }
            }
            _ => {
                if self.items[i].depth != d - 1 {
                    return;
                }
                let body = self.items[i].formula.clone();
                for spec in self.specs(&labels) {
                    self.add(Formula::bind_exec(spec.clone(), body.clone()), d);
                    if self.fragment == Fragment::Full {
                        self.add(Formula::bind(spec, body.clone()), d);
                    }
                }
                if self.fragment == Fragment::Full {
                    for z in self.pool.clone() {
                        self.add(Formula::exec(&z, body.clone()), d);
                    }
                }
            }
        }
    }

    /// Every header over the variable pool: bound variable, then each other variable
    /// placed in the cause list, the independence list or neither.
    fn specs(&self, labels: &[String]) -> Vec<BindSpec> {
        let mut out = Vec::new();
        for label in labels {
            for z in &self.pool {
                let others: Vec<&Var> = self.pool.iter().filter(|v| *v != z).collect();
                let mut code = vec![0u8; others.len()];
                loop {
                    let mut spec = BindSpec {
                        causes: vec![],
                        indep: vec![],
                        label: label.clone(),
                        var: z.clone(),
                    };
                    for (k, v) in others.iter().enumerate() {
                        match code[k] {
                            1 => spec.causes.push((*v).clone()),
                            2 => spec.indep.push((*v).clone()),
                            _ => {}
                        }
                    }
                    out.push(spec);
                    let Some(k) = code.iter().position(|&c| c < 2) else {
                        break;
                    };
                    code[k] += 1;
                    for c in &mut code[..k] {
                        *c = 0;
                    }
                }
            }
        }
        out
    }
}

fn multisets(labels: &[String], k: usize) -> Vec<Vec<String>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, a) in labels.iter().enumerate() {
        for mut rest in multisets(&labels[i..], k - 1) {
            rest.insert(0, a.clone());
            out.push(rest);
        }
    }
    out
}

/// Enumerates formulas of the fragment up to `depth` operators (each negation,
/// conjunction and binder counts one; `T` counts zero), over the visible labels of both
/// structures and the variables `z1..z{depth}`, and reports the first closed formula
/// that holds initially on exactly one side.
pub fn bounded_logical_equiv(
    left: &PrimeEventStructure,
    right: &PrimeEventStructure,
    fragment: Fragment,
    depth: usize,
) -> BoundedVerdict {
    assert!(
        depth <= MAX_DEPTH,
        "depth {depth} exceeds the maximum of {MAX_DEPTH}"
    );
    let labels: BTreeSet<String> = left
        .alphabet()
        .into_iter()
        .chain(right.alphabet())
        .collect();
    let mut search = Search {
        fragment,
        mcs: [ModelChecker::new(left), ModelChecker::new(right)],
        labels: labels.into_iter().collect(),
        pool: (1..=depth.max(1)).map(|i| format!("z{i}")).collect(),
        items: Vec::new(),
        seen: HashSet::new(),
        separator: None,
    };
    search.add(Formula::True, 0);
    for d in 1..=depth {
        if search.separator.is_some() {
            break;
        }
        search.level(d);
    }
    BoundedVerdict {
        separator: search.separator,
        explored: search.items.len(),
    }
}

/// Closed fixpoint formulas `mu X(). B` and `nu X(). B` with `B` built from `T`, `X()`,
/// conjunction, disjunction, `<<|a z|>>` and its dual, of depth at most `body_depth`.
pub fn fixpoint_formulas(labels: &[String], body_depth: usize) -> Vec<Formula> {
    let mut bodies: Vec<(Formula, usize)> = vec![(Formula::True, 0), (Formula::prop("X", &[]), 0)];
    for d in 1..=body_depth {
        let below = bodies.clone();
        for (i, (a, da)) in below.iter().enumerate() {
            for (b, db) in &below[i..] {
                if (*da).max(*db) == d - 1 {
                    bodies.push((Formula::and(a.clone(), b.clone()), d));
                    bodies.push((Formula::or(a.clone(), b.clone()), d));
                }
            }
        }
        for (body, _) in below.iter().filter(|(_, db)| *db == d - 1) {
            for l in labels {
                let spec = BindSpec::plain(l, "z");
                bodies.push((Formula::bind_exec(spec.clone(), body.clone()), d));
                let dual = Formula::DualExec("z".into(), Box::new(body.clone()));
                bodies.push((Formula::DualBind(spec, Box::new(dual)), d));
            }
        }
    }
    bodies
        .into_iter()
        .flat_map(|(b, _)| [Formula::mu("X", &[], b.clone()), Formula::nu("X", &[], b)])
        .collect()
}
