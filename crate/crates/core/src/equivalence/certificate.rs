//! Distinguishing formulas read off the refinement rounds.

use std::collections::HashMap;

use super::flat::FlatGame;
use super::game::{Reason, Refinement, Side};
use super::posetal::{self, PosetalGame};
use super::{
    check_with, Certificate, CheckOptions, EquivalenceError, EquivalenceKind, Relation, Verdict,
};
use crate::logic::bounded::bounded_logical_equiv;
use crate::logic::formula::rename_free;
use crate::logic::{pomset_formula, BindSpec, Formula, Fragment, McError, ModelChecker};
use crate::pes::{EventId, Label, PrimeEventStructure};
use crate::pomset::Pomset;
use crate::transition::Strength;

fn label_name(l: &Label) -> String {
    match l {
        Label::Visible(a) => a.clone(),
        Label::Tau => "tau".to_string(),
    }
}

fn diamond(relation: Relation, p: &Pomset, body: Formula) -> Formula {
    match relation {
        Relation::Interleaving => {
            Formula::bind_exec(BindSpec::plain(&label_name(p.label_at(0)), "x1"), body)
        }
        Relation::Step if p.len() == 1 => {
            Formula::bind_exec(BindSpec::plain(&label_name(p.label_at(0)), "x1"), body)
        }
        Relation::Step => Formula::step(
            (0..p.len())
                .map(|i| BindSpec::plain(&label_name(p.label_at(i)), &format!("x{}", i + 1)))
                .collect(),
            body,
        ),
        _ => pomset_formula(p, body),
    }
}

fn oriented(sub: (Formula, Side), mover: Side) -> Formula {
    if sub.1 == mover {
        sub.0
    } else {
        Formula::not(sub.0)
    }
}

fn conjoin(mut parts: Vec<Formula>) -> Formula {
    parts.sort();
    parts.dedup();
    Formula::conjunction(parts)
}

pub(crate) fn flat_certificate(
    fg: &FlatGame<'_>,
    refinement: &Refinement,
    root: usize,
) -> Certificate {
    fn go(
        fg: &FlatGame<'_>,
        r: &Refinement,
        s: usize,
        memo: &mut HashMap<usize, (Formula, Side)>,
    ) -> (Formula, Side) {
        if let Some(done) = memo.get(&s) {
            return done.clone();
        }
        let Some(Reason::Attack(i)) = fg.game.reason(r, s) else {
            unreachable!("configuration pairs are only removed by moves")
        };
        let attack = &fg.game.attacks[s][i];
        let subs = attack
            .responses
            .iter()
            .map(|&(_, t)| oriented(go(fg, r, t, memo), attack.side))
            .collect();
        let out = (
            diamond(fg.kind.relation, &fg.classes[attack.mv.0], conjoin(subs)),
            attack.side,
        );
        memo.insert(s, out.clone());
        out
    }
    let (formula, satisfied_by) = go(fg, refinement, root, &mut HashMap::new());
    Certificate {
        formula,
        satisfied_by,
    }
}

fn canonical(l: EventId, r: EventId) -> String {
    format!("v{}_{}", l.0, r.0)
}

/// History-preserving certificate with free variables `v{l}_{r}` naming the pairs of the
/// position's isomorphism. `None` when a position was lost through a prefix or the
/// depth bound is exceeded.
fn hp_formula(
    pg: &PosetalGame<'_>,
    r: &Refinement,
    s: usize,
    budget: usize,
    memo: &mut HashMap<usize, Option<(Formula, Side)>>,
) -> Option<(Formula, Side)> {
    if let Some(done) = memo.get(&s) {
        return done.clone();
    }
    let out = (|| {
        let Some(Reason::Attack(i)) = pg.game.reason(r, s) else {
            return None;
        };
        if budget == 0 {
            return None;
        }
        let attack = &pg.game.attacks[s][i];
        let t = &pg.triples[s];
        let (mover, e) = match attack.side {
            Side::Left => (pg.left, attack.mv.0),
            Side::Right => (pg.right, attack.mv.0),
        };
        let z = format!("z{}", t.iso.len() + 1);
        let mut spec = BindSpec {
            causes: vec![],
            indep: vec![],
            label: label_name(mover.label(e)),
            var: z.clone(),
        };
        for (a, b) in t.iso.pairs() {
            let own = if attack.side == Side::Left { a } else { b };
            if mover.lt(own, e) {
                spec.causes.push(canonical(a, b));
            } else {
                spec.indep.push(canonical(a, b));
            }
        }
        let mut subs = Vec::new();
        for &((answer, _), target) in &attack.responses {
            let sub = oriented(hp_formula(pg, r, target, budget - 1, memo)?, attack.side);
            let fresh = match attack.side {
                Side::Left => canonical(e, answer),
                Side::Right => canonical(answer, e),
            };
            subs.push(rename_free(&sub, &fresh, &z));
        }
        Some((Formula::bind_exec(spec, conjoin(subs)), attack.side))
    })();
    memo.insert(s, out.clone());
    out
}

pub(crate) fn posetal_certificate(
    pg: &PosetalGame<'_>,
    refinement: &Refinement,
    options: CheckOptions,
) -> Option<Certificate> {
    let root = posetal::root(pg);
    let budget = match pg.kind.relation {
        Relation::Hhp => options.hhp_depth_bound,
        _ => usize::MAX,
    };
    if let Some((formula, satisfied_by)) =
        hp_formula(pg, refinement, root, budget, &mut HashMap::new())
    {
        return Some(Certificate {
            formula,
            satisfied_by,
        });
    }
    if pg.kind.relation != Relation::Hhp {
        return None;
    }
    // Lost only through prefixes: try the history-preserving game, then a bounded search.
    let hp = posetal::build(
        EquivalenceKind {
            relation: Relation::Hp,
            ..pg.kind
        },
        pg.left,
        pg.right,
        options.prefix_mode,
    );
    let hp_refinement = hp.game.refine();
    let hp_root = posetal::root(&hp);
    if !hp_refinement.alive(hp_root) {
        if let Some((formula, satisfied_by)) =
            hp_formula(&hp, &hp_refinement, hp_root, budget, &mut HashMap::new())
        {
            return Some(Certificate {
                formula,
                satisfied_by,
            });
        }
    }
    let depth = options.hhp_depth_bound.min(3);
    let found = bounded_logical_equiv(pg.left, pg.right, Fragment::Full, depth);
    if let Some((formula, satisfied_by)) = found.separator {
        return Some(Certificate {
            formula,
            satisfied_by,
        });
    }
    if options.hhp_depth_bound >= 6 {
        return split_futures(pg.left, pg.right);
    }
    None
}

/// Formulas `(a z)(<<z>> p & <<z>> q)` with `p`, `q` of depth at most three: one bound
/// event that can be executed into two different futures. This separates the pairs
/// where the same event on one side plays the part of two events on the other.
fn split_futures(left: &PrimeEventStructure, right: &PrimeEventStructure) -> Option<Certificate> {
    let labels: Vec<String> = left
        .alphabet()
        .into_iter()
        .chain(right.alphabet())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let dia = |l: &str, var: &str, body: Formula| Formula::bind_exec(BindSpec::plain(l, var), body);
    let mut pool = Vec::new();
    for l in &labels {
        pool.push(dia(l, "w1", Formula::True));
        for m in &labels {
            pool.push(dia(l, "w1", dia(m, "w2", Formula::True)));
            pool.push(dia(l, "w1", Formula::not(dia(m, "w2", Formula::True))));
        }
    }
    let negated: Vec<Formula> = pool.iter().map(|p| Formula::not(p.clone())).collect();
    pool.extend(negated);
    let (ml, mr) = (ModelChecker::new(left), ModelChecker::new(right));
    for l in &labels {
        for (i, p) in pool.iter().enumerate() {
            for q in &pool[i..] {
                let body =
                    Formula::and(Formula::exec("z", p.clone()), Formula::exec("z", q.clone()));
                let formula = Formula::bind(BindSpec::plain(l, "z"), body);
                let (a, b) = (
                    ml.holds_initially(&formula).ok()?,
                    mr.holds_initially(&formula).ok()?,
                );
                if a != b {
                    let satisfied_by = if a { Side::Left } else { Side::Right };
                    return Some(Certificate {
                        formula,
                        satisfied_by,
                    });
                }
            }
        }
    }
    None
}

/// A formula separating the two structures for a failed verdict. Strong relations and
/// hereditary cases beyond the search bound yield `None`.
pub fn distinguishing_formula(
    kind: EquivalenceKind,
    left: &PrimeEventStructure,
    right: &PrimeEventStructure,
    failed: &Verdict,
) -> Result<Option<Certificate>, EquivalenceError> {
    if failed.equivalent {
        return Err(EquivalenceError::NotApplicable);
    }
    if let Some(c) = &failed.certificate {
        return Ok(Some(c.clone()));
    }
    if kind.strength == Strength::Strong {
        return Ok(None);
    }
    let options = CheckOptions {
        certificate: true,
        trace: false,
        ..CheckOptions::default()
    };
    let again = check_with(kind, left, right, options);
    if again.equivalent {
        return Err(EquivalenceError::NotApplicable);
    }
    Ok(again.certificate)
}

/// Model-checks a certificate on both structures: it must hold on the claimed side only.
pub fn verify_certificate(
    left: &PrimeEventStructure,
    right: &PrimeEventStructure,
    certificate: &Certificate,
) -> Result<bool, McError> {
    let on_left = ModelChecker::new(left).holds_initially(&certificate.formula)?;
    let on_right = ModelChecker::new(right).holds_initially(&certificate.formula)?;
    Ok(match certificate.satisfied_by {
        Side::Left => on_left && !on_right,
        Side::Right => on_right && !on_left,
    })
}
