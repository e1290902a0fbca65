//! Property suites run over a sweep family.

use crate::equivalence::{check_with, verify_certificate, CheckOptions, EquivalenceKind, Relation};
use crate::logic::fragment_of;
use crate::pes::PrimeEventStructure;
use crate::transition::{weak_pomset_moves, weak_pomset_moves_by_paths, Strength};

use super::print_pes;

pub const SUITES: [&str; 5] = ["count", "moves", "hierarchy", "strong-weak", "certificates"];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub cases: usize,
    pub failures: Vec<String>,
}

fn one_line(p: &PrimeEventStructure) -> String {
    let text = print_pes(p);
    if text.is_empty() {
        "empty".into()
    } else {
        text.trim_end().replace('\n', "; ")
    }
}

fn pairs(
    family: &[PrimeEventStructure],
) -> impl Iterator<Item = (&PrimeEventStructure, &PrimeEventStructure)> {
    family
        .iter()
        .enumerate()
        .flat_map(move |(i, p)| family[i..].iter().map(move |q| (p, q)))
}

fn equivalent(kind: EquivalenceKind, p: &PrimeEventStructure, q: &PrimeEventStructure) -> bool {
    check_with(kind, p, q, CheckOptions::verdict_only()).equivalent
}

/// Moves from the definition filter agree with moves found by exploring firings.
fn moves(family: &[PrimeEventStructure]) -> SuiteOutcome {
    let mut out = SuiteOutcome::default();
    for p in family {
        for c in p.enumerate_configurations() {
            out.cases += 1;
            let mut a = weak_pomset_moves(p, c);
            let mut b = weak_pomset_moves_by_paths(p, c);
            a.sort();
            b.sort();
            if a != b {
                out.failures
                    .push(format!("{} at {}", one_line(p), p.describe_set(c.events())));
            }
        }
    }
    out
}

/// Each weak relation implies the coarser ones.
fn hierarchy(family: &[PrimeEventStructure]) -> SuiteOutcome {
    let mut out = SuiteOutcome::default();
    for (p, q) in pairs(family) {
        out.cases += 1;
        let v: Vec<bool> = Relation::ALL
            .iter()
            .map(|&r| equivalent(EquivalenceKind::weak(r), p, q))
            .collect();
        if let Some(k) = (1..v.len()).find(|&k| v[k] && !v[k - 1]) {
            out.failures.push(format!(
                "{} holds but {} fails: [{}] vs [{}]",
                EquivalenceKind::weak(Relation::ALL[k]),
                EquivalenceKind::weak(Relation::ALL[k - 1]),
                one_line(p),
                one_line(q)
            ));
        }
    }
    out
}

/// Each strong relation implies its weak counterpart.
fn strong_weak(family: &[PrimeEventStructure]) -> SuiteOutcome {
    let mut out = SuiteOutcome::default();
    for (p, q) in pairs(family) {
        for r in Relation::ALL {
            out.cases += 1;
            if equivalent(EquivalenceKind::strong(r), p, q)
                && !equivalent(EquivalenceKind::weak(r), p, q)
            {
                out.failures.push(format!(
                    "strong but not weak {r:?}: [{}] vs [{}]",
                    one_line(p),
                    one_line(q)
                ));
            }
        }
    }
    out
}

/// Inequivalent pairs get a certificate in the right fragment that holds on exactly
/// one side. Downward-closed pairs may legitimately lack one.
fn certificates(family: &[PrimeEventStructure]) -> SuiteOutcome {
    let mut out = SuiteOutcome::default();
    for (p, q) in pairs(family) {
        for r in Relation::ALL {
            let kind = EquivalenceKind {
                relation: r,
                strength: Strength::Weak,
            };
            let v = check_with(
                kind,
                p,
                q,
                CheckOptions {
                    trace: false,
                    ..CheckOptions::default()
                },
            );
            if v.equivalent {
                continue;
            }
            out.cases += 1;
            let pair = format!("{kind}: [{}] vs [{}]", one_line(p), one_line(q));
            match &v.certificate {
                None if r == Relation::Hhp => {}
                None => out.failures.push(format!("no certificate for {pair}")),
                Some(c) => {
                    if !fragment_of(&c.formula).contains(&r.fragment()) {
                        out.failures.push(format!(
                            "certificate outside its fragment for {pair}: {}",
                            c.formula
                        ));
                    }
                    if verify_certificate(p, q, c) != Ok(true) {
                        out.failures.push(format!(
                            "certificate does not separate {pair}: {}",
                            c.formula
                        ));
                    }
                }
            }
        }
    }
    out
}

pub fn run_suite(name: &str, family: &[PrimeEventStructure]) -> Result<SuiteOutcome, String> {
    Ok(match name {
        "count" => SuiteOutcome {
            cases: family.len(),
            failures: Vec::new(),
        },
        "moves" => moves(family),
        "hierarchy" => hierarchy(family),
        "strong-weak" => strong_weak(family),
        "certificates" => certificates(family),
        other => {
            return Err(format!(
                "unknown suite `{other}`, expected one of {}",
                SUITES.join(", ")
            ))
        }
    })
}
