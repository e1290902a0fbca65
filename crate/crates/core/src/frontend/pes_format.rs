//! The line-oriented event structure format.
//!
//! ```text
//! pes a-tau-b
//! event e1 a
//! event e2 tau
//! event e3 b
//! cause e1 e2      # generating pairs, closed transitively
//! cause e2 e3
//! conflict e1 e4   # generating pairs, saturated hereditarily
//! ```

use std::collections::HashSet;
use std::fmt::Write;

use super::FrontendError;
use crate::pes::{Label, PesError, PrimeEventStructure, RawPes, MAX_EVENTS};

/// Parses without validating; references to undeclared events are still reported.
pub fn parse_raw_pes(text: &str) -> Result<(RawPes, Vec<LineRef>), FrontendError> {
    let mut raw = RawPes::new();
    let mut refs = Vec::new();
    let mut declared: HashSet<String> = HashSet::new();
    let mut header_seen = false;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let content = line.split('#').next().unwrap_or("");
        let tokens: Vec<(usize, &str)> = tokens_with_columns(content);
        let Some(&(col, keyword)) = tokens.first() else {
            continue;
        };
        let args = &tokens[1..];
        let arity = |n: usize| -> Result<(), FrontendError> {
            if args.len() == n {
                Ok(())
            } else {
                let column = args.get(n).map_or(col + keyword.len(), |a| a.0);
                Err(FrontendError::syntax(
                    lineno,
                    column,
                    format!("`{keyword}` takes {n} argument(s)"),
                ))
            }
        };
        match keyword {
            "pes" => {
                if header_seen || !raw.events.is_empty() {
                    return Err(FrontendError::syntax(
                        lineno,
                        col,
                        "`pes` header must come first and appear once",
                    ));
                }
                arity(1)?;
                header_seen = true;
                raw.name = Some(args[0].1.to_string());
            }
            "event" => {
                arity(2)?;
                let id = args[0].1;
                if !declared.insert(id.to_string()) {
                    return Err(FrontendError::invalid(
                        lineno,
                        PesError::DuplicateEvent(id.to_string()),
                    ));
                }
                if raw.events.len() == MAX_EVENTS {
                    return Err(FrontendError::invalid(
                        lineno,
                        PesError::TooManyEvents(MAX_EVENTS + 1),
                    ));
                }
                raw.events.push((id.to_string(), Label::parse(args[1].1)));
                refs.push(LineRef {
                    line: lineno,
                    kind: LineKind::Event,
                    ids: vec![id.to_string()],
                });
            }
            "cause" | "conflict" => {
                arity(2)?;
                for &(_, id) in args {
                    if !declared.contains(id) {
                        return Err(FrontendError::invalid(
                            lineno,
                            PesError::DanglingEvent(id.to_string()),
                        ));
                    }
                }
                let pair = (args[0].1.to_string(), args[1].1.to_string());
                let kind = if keyword == "cause" {
                    LineKind::Cause
                } else {
                    LineKind::Conflict
                };
                refs.push(LineRef {
                    line: lineno,
                    kind,
                    ids: vec![pair.0.clone(), pair.1.clone()],
                });
                if kind == LineKind::Cause {
                    raw.causes.push(pair);
                } else {
                    raw.conflicts.push(pair);
                }
            }
            other => {
                return Err(FrontendError::syntax(
                    lineno,
                    col,
                    format!("unknown directive `{other}`"),
                ));
            }
        }
    }
    Ok((raw, refs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineKind {
    Event,
    Cause,
    Conflict,
}

/// Source line of a declaration, used to place validation errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineRef {
    pub line: usize,
    pub kind: LineKind,
    pub ids: Vec<String>,
}

fn tokens_with_columns(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(b)) => {
                out.push((b + 1, &s[b..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(b) = start {
        out.push((b + 1, &s[b..]));
    }
    out
}

fn locate(err: &PesError, refs: &[LineRef]) -> Option<usize> {
    let find = |kind: LineKind, id: &str| {
        refs.iter()
            .find(|r| r.kind == kind && r.ids.iter().any(|x| x == id))
    };
    let hit = match err {
        PesError::CyclicCausality(id) => find(LineKind::Cause, id),
        PesError::SelfConflict(id) => find(LineKind::Conflict, id),
        PesError::CausalConflictOverlap(a, b) => {
            find(LineKind::Conflict, a).or_else(|| find(LineKind::Conflict, b))
        }
        PesError::DanglingEvent(id) | PesError::DuplicateEvent(id) => find(LineKind::Event, id),
        _ => None,
    };
    hit.map(|r| r.line)
}

pub fn parse_pes(text: &str) -> Result<PrimeEventStructure, FrontendError> {
    let (raw, refs) = parse_raw_pes(text)?;
    raw.validate().map_err(|e| FrontendError::Invalid {
        line: locate(&e, &refs),
        source: e,
    })
}

/// Prints the covering causal pairs and minimal conflict pairs; parsing the result
/// gives back an equal structure.
pub fn print_pes(pes: &PrimeEventStructure) -> String {
    let raw = pes.to_raw();
    let mut out = String::new();
    if let Some(name) = &raw.name {
        writeln!(out, "pes {name}").unwrap();
    }
    for (id, label) in &raw.events {
        writeln!(out, "event {id} {label}").unwrap();
    }
    for (a, b) in &raw.causes {
        writeln!(out, "cause {a} {b}").unwrap();
    }
    for (a, b) in &raw.conflicts {
        writeln!(out, "conflict {a} {b}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1_LEFT: &str =
        "pes a-tau-b\nevent e1 a\nevent e2 tau\nevent e3 b\ncause e1 e2\ncause e2 e3\n";

    #[test]
    fn parses_and_prints() {
        let p = parse_pes(FIG1_LEFT).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.is_tau(p.event_by_name("e2").unwrap()));
        assert_eq!(print_pes(&p), FIG1_LEFT);
        assert_eq!(parse_pes(&print_pes(&p)).unwrap(), p);
        assert!(parse_pes("pes empty\n").unwrap().is_empty());
        assert!(parse_pes("# nothing\n\n").unwrap().is_empty());
    }

    #[test]
    fn error_positions() {
        let err = parse_pes("pes x\nevent e1 a\ncause e1 e9\n").unwrap_err();
        assert_eq!(
            err,
            FrontendError::Invalid {
                line: Some(3),
                source: PesError::DanglingEvent("e9".into())
            }
        );
        let err = parse_pes("event e1 a\nevent e2 b\ncause e1 e2\nconflict e1 e2\n").unwrap_err();
        assert!(matches!(
            err,
            FrontendError::Invalid {
                line: Some(4),
                source: PesError::CausalConflictOverlap(..)
            }
        ));
        let err = parse_pes("event e1 a\nfoo bar\n").unwrap_err();
        assert!(matches!(
            err,
            FrontendError::Syntax {
                line: 2,
                column: 1,
                ..
            }
        ));
        let err = parse_pes("event e1\n").unwrap_err();
        assert!(matches!(err, FrontendError::Syntax { line: 1, .. }));
    }
}
