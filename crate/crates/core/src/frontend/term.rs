//! A small process calculus compiled to event structures.
//!
//! `0` is inaction, `a.P` prefixes `P` with an `a` event, `P | Q` runs in parallel
//! and `P + Q` chooses. Prefix binds tightest, then `|`, then `+`.

use std::fmt;

use super::FrontendError;
use crate::pes::{Label, PrimeEventStructure, RawPes};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProcessTerm {
    Nil,
    Prefix(Label, Box<ProcessTerm>),
    Choice(Box<ProcessTerm>, Box<ProcessTerm>),
    Par(Box<ProcessTerm>, Box<ProcessTerm>),
}

impl fmt::Display for ProcessTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProcessTerm::Nil => f.write_str("0"),
            ProcessTerm::Prefix(l, p) => match **p {
                ProcessTerm::Nil | ProcessTerm::Prefix(..) => write!(f, "{l}.{p}"),
                _ => write!(f, "{l}.({p})"),
            },
            ProcessTerm::Choice(p, q) => match **q {
                ProcessTerm::Choice(..) => write!(f, "{p} + ({q})"),
                _ => write!(f, "{p} + {q}"),
            },
            ProcessTerm::Par(p, q) => {
                let left = match **p {
                    ProcessTerm::Choice(..) => format!("({p})"),
                    _ => p.to_string(),
                };
                let right = match **q {
                    ProcessTerm::Choice(..) | ProcessTerm::Par(..) => format!("({q})"),
                    _ => q.to_string(),
                };
                write!(f, "{left} | {right}")
            }
        }
    }
}

struct TermParser<'a> {
    src: &'a str,
    pos: usize,
}

impl TermParser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn error(&self, message: impl Into<String>) -> FrontendError {
        FrontendError::syntax(1, self.src[..self.pos].chars().count() + 1, message)
    }

    fn choice(&mut self) -> Result<ProcessTerm, FrontendError> {
        let mut lhs = self.par()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            lhs = ProcessTerm::Choice(Box::new(lhs), Box::new(self.par()?));
        }
        Ok(lhs)
    }

    fn par(&mut self) -> Result<ProcessTerm, FrontendError> {
        let mut lhs = self.seq()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            lhs = ProcessTerm::Par(Box::new(lhs), Box::new(self.seq()?));
        }
        Ok(lhs)
    }

    fn seq(&mut self) -> Result<ProcessTerm, FrontendError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let t = self.choice()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(t)
            }
            Some(c) if c.is_ascii_alphanumeric() || c == '_' => {
                let start = self.pos;
                let len = self.src[start..]
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .unwrap_or(self.src.len() - start);
                let word = &self.src[start..start + len];
                self.pos += len;
                if word == "0" {
                    return Ok(ProcessTerm::Nil);
                }
                let label = Label::parse(word);
                if self.peek() == Some('.') {
                    self.pos += 1;
                    Ok(ProcessTerm::Prefix(label, Box::new(self.seq()?)))
                } else {
                    Ok(ProcessTerm::Prefix(label, Box::new(ProcessTerm::Nil)))
                }
            }
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of term")),
        }
    }
}

pub fn parse_term(text: &str) -> Result<ProcessTerm, FrontendError> {
    let mut p = TermParser { src: text, pos: 0 };
    let t = p.choice()?;
    if let Some(c) = p.peek() {
        return Err(p.error(format!("unexpected `{c}` after term")));
    }
    Ok(t)
}

struct Compiler {
    raw: RawPes,
}

impl Compiler {
    /// Returns the indices of the events created for `t`.
    fn go(&mut self, t: &ProcessTerm) -> Vec<usize> {
        match t {
            ProcessTerm::Nil => Vec::new(),
            ProcessTerm::Prefix(label, rest) => {
                let me = self.raw.events.len();
                self.raw
                    .events
                    .push((format!("e{}", me + 1), label.clone()));
                let below = self.go(rest);
                for &k in &below {
                    self.raw.causes.push((self.name(me), self.name(k)));
                }
                let mut out = vec![me];
                out.extend(below);
                out
            }
            ProcessTerm::Par(p, q) => {
                let mut out = self.go(p);
                out.extend(self.go(q));
                out
            }
            ProcessTerm::Choice(p, q) => {
                let left = self.go(p);
                let right = self.go(q);
                for a in self.initial(&left) {
                    for b in self.initial(&right) {
                        self.raw.conflicts.push((self.name(a), self.name(b)));
                    }
                }
                let mut out = left;
                out.extend(right);
                out
            }
        }
    }

    fn name(&self, k: usize) -> String {
        self.raw.events[k].0.clone()
    }

    fn initial(&self, events: &[usize]) -> Vec<usize> {
        events
            .iter()
            .copied()
            .filter(|&k| {
                !self
                    .raw
                    .causes
                    .iter()
                    .any(|(_, b)| *b == self.raw.events[k].0)
            })
            .collect()
    }
}

/// Events are named `e1, e2, ..` in the order their prefixes appear in the term.
pub fn compile_term(term: &ProcessTerm) -> Result<PrimeEventStructure, FrontendError> {
    let mut c = Compiler { raw: RawPes::new() };
    c.go(term);
    c.raw
        .validate()
        .map_err(|source| FrontendError::Invalid { line: None, source })
}
