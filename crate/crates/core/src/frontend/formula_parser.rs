//! Concrete syntax of formulas, as produced by the `Display` printer.
//!
//! ```text
//! phi ::= T | !phi | phi & phi | phi | phi
//!       | ({x,..}, {y,..}~ << a z) phi       binding
//!       | {{x,..}, {y,..}~ << a z} phi       dual binding
//!       | <<z>> phi | [[z]] phi              execution and its dual
//!       | <<|{x,..}, {y,..}~ << a z|>> phi   bind then execute
//!       | (<<|..|>> (x) <<|..|>>) phi        step product
//!       | X(x,..) | mu X(x,..). phi | nu X(x,..). phi
//! ```
//! Prefix operators bind tighter than `&`, which binds tighter than `|`.

use std::collections::HashMap;

use super::FrontendError;
use crate::logic::{BindSpec, Formula, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LBindExec,
    RBindExec,
    LAngle,
    RAngle,
    LBox,
    RBox,
    Otimes,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Tilde,
    Amp,
    Bar,
    Bang,
    Dot,
    Eof,
}

impl Tok {
    fn show(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
            other => format!(
                "`{}`",
                match other {
                    Tok::LBindExec => "<<|",
                    Tok::RBindExec => "|>>",
                    Tok::LAngle => "<<",
                    Tok::RAngle => ">>",
                    Tok::LBox => "[[",
                    Tok::RBox => "]]",
                    Tok::Otimes => "(x)",
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::LBrace => "{",
                    Tok::RBrace => "}",
                    Tok::Comma => ",",
                    Tok::Tilde => "~",
                    Tok::Amp => "&",
                    Tok::Bar => "|",
                    Tok::Bang => "!",
                    Tok::Dot => ".",
                    _ => unreachable!(),
                }
            ),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '-'
}

fn tokenize(src: &str) -> Result<Vec<Spanned>, FrontendError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out: Vec<Spanned> = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let rest_starts = |i: usize, pat: &str| {
        pat.chars()
            .enumerate()
            .all(|(k, c)| chars.get(i + k) == Some(&c))
    };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let after_bind_exec = matches!(
            out.last(),
            Some(Spanned {
                tok: Tok::RBindExec,
                ..
            })
        );
        let fixed: &[(&str, Tok)] = &[
            ("<<|", Tok::LBindExec),
            ("|>>", Tok::RBindExec),
            ("<<", Tok::LAngle),
            (">>", Tok::RAngle),
            ("[[", Tok::LBox),
            ("]]", Tok::RBox),
        ];
        let mut matched = None;
        if after_bind_exec && rest_starts(i, "(x)") {
            matched = Some((3, Tok::Otimes));
        }
        if matched.is_none() {
            matched = fixed
                .iter()
                .find(|(p, _)| rest_starts(i, p))
                .map(|(p, t)| (p.len(), t.clone()));
        }
        if matched.is_none() {
            matched = match c {
                '(' => Some((1, Tok::LParen)),
                ')' => Some((1, Tok::RParen)),
                '{' => Some((1, Tok::LBrace)),
                '}' => Some((1, Tok::RBrace)),
                ',' => Some((1, Tok::Comma)),
                '~' => Some((1, Tok::Tilde)),
                '&' => Some((1, Tok::Amp)),
                '|' => Some((1, Tok::Bar)),
                '!' => Some((1, Tok::Bang)),
                '.' => Some((1, Tok::Dot)),
                _ => None,
            };
        }
        if let Some((len, tok)) = matched {
            out.push(Spanned { tok, line, col });
            i += len;
            col += len;
            continue;
        }
        if is_ident_char(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            out.push(Spanned {
                tok: Tok::Ident(word),
                line,
                col,
            });
            col += i - start;
            continue;
        }
        return Err(FrontendError::syntax(
            line,
            col,
            format!("unexpected character `{c}`"),
        ));
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn error(&self, message: impl Into<String>) -> FrontendError {
        let t = &self.toks[self.pos];
        FrontendError::syntax(t.line, t.col, message)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), FrontendError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!(
                "expected {}, found {}",
                want.show(),
                self.peek().show()
            )))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, FrontendError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.error(format!("expected {what}, found {}", other.show()))),
        }
    }

    fn or(&mut self) -> Result<Formula, FrontendError> {
        let lhs = self.and()?;
        self.or_rest(lhs)
    }

    fn or_rest(&mut self, mut lhs: Formula) -> Result<Formula, FrontendError> {
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, FrontendError> {
        let lhs = self.unary()?;
        self.and_rest(lhs)
    }

    fn and_rest(&mut self, mut lhs: Formula) -> Result<Formula, FrontendError> {
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn vlist(&mut self) -> Result<Vec<Var>, FrontendError> {
        self.expect(Tok::LBrace)?;
        let mut vars = Vec::new();
        if *self.peek() != Tok::RBrace {
            loop {
                vars.push(self.ident("a variable")?);
                if *self.peek() != Tok::Comma {
                    break;
                }
                self.bump();
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(vars)
    }

    /// `{x,..}[,] {y,..}~ << a z`
    fn header(&mut self) -> Result<BindSpec, FrontendError> {
        let causes = self.vlist()?;
        if *self.peek() == Tok::Comma {
            self.bump();
        }
        let indep = self.vlist()?;
        self.expect(Tok::Tilde)?;
        self.expect(Tok::LAngle)?;
        if matches!(self.peek(), Tok::Ident(s) if s == "tau") {
            return Err(self.error("the silent label cannot be bound"));
        }
        let label = self.ident("a label")?;
        let var = self.ident("a variable")?;
        Ok(BindSpec {
            causes,
            indep,
            label,
            var,
        })
    }

    fn bind_exec_header(&mut self) -> Result<BindSpec, FrontendError> {
        self.expect(Tok::LBindExec)?;
        let spec = self.header()?;
        self.expect(Tok::RBindExec)?;
        Ok(spec)
    }

    fn args(&mut self) -> Result<Vec<Var>, FrontendError> {
        self.expect(Tok::LParen)?;
        let vars = if *self.peek() == Tok::LBrace {
            self.vlist()?
        } else {
            let mut vars = Vec::new();
            if *self.peek() != Tok::RParen {
                loop {
                    vars.push(self.ident("a variable")?);
                    if *self.peek() != Tok::Comma {
                        break;
                    }
                    self.bump();
                }
            }
            vars
        };
        self.expect(Tok::RParen)?;
        Ok(vars)
    }

    fn unary(&mut self) -> Result<Formula, FrontendError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LAngle => {
                self.bump();
                let z = self.ident("a variable")?;
                self.expect(Tok::RAngle)?;
                Ok(Formula::exec(&z, self.unary()?))
            }
            Tok::LBox => {
                self.bump();
                let z = self.ident("a variable")?;
                self.expect(Tok::RBox)?;
                Ok(Formula::DualExec(z, Box::new(self.unary()?)))
            }
            Tok::LBindExec => {
                let spec = self.bind_exec_header()?;
                Ok(Formula::bind_exec(spec, self.unary()?))
            }
            Tok::LBrace => {
                self.bump();
                let spec = self.header()?;
                self.expect(Tok::RBrace)?;
                Ok(Formula::DualBind(spec, Box::new(self.unary()?)))
            }
            Tok::LParen => self.paren(),
            Tok::Ident(word) => {
                self.bump();
                match word.as_str() {
                    "T" => Ok(Formula::True),
                    "mu" | "nu" => {
                        let name = self.ident("a proposition name")?;
                        let params = self.args()?;
                        self.expect(Tok::Dot)?;
                        let body = Box::new(self.unary()?);
                        Ok(if word == "mu" {
                            Formula::Mu(name, params, body)
                        } else {
                            Formula::Nu(name, params, body)
                        })
                    }
                    _ if *self.peek() == Tok::LParen => Ok(Formula::Prop(word, self.args()?)),
                    _ => {
                        self.pos -= 1;
                        Err(self.error(format!("unexpected identifier `{word}`")))
                    }
                }
            }
            other => Err(self.error(format!("expected a formula, found {}", other.show()))),
        }
    }

    fn paren(&mut self) -> Result<Formula, FrontendError> {
        self.expect(Tok::LParen)?;
        match (self.peek(), self.peek_at(1)) {
            (Tok::LBrace, Tok::Ident(_) | Tok::RBrace) => {
                let spec = self.header()?;
                self.expect(Tok::RParen)?;
                Ok(Formula::bind(spec, self.unary()?))
            }
            (Tok::LBindExec, _) => {
                let first = self.bind_exec_header()?;
                if matches!(self.peek(), Tok::Otimes | Tok::RParen) {
                    let mut parts = vec![first];
                    while *self.peek() == Tok::Otimes {
                        self.bump();
                        parts.push(self.bind_exec_header()?);
                    }
                    self.expect(Tok::RParen)?;
                    return Ok(Formula::step(parts, self.unary()?));
                }
                let lhs = Formula::bind_exec(first, self.unary()?);
                let lhs = self.and_rest(lhs)?;
                let phi = self.or_rest(lhs)?;
                self.expect(Tok::RParen)?;
                Ok(phi)
            }
            _ => {
                let phi = self.or()?;
                self.expect(Tok::RParen)?;
                Ok(phi)
            }
        }
    }
}

/// Every application of a proposition must match the arity of its binder, and free
/// propositions must be used with one arity throughout.
fn check_arity(phi: &Formula) -> Result<(), FrontendError> {
    fn go(
        phi: &Formula,
        scope: &mut Vec<(String, usize)>,
        free: &mut HashMap<String, usize>,
    ) -> Result<(), FrontendError> {
        let arity_err = |name: &str, expected, got| FrontendError::Arity {
            name: name.to_string(),
            expected,
            got,
        };
        match phi {
            Formula::True => Ok(()),
            Formula::Prop(name, args) => match scope.iter().rev().find(|(n, _)| n == name) {
                Some(&(_, k)) if k != args.len() => Err(arity_err(name, k, args.len())),
                Some(_) => Ok(()),
                None => match free.get(name) {
                    Some(&k) if k != args.len() => Err(arity_err(name, k, args.len())),
                    _ => {
                        free.insert(name.clone(), args.len());
                        Ok(())
                    }
                },
            },
            Formula::And(a, b) | Formula::Or(a, b) => {
                go(a, scope, free)?;
                go(b, scope, free)
            }
            Formula::Not(b)
            | Formula::Bind(_, b)
            | Formula::DualBind(_, b)
            | Formula::Exec(_, b)
            | Formula::DualExec(_, b)
            | Formula::BindExec(_, b)
            | Formula::StepProduct(_, b) => go(b, scope, free),
            Formula::Mu(name, params, b) | Formula::Nu(name, params, b) => {
                scope.push((name.clone(), params.len()));
                let r = go(b, scope, free);
                scope.pop();
                r
            }
        }
    }
    go(phi, &mut Vec::new(), &mut HashMap::new())
}

pub fn parse_formula(text: &str) -> Result<Formula, FrontendError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let phi = p.or()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(format!("unexpected {} after formula", p.peek().show())));
    }
    check_arity(&phi)?;
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamonds_and_steps() {
        let phi = parse_formula("<<|{}, {}~ << a x|>> T").unwrap();
        assert_eq!(
            phi,
            Formula::bind_exec(BindSpec::plain("a", "x"), Formula::True)
        );
        let step = parse_formula("(<<|{},{}~<<a x1|>> (x) <<|{} {}~ << b x2|>>) T").unwrap();
        assert_eq!(
            step,
            Formula::step(
                vec![BindSpec::plain("a", "x1"), BindSpec::plain("b", "x2")],
                Formula::True
            )
        );
        let grouped = parse_formula("(<<|{}, {}~ << a x|>> T & T)").unwrap();
        assert_eq!(
            grouped,
            Formula::and(
                Formula::bind_exec(BindSpec::plain("a", "x"), Formula::True),
                Formula::True
            )
        );
    }

    #[test]
    fn binders_and_fixpoints() {
        let phi = parse_formula("({x}, {y}~ << b z) <<z>> [[x]] T").unwrap();
        let expected = Formula::bind(
            BindSpec::new(&["x"], &["y"], "b", "z"),
            Formula::exec("z", Formula::DualExec("x".into(), Box::new(Formula::True))),
        );
        assert_eq!(phi, expected);
        let dual = parse_formula("{{}, {}~ << a z} !T").unwrap();
        assert_eq!(
            dual,
            Formula::DualBind(
                BindSpec::plain("a", "z"),
                Box::new(Formula::not(Formula::True))
            )
        );
        let mu = parse_formula("mu X(). (T | <<|{}, {}~ << a z|>> X())").unwrap();
        assert!(matches!(mu, Formula::Mu(ref n, ref p, _) if n == "X" && p.is_empty()));
        assert_eq!(
            parse_formula("Y({x,y})").unwrap(),
            Formula::prop("Y", &["x", "y"])
        );
    }

    #[test]
    fn precedence() {
        let phi = parse_formula("!T & T | T").unwrap();
        assert_eq!(
            phi,
            Formula::or(
                Formula::and(Formula::not(Formula::True), Formula::True),
                Formula::True
            )
        );
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_formula("T &"),
            Err(FrontendError::Syntax {
                line: 1,
                column: 4,
                ..
            })
        ));
        assert!(matches!(
            parse_formula("<<|{}, {}~ << tau x|>> T"),
            Err(FrontendError::Syntax { .. })
        ));
        assert!(matches!(
            parse_formula("mu X(x). X()"),
            Err(FrontendError::Arity {
                expected: 1,
                got: 0,
                ..
            })
        ));
        assert!(matches!(
            parse_formula("Y(x) & Y()"),
            Err(FrontendError::Arity { .. })
        ));
        assert!(matches!(
            parse_formula("T $"),
            Err(FrontendError::Syntax { column: 3, .. })
        ));
    }
}
