//! Pomset diamonds and the pomset classes described by nested bind prefixes.

use thiserror::Error;

use super::formula::{BindSpec, Formula};
use crate::pes::Label;
use crate::pomset::Pomset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrefixError {
    #[error("prefix has {prefix} binders but the pomset has {pomset} elements")]
    ArityMismatch { prefix: usize, pomset: usize },
    #[error("variable `{0}` in a prefix list is not bound earlier in the prefix")]
    UnknownVariable(String),
}

fn var(i: usize) -> String {
    format!("z{}", i + 1)
}

/// The binders of the pomset diamond, outermost first. Position `i` of `p` is named
/// `z{i+1}`; the maximal element with the highest index is peeled off innermost.
pub fn pomset_prefix(p: &Pomset) -> Vec<BindSpec> {
    let mut remaining: Vec<usize> = (0..p.len()).collect();
    let mut peeled = Vec::new();
    while let Some(&z) = remaining
        .iter()
        .rev()
        .find(|&&i| !remaining.iter().any(|&j| p.lt_at(i, j)))
    {
        remaining.retain(|&i| i != z);
        let causes: Vec<String> = remaining
            .iter()
            .filter(|&&i| p.lt_at(i, z))
            .map(|&i| var(i))
            .collect();
        let indep: Vec<String> = remaining
            .iter()
            .filter(|&&i| !p.lt_at(i, z))
            .map(|&i| var(i))
            .collect();
        let label = match p.label_at(z) {
            Label::Visible(a) => a.clone(),
            Label::Tau => "tau".to_string(),
        };
        peeled.push(BindSpec {
            causes,
            indep,
            label,
            var: var(z),
        });
    }
    peeled.reverse();
    peeled
}

/// `<<|p|>> body`: nested bind-and-execute diamonds describing `p`.
pub fn pomset_formula(p: &Pomset, body: Formula) -> Formula {
    pomset_prefix(p)
        .into_iter()
        .rev()
        .fold(body, |acc, spec| Formula::bind_exec(spec, acc))
}

/// Whether `p`, with position `i` standing for the variable bound by `prefix[i]`, lies in
/// the class the prefix describes: matching labels, listed causes below, listed
/// independent variables not below.
pub fn pomset_class_member(p: &Pomset, prefix: &[BindSpec]) -> Result<bool, PrefixError> {
    if p.len() != prefix.len() {
        return Err(PrefixError::ArityMismatch {
            prefix: prefix.len(),
            pomset: p.len(),
        });
    }
    let index = |v: &str, upto: usize| {
        prefix[..upto]
            .iter()
            .position(|s| s.var == v)
            .ok_or_else(|| PrefixError::UnknownVariable(v.to_string()))
    };
    let mut ok = true;
    for (i, spec) in prefix.iter().enumerate() {
        if *p.label_at(i) != Label::parse(&spec.label) {
            ok = false;
        }
        for x in &spec.causes {
            if !p.lt_at(index(x, i)?, i) {
                ok = false;
            }
        }
        for y in &spec.indep {
            if p.lt_at(index(y, i)?, i) {
                ok = false;
            }
        }
    }
    Ok(ok)
}
