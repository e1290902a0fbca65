//! Formula syntax, free variables, desugaring and fragment membership.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub type Var = String;

/// The header `(x, y~ << a z)`: events bound to `causes` must strictly precede the
/// new event, events bound to `indep` must be concurrent with it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BindSpec {
    pub causes: Vec<Var>,
    pub indep: Vec<Var>,
    pub label: String,
    pub var: Var,
}

impl BindSpec {
    pub fn new(causes: &[&str], indep: &[&str], label: &str, var: &str) -> BindSpec {
        BindSpec {
            causes: causes.iter().map(|s| s.to_string()).collect(),
            indep: indep.iter().map(|s| s.to_string()).collect(),
            label: label.to_string(),
            var: var.to_string(),
        }
    }

    /// `a z` with empty cause and independence lists.
    pub fn plain(label: &str, var: &str) -> BindSpec {
        BindSpec::new(&[], &[], label, var)
    }

    pub fn has_empty_lists(&self) -> bool {
        self.causes.is_empty() && self.indep.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    And(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    /// `(x, y~ << a z) phi`
    Bind(BindSpec, Box<Formula>),
    /// `<<z>> phi`
    Exec(Var, Box<Formula>),
    /// `phi | psi`, sugar for `!(!phi & !psi)`.
    Or(Box<Formula>, Box<Formula>),
    /// `{x, y~ << a z} phi`, sugar for `!(x, y~ << a z) !phi`.
    DualBind(BindSpec, Box<Formula>),
    /// `[[z]] phi`, sugar for `!<<z>> !phi`.
    DualExec(Var, Box<Formula>),
    /// `<<|x, y~ << a z|>> phi`, sugar for `(x, y~ << a z) <<z>> phi`.
    BindExec(BindSpec, Box<Formula>),
    /// `(d1 (x) d2 (x) ... dn) phi` over bind-and-execute diamonds.
    StepProduct(Vec<BindSpec>, Box<Formula>),
    /// Proposition application `X(x1, ..., xn)`.
    Prop(String, Vec<Var>),
    /// `mu X(x1, ..., xn). phi`
    Mu(String, Vec<Var>, Box<Formula>),
    /// `nu X(x1, ..., xn). phi`
    Nu(String, Vec<Var>, Box<Formula>),
}

impl Formula {
    pub fn tt() -> Formula {
        Formula::True
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Formula {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Or(Box::new(lhs), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(body: Formula) -> Formula {
        Formula::Not(Box::new(body))
    }

    pub fn bind(spec: BindSpec, body: Formula) -> Formula {
        Formula::Bind(spec, Box::new(body))
    }

    pub fn exec(var: &str, body: Formula) -> Formula {
        Formula::Exec(var.to_string(), Box::new(body))
    }

    pub fn bind_exec(spec: BindSpec, body: Formula) -> Formula {
        Formula::BindExec(spec, Box::new(body))
    }

    pub fn step(parts: Vec<BindSpec>, body: Formula) -> Formula {
        Formula::StepProduct(parts, Box::new(body))
    }

    pub fn prop(name: &str, args: &[&str]) -> Formula {
        Formula::Prop(
            name.to_string(),
            args.iter().map(|s| s.to_string()).collect(),
        )
    }

    pub fn mu(name: &str, params: &[&str], body: Formula) -> Formula {
        Formula::Mu(
            name.to_string(),
            params.iter().map(|s| s.to_string()).collect(),
            Box::new(body),
        )
    }

    pub fn nu(name: &str, params: &[&str], body: Formula) -> Formula {
        Formula::Nu(
            name.to_string(),
            params.iter().map(|s| s.to_string()).collect(),
            Box::new(body),
        )
    }

    /// Conjunction of all formulas; `T` when empty.
    pub fn conjunction(parts: Vec<Formula>) -> Formula {
        let mut iter = parts.into_iter();
        match iter.next() {
            None => Formula::True,
            Some(first) => iter.fold(first, Formula::and),
        }
    }

    pub fn is_closed(&self) -> bool {
        free_vars(self).is_empty()
    }

    /// Operator count along the deepest path, `T` and applications counting zero.
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::Prop(..) => 0,
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
            Formula::StepProduct(parts, b) => parts.len() + b.depth(),
            Formula::Not(b)
            | Formula::Bind(_, b)
            | Formula::Exec(_, b)
            | Formula::DualBind(_, b)
            | Formula::DualExec(_, b)
            | Formula::BindExec(_, b)
            | Formula::Mu(_, _, b)
            | Formula::Nu(_, _, b) => 1 + b.depth(),
        }
    }
}

pub fn free_vars(phi: &Formula) -> BTreeSet<Var> {
    match phi {
        Formula::True => BTreeSet::new(),
        Formula::And(a, b) | Formula::Or(a, b) => {
            let mut s = free_vars(a);
            s.extend(free_vars(b));
            s
        }
        Formula::Not(b) => free_vars(b),
        Formula::Bind(spec, b) | Formula::DualBind(spec, b) => {
            let mut s = free_vars(b);
            s.remove(&spec.var);
            s.extend(spec.causes.iter().cloned());
            s.extend(spec.indep.iter().cloned());
            s
        }
        Formula::Exec(z, b) | Formula::DualExec(z, b) => {
            let mut s = free_vars(b);
            s.insert(z.clone());
            s
        }
        Formula::BindExec(..) | Formula::StepProduct(..) => free_vars(&desugar(phi)),
        Formula::Prop(_, args) => args.iter().cloned().collect(),
        Formula::Mu(_, params, _) | Formula::Nu(_, params, _) => params.iter().cloned().collect(),
    }
}

/// Free proposition names.
pub fn free_props(phi: &Formula) -> BTreeSet<String> {
    match phi {
        Formula::True => BTreeSet::new(),
        Formula::And(a, b) | Formula::Or(a, b) => {
            let mut s = free_props(a);
            s.extend(free_props(b));
            s
        }
        Formula::Not(b)
        | Formula::Bind(_, b)
        | Formula::Exec(_, b)
        | Formula::DualBind(_, b)
        | Formula::DualExec(_, b)
        | Formula::BindExec(_, b)
        | Formula::StepProduct(_, b) => free_props(b),
        Formula::Prop(name, _) => BTreeSet::from([name.clone()]),
        Formula::Mu(name, _, b) | Formula::Nu(name, _, b) => {
            let mut s = free_props(b);
            s.remove(name);
            s
        }
    }
}

/// Rewrites every derived operator into `T`, `&`, `!`, bind, execute, applications and `mu`.
pub fn desugar(phi: &Formula) -> Formula {
    use Formula as F;
    match phi {
        F::True => F::True,
        F::And(a, b) => F::and(desugar(a), desugar(b)),
        F::Not(b) => F::not(desugar(b)),
        F::Bind(spec, b) => F::bind(spec.clone(), desugar(b)),
        F::Exec(z, b) => F::exec(z, desugar(b)),
        F::Or(a, b) => F::not(F::and(F::not(desugar(a)), F::not(desugar(b)))),
        F::DualBind(spec, b) => F::not(F::bind(spec.clone(), F::not(desugar(b)))),
        F::DualExec(z, b) => F::not(F::exec(z, F::not(desugar(b)))),
        F::BindExec(spec, b) => F::bind(spec.clone(), F::exec(&spec.var, desugar(b))),
        F::StepProduct(parts, b) => {
            let mut body = desugar(b);
            for part in parts.iter().rev() {
                body = F::exec(&part.var, body);
            }
            let mut earlier: Vec<Var> = parts.iter().map(|p| p.var.clone()).collect();
            for part in parts.iter().rev() {
                earlier.pop();
                let mut spec = part.clone();
                for v in &earlier {
                    if !spec.indep.contains(v) {
                        spec.indep.push(v.clone());
                    }
                }
                body = F::bind(spec, body);
            }
            body
        }
        F::Prop(name, args) => F::Prop(name.clone(), args.clone()),
        F::Mu(name, params, b) => F::Mu(name.clone(), params.clone(), Box::new(desugar(b))),
        F::Nu(..) => desugar(&gfp_desugar(phi)),
    }
}

/// `nu X(x). phi` becomes `!mu X(x). !phi~`, where `phi~` negates every free occurrence
/// of `X` in `phi`. Applied to every `nu` in the formula.
pub fn gfp_desugar(phi: &Formula) -> Formula {
    use Formula as F;
    match phi {
        F::Nu(name, params, body) => {
            let body = gfp_desugar(body);
            let flipped = negate_prop(&body, name);
            F::not(F::Mu(
                name.clone(),
                params.clone(),
                Box::new(F::not(flipped)),
            ))
        }
        F::True | F::Prop(..) => phi.clone(),
        F::And(a, b) => F::and(gfp_desugar(a), gfp_desugar(b)),
        F::Or(a, b) => F::or(gfp_desugar(a), gfp_desugar(b)),
        F::Not(b) => F::not(gfp_desugar(b)),
        F::Bind(s, b) => F::bind(s.clone(), gfp_desugar(b)),
        F::Exec(z, b) => F::exec(z, gfp_desugar(b)),
        F::DualBind(s, b) => F::DualBind(s.clone(), Box::new(gfp_desugar(b))),
        F::DualExec(z, b) => F::DualExec(z.clone(), Box::new(gfp_desugar(b))),
        F::BindExec(s, b) => F::bind_exec(s.clone(), gfp_desugar(b)),
        F::StepProduct(p, b) => F::step(p.clone(), gfp_desugar(b)),
        F::Mu(n, p, b) => F::Mu(n.clone(), p.clone(), Box::new(gfp_desugar(b))),
    }
}

fn negate_prop(phi: &Formula, target: &str) -> Formula {
    use Formula as F;
    let rec = |b: &Formula| negate_prop(b, target);
    match phi {
        F::Prop(name, _) if name == target => F::not(phi.clone()),
        F::True | F::Prop(..) => phi.clone(),
        F::And(a, b) => F::and(rec(a), rec(b)),
        F::Or(a, b) => F::or(rec(a), rec(b)),
        F::Not(b) => F::not(rec(b)),
        F::Bind(s, b) => F::bind(s.clone(), rec(b)),
        F::Exec(z, b) => F::exec(z, rec(b)),
        F::DualBind(s, b) => F::DualBind(s.clone(), Box::new(rec(b))),
        F::DualExec(z, b) => F::DualExec(z.clone(), Box::new(rec(b))),
        F::BindExec(s, b) => F::bind_exec(s.clone(), rec(b)),
        F::StepProduct(p, b) => F::step(p.clone(), rec(b)),
        // A rebinding of the same name shadows the target.
        F::Mu(n, _, _) | F::Nu(n, _, _) if n == target => phi.clone(),
        F::Mu(n, p, b) => F::Mu(n.clone(), p.clone(), Box::new(rec(b))),
        F::Nu(n, p, b) => F::Nu(n.clone(), p.clone(), Box::new(rec(b))),
    }
}

/// Replaces free occurrences of `from` by `to`. `to` must not be bound anywhere in `phi`.
pub fn rename_free(phi: &Formula, from: &str, to: &str) -> Formula {
    use Formula as F;
    let rn = |v: &Var| if v == from { to.to_string() } else { v.clone() };
    let list = |vs: &[Var]| vs.iter().map(rn).collect::<Vec<_>>();
    let spec = |s: &BindSpec| BindSpec {
        causes: list(&s.causes),
        indep: list(&s.indep),
        label: s.label.clone(),
        var: s.var.clone(),
    };
    let rec = |b: &Formula| rename_free(b, from, to);
    let under = |s: &BindSpec, b: &Formula| if s.var == from { b.clone() } else { rec(b) };
    match phi {
        F::True => F::True,
        F::And(a, b) => F::and(rec(a), rec(b)),
        F::Or(a, b) => F::or(rec(a), rec(b)),
        F::Not(b) => F::not(rec(b)),
        F::Bind(s, b) => F::Bind(spec(s), Box::new(under(s, b))),
        F::DualBind(s, b) => F::DualBind(spec(s), Box::new(under(s, b))),
        F::BindExec(s, b) => F::BindExec(spec(s), Box::new(under(s, b))),
        F::Exec(z, b) => F::Exec(rn(z), Box::new(rec(b))),
        F::DualExec(z, b) => F::DualExec(rn(z), Box::new(rec(b))),
        F::StepProduct(parts, b) => {
            // Later parts see earlier bound variables; renaming stops once `from` is rebound.
            let mut out = Vec::new();
            let mut shadowed = false;
            for p in parts {
                let mut q = p.clone();
                if !shadowed {
                    q = spec(p);
                }
                shadowed |= p.var == from;
                out.push(q);
            }
            F::StepProduct(out, Box::new(if shadowed { (**b).clone() } else { rec(b) }))
        }
        F::Prop(n, args) => F::Prop(n.clone(), list(args)),
        // Parameters are the free variables of a fixpoint, so they are renamed with the body.
        F::Mu(n, p, b) => F::Mu(n.clone(), list(p), Box::new(rec(b))),
        F::Nu(n, p, b) => F::Nu(n.clone(), list(p), Box::new(rec(b))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Fragment {
    #[serde(rename = "hm")]
    HennessyMilner,
    #[serde(rename = "step")]
    Step,
    #[serde(rename = "pomset")]
    Pomset,
    #[serde(rename = "hp")]
    HistoryPreserving,
    #[serde(rename = "full")]
    Full,
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fragment::HennessyMilner => "hm",
            Fragment::Step => "step",
            Fragment::Pomset => "pomset",
            Fragment::HistoryPreserving => "hp",
            Fragment::Full => "full",
        })
    }
}

/// The fragments a formula belongs to. Every formula belongs to `Full`.
pub fn fragment_of(phi: &Formula) -> BTreeSet<Fragment> {
    let mut out = BTreeSet::from([Fragment::Full]);
    if in_hm(phi) {
        out.insert(Fragment::HennessyMilner);
    }
    if in_step(phi) {
        out.insert(Fragment::Step);
    }
    if in_pomset(phi, true) {
        out.insert(Fragment::Pomset);
    }
    if in_pomset(phi, false) {
        out.insert(Fragment::HistoryPreserving);
    }
    out
}

/// Splits a bind-and-execute diamond, written either with the sugar or spelled out as
/// a bind immediately followed by executing its variable.
fn as_diamond(phi: &Formula) -> Option<(&BindSpec, &Formula)> {
    match phi {
        Formula::BindExec(spec, body) => Some((spec, body)),
        Formula::Bind(spec, inner) => match inner.as_ref() {
            Formula::Exec(z, body) if *z == spec.var => Some((spec, body)),
            _ => None,
        },
        Formula::StepProduct(parts, body) if parts.len() == 1 => Some((&parts[0], body)),
        _ => None,
    }
}

fn in_hm(phi: &Formula) -> bool {
    match phi {
        Formula::True => true,
        Formula::And(a, b) | Formula::Or(a, b) => in_hm(a) && in_hm(b),
        Formula::Not(b) => in_hm(b),
        _ => match as_diamond(phi) {
            Some((spec, body)) => spec.has_empty_lists() && in_hm(body),
            None => false,
        },
    }
}

fn in_step(phi: &Formula) -> bool {
    match phi {
        Formula::True => true,
        Formula::And(a, b) | Formula::Or(a, b) => in_step(a) && in_step(b),
        Formula::Not(b) => in_step(b),
        Formula::StepProduct(parts, body) => {
            parts.iter().all(BindSpec::has_empty_lists) && in_step(body)
        }
        _ => {
            if let Some((spec, body)) = as_diamond(phi) {
                return spec.has_empty_lists() && in_step(body);
            }
            match spelled_out_step(phi) {
                Some(body) => in_step(body),
                None => false,
            }
        }
    }
}

/// Recognises the expansion of a step product: binds `a_i z_i` whose independence lists
/// are exactly the earlier variables, followed by executing `z_1 .. z_n` in order.
fn spelled_out_step(phi: &Formula) -> Option<&Formula> {
    let mut vars: Vec<&Var> = Vec::new();
    let mut cur = phi;
    while let Formula::Bind(spec, body) = cur {
        let expected: BTreeSet<&Var> = vars.iter().copied().collect();
        let got: BTreeSet<&Var> = spec.indep.iter().collect();
        if !spec.causes.is_empty() || expected != got || vars.contains(&&spec.var) {
            return None;
        }
        vars.push(&spec.var);
        cur = body;
    }
    if vars.len() < 2 {
        return None;
    }
    for v in vars {
        match cur {
            Formula::Exec(z, body) if z == v => cur = body,
            _ => return None,
        }
    }
    Some(cur)
}

fn in_pomset(phi: &Formula, closed_booleans: bool) -> bool {
    let ok_operand = |f: &Formula| !closed_booleans || f.is_closed();
    match phi {
        Formula::True => true,
        Formula::And(a, b) | Formula::Or(a, b) => {
            ok_operand(a)
                && ok_operand(b)
                && in_pomset(a, closed_booleans)
                && in_pomset(b, closed_booleans)
        }
        Formula::Not(b) => ok_operand(b) && in_pomset(b, closed_booleans),
        _ => match as_diamond(phi) {
            Some((_, body)) => in_pomset(body, closed_booleans),
            None => false,
        },
    }
}

fn write_vlist(f: &mut fmt::Formatter<'_>, vars: &[Var]) -> fmt::Result {
    write!(f, "{{{}}}", vars.join(", "))
}

fn write_header(f: &mut fmt::Formatter<'_>, spec: &BindSpec) -> fmt::Result {
    write_vlist(f, &spec.causes)?;
    f.write_str(", ")?;
    write_vlist(f, &spec.indep)?;
    write!(f, "~ << {} {}", spec.label, spec.var)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("T"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Not(b) => write!(f, "!{b}"),
            Formula::Bind(spec, b) => {
                f.write_str("(")?;
                write_header(f, spec)?;
                write!(f, ") {b}")
            }
            Formula::DualBind(spec, b) => {
                f.write_str("{")?;
                write_header(f, spec)?;
                write!(f, "}} {b}")
            }
            Formula::Exec(z, b) => write!(f, "<<{z}>> {b}"),
            Formula::DualExec(z, b) => write!(f, "[[{z}]] {b}"),
            Formula::BindExec(spec, b) => {
                f.write_str("<<|")?;
                write_header(f, spec)?;
                write!(f, "|>> {b}")
            }
            Formula::StepProduct(parts, b) => {
                f.write_str("(")?;
                for (i, spec) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" (x) ")?;
                    }
                    f.write_str("<<|")?;
                    write_header(f, spec)?;
                    f.write_str("|>>")?;
                }
                write!(f, ") {b}")
            }
            Formula::Prop(name, args) => write!(f, "{name}({})", args.join(", ")),
            Formula::Mu(name, params, b) => write!(f, "mu {name}({}). {b}", params.join(", ")),
            Formula::Nu(name, params, b) => write!(f, "nu {name}({}). {b}", params.join(", ")),
        }
    }
}
