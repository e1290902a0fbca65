//! Least and greatest fixpoints over legal pairs.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use crate::logic::eval::{Denotation, McError, ModelChecker, PropEnv};
use crate::logic::formula::{desugar, free_vars, Formula};
use crate::pes::PrimeEventStructure;

pub use crate::logic::formula::gfp_desugar;

/// True when every free occurrence of `name` in `phi` sits under an even number of
/// negations, counted after desugaring.
pub fn occurs_positively(phi: &Formula, name: &str) -> bool {
    fn walk(phi: &Formula, name: &str, negated: bool) -> bool {
        match phi {
            Formula::True => true,
            Formula::Prop(n, _) => n != name || !negated,
            Formula::And(a, b) => walk(a, name, negated) && walk(b, name, negated),
            Formula::Not(b) => walk(b, name, !negated),
            Formula::Bind(_, b) | Formula::Exec(_, b) => walk(b, name, negated),
            Formula::Mu(n, _, _) if n == name => true,
            Formula::Mu(_, _, b) => walk(b, name, negated),
            other => walk(&desugar(other), name, negated),
        }
    }
    walk(&desugar(phi), name, false)
}

/// Every side-condition violation: negative occurrences, arity clashes and fixpoint
/// bodies whose free variables differ from the parameters.
pub fn positivity_violations(phi: &Formula) -> Vec<String> {
    let mut out = Vec::new();
    let mut arities: HashMap<String, usize> = HashMap::new();
    collect(phi, &mut Vec::new(), &mut arities, &mut out);
    out
}

fn collect(
    phi: &Formula,
    scope: &mut Vec<(String, usize)>,
    free: &mut HashMap<String, usize>,
    out: &mut Vec<String>,
) {
    match phi {
        Formula::True => {}
        Formula::Prop(name, args) => {
            let expected = scope.iter().rev().find(|(n, _)| n == name).map(|&(_, k)| k);
            let expected =
                expected.unwrap_or_else(|| *free.entry(name.clone()).or_insert(args.len()));
            if expected != args.len() {
                out.push(format!(
                    "{name} applied to {} arguments, expected {expected}",
                    args.len()
                ));
            }
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect(a, scope, free, out);
            collect(b, scope, free, out);
        }
        Formula::Not(b)
        | Formula::Bind(_, b)
        | Formula::Exec(_, b)
        | Formula::DualBind(_, b)
        | Formula::DualExec(_, b)
        | Formula::BindExec(_, b)
        | Formula::StepProduct(_, b) => collect(b, scope, free, out),
        Formula::Mu(name, params, body) | Formula::Nu(name, params, body) => {
            let kind = if matches!(phi, Formula::Mu(..)) {
                "mu"
            } else {
                "nu"
            };
            if !occurs_positively(body, name) {
                out.push(format!(
                    "{name} occurs negatively in the body of {kind} {name}"
                ));
            }
            let declared: BTreeSet<String> = params.iter().cloned().collect();
            if declared.len() != params.len() {
                out.push(format!("{kind} {name} repeats a parameter"));
            }
            if free_vars(body) != declared {
                out.push(format!(
                    "free variables of the body of {kind} {name} differ from its parameters"
                ));
            }
            scope.push((name.clone(), params.len()));
            collect(body, scope, free, out);
            scope.pop();
        }
    }
}

pub fn positivity_check(phi: &Formula) -> bool {
    positivity_violations(phi).is_empty()
}

/// Denotation of any formula, fixpoints included, under the proposition environment.
pub fn mu_denotation(
    pes: &PrimeEventStructure,
    phi: &Formula,
    props: &PropEnv,
) -> Result<Rc<Denotation>, McError> {
    ModelChecker::new(pes).denotation_in(phi, props)
}

/// The full iteration `S_0 = {}, S_1, ..., S_m` of a `mu` (or `nu`, via its rewrite) node,
/// ending at the first `m` with `S_m = S_{m-1}`.
pub fn approximants(
    pes: &PrimeEventStructure,
    phi: &Formula,
    props: &PropEnv,
) -> Result<Vec<Rc<Denotation>>, McError> {
    let mc = ModelChecker::new(pes);
    match desugar(phi) {
        Formula::Mu(name, params, body) => mc.mu_stages(&name, &params, &body, props),
        other => panic!("approximants expects a fixpoint node, got {other}"),
    }
}

/// `S_k` of the iteration; equal to the fixpoint for every `k` past stabilization.
pub fn approximant(
    pes: &PrimeEventStructure,
    phi: &Formula,
    k: usize,
    props: &PropEnv,
) -> Result<Rc<Denotation>, McError> {
    let stages = approximants(pes, phi, props)?;
    Ok(stages[k.min(stages.len() - 1)].clone())
}

/// Number of body applications until the iteration repeats a stage.
pub fn stabilization_index(
    pes: &PrimeEventStructure,
    phi: &Formula,
    props: &PropEnv,
) -> Result<usize, McError> {
    Ok(approximants(pes, phi, props)?.len() - 1)
}
