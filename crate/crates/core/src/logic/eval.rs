//! Set-based model checking over legal pairs `(C, env)`.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::rc::Rc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::formula::{desugar, free_props, free_vars, Formula, Var};
use crate::pes::{Configuration, EventId, EventSet, Label, PrimeEventStructure};
use crate::transition::ConfigurationGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McError {
    #[error("variable `{0}` is free but not bound by the environment")]
    UnboundVariable(Var),
    #[error("proposition `{0}` is not bound")]
    UnboundProposition(String),
    #[error("proposition `{name}` expects {expected} arguments, got {got}")]
    ArityMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("`{0}` occurs under an odd number of negations")]
    PositivityViolation(String),
    #[error("fixpoint `{0}` must have exactly its parameters free")]
    ParameterMismatch(String),
    #[error("fixpoint iteration for `{0}` is not monotone")]
    NonMonotone(String),
    #[error("`{0}` is not a configuration")]
    NotAConfiguration(String),
    #[error("variable `{0}` is bound to an event that is silent or unknown")]
    InvalidBinding(Var),
}

/// Assignment of variables to visible events.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Environment(pub BTreeMap<Var, EventId>);

impl Environment {
    pub fn new() -> Environment {
        Environment::default()
    }

    pub fn bind(mut self, var: &str, e: EventId) -> Environment {
        self.0.insert(var.to_string(), e);
        self
    }

    pub fn get(&self, var: &str) -> Option<EventId> {
        self.0.get(var).copied()
    }

    pub fn image(&self) -> EventSet {
        self.0.values().copied().collect()
    }

    pub fn restrict<'a>(&self, vars: impl IntoIterator<Item = &'a Var>) -> Environment {
        Environment(
            vars.into_iter()
                .filter_map(|v| self.0.get(v).map(|&e| (v.clone(), e)))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LegalPair {
    pub config: Configuration,
    pub env: Environment,
}

/// A set of legal pairs over a fixed, sorted variable list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Denotation {
    vars: Vec<Var>,
    set: HashSet<(Configuration, Vec<EventId>)>,
}

impl Denotation {
    pub(crate) fn new(vars: Vec<Var>) -> Denotation {
        Denotation {
            vars,
            set: HashSet::new(),
        }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    /// Membership of `(c, env)`; `env` may bind more variables than the denotation uses.
    pub fn contains(&self, c: Configuration, env: &Environment) -> bool {
        let mut vals = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            match env.get(v) {
                Some(e) => vals.push(e),
                None => return false,
            }
        }
        self.set.contains(&(c, vals))
    }

    pub(crate) fn contains_raw(&self, c: Configuration, vals: &[EventId]) -> bool {
        self.set.contains(&(c, vals.to_vec()))
    }

    pub(crate) fn insert_raw(&mut self, c: Configuration, vals: Vec<EventId>) {
        self.set.insert((c, vals));
    }

    pub fn pairs(&self) -> Vec<LegalPair> {
        let mut out: Vec<LegalPair> = self
            .set
            .iter()
            .map(|(c, vals)| LegalPair {
                config: *c,
                env: Environment(
                    self.vars
                        .iter()
                        .cloned()
                        .zip(vals.iter().copied())
                        .collect(),
                ),
            })
            .collect();
        out.sort();
        out
    }

    pub fn is_subset(&self, other: &Denotation) -> bool {
        self.vars == other.vars && self.set.is_subset(&other.set)
    }

    /// Sorted contents, usable as a hash key.
    pub(crate) fn key(&self) -> Vec<(Configuration, Vec<EventId>)> {
        let mut v: Vec<_> = self.set.iter().cloned().collect();
        v.sort();
        v
    }
}

/// Binding of a proposition name to its formal parameters and current value.
pub type PropEnv = HashMap<String, (Vec<Var>, Rc<Denotation>)>;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalOptions {
    /// Also require events bound in an independence list to be concurrent with every
    /// silent cause of the new event that they do not themselves depend on.
    pub strict_independence: bool,
}

pub struct ModelChecker<'a> {
    pes: &'a PrimeEventStructure,
    options: EvalOptions,
    configs: Vec<Configuration>,
    visible: Vec<EventId>,
    weak: HashMap<(Configuration, EventId), Vec<Configuration>>,
    cache: RefCell<HashMap<Formula, Rc<Denotation>>>,
}

impl<'a> ModelChecker<'a> {
    pub fn new(pes: &'a PrimeEventStructure) -> ModelChecker<'a> {
        ModelChecker::with_options(pes, EvalOptions::default())
    }

    pub fn with_options(pes: &'a PrimeEventStructure, options: EvalOptions) -> ModelChecker<'a> {
        let graph = ConfigurationGraph::build(pes);
        let mut weak: HashMap<(Configuration, EventId), Vec<Configuration>> = HashMap::new();
        for &(s, x, t) in &graph.weak_pomset_edges {
            if x.len() == 1 {
                let e = x.iter().next().unwrap();
                weak.entry((graph.nodes[s], e))
                    .or_default()
                    .push(graph.nodes[t]);
            }
        }
        ModelChecker {
            pes,
            options,
            configs: graph.nodes,
            visible: pes.visible_events().iter().collect(),
            weak,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn pes(&self) -> &PrimeEventStructure {
        self.pes
    }

    pub fn configurations(&self) -> &[Configuration] {
        &self.configs
    }

    pub fn is_legal(&self, c: Configuration, env: &Environment) -> bool {
        self.pes.consistent(c.events().union(env.image()))
    }

    /// Every legal pair over the given variables.
    pub fn legal_pairs(&self, vars: &BTreeSet<Var>) -> Denotation {
        let vars: Vec<Var> = vars.iter().cloned().collect();
        let mut d = Denotation::new(vars.clone());
        self.for_each_legal(vars.len(), |c, vals| d.insert_raw(c, vals.to_vec()));
        d
    }

    pub fn denotation(&self, phi: &Formula) -> Result<Rc<Denotation>, McError> {
        self.denotation_in(phi, &PropEnv::new())
    }

    pub fn denotation_in(&self, phi: &Formula, props: &PropEnv) -> Result<Rc<Denotation>, McError> {
        self.eval(&desugar(phi), props)
    }

    pub fn satisfies(
        &self,
        c: Configuration,
        env: &Environment,
        phi: &Formula,
    ) -> Result<bool, McError> {
        if !self.pes.is_configuration(c.events()) {
            return Err(McError::NotAConfiguration(
                self.pes.describe_set(c.events()),
            ));
        }
        for v in free_vars(phi) {
            match env.get(&v) {
                None => return Err(McError::UnboundVariable(v)),
                Some(e) if e.index() >= self.pes.len() || self.pes.is_tau(e) => {
                    return Err(McError::InvalidBinding(v))
                }
                Some(_) => {}
            }
        }
        Ok(self.denotation(phi)?.contains(c, env))
    }

    /// Whether a closed formula holds at the empty configuration.
    pub fn holds_initially(&self, phi: &Formula) -> Result<bool, McError> {
        self.satisfies(Configuration::EMPTY, &Environment::new(), phi)
    }

    fn for_each_legal(&self, arity: usize, mut f: impl FnMut(Configuration, &[EventId])) {
        let mut vals = vec![EventId(0); arity];
        for &c in &self.configs {
            self.assign(c, 0, &mut vals, &mut f);
        }
    }

    fn assign(
        &self,
        c: Configuration,
        i: usize,
        vals: &mut Vec<EventId>,
        f: &mut impl FnMut(Configuration, &[EventId]),
    ) {
        if i == vals.len() {
            let image: EventSet = vals.iter().copied().collect();
            if self.pes.consistent(c.events().union(image)) {
                f(c, vals);
            }
            return;
        }
        for &e in &self.visible {
            vals[i] = e;
            self.assign(c, i + 1, vals, f);
        }
    }

    pub(crate) fn eval(&self, phi: &Formula, props: &PropEnv) -> Result<Rc<Denotation>, McError> {
        let cacheable = free_props(phi).is_empty();
        if cacheable {
            if let Some(d) = self.cache.borrow().get(phi) {
                return Ok(d.clone());
            }
        }
        let d = Rc::new(self.eval_node(phi, props)?);
        if cacheable {
            self.cache.borrow_mut().insert(phi.clone(), d.clone());
        }
        Ok(d)
    }

    fn eval_node(&self, phi: &Formula, props: &PropEnv) -> Result<Denotation, McError> {
        match phi {
            Formula::True => {
                let mut d = Denotation::new(Vec::new());
                for &c in &self.configs {
                    d.insert_raw(c, Vec::new());
                }
                Ok(d)
            }
            Formula::And(a, b) => {
                let da = self.eval(a, props)?;
                let db = self.eval(b, props)?;
                let vars = union_vars(da.vars(), db.vars());
                let pa = positions(&vars, da.vars());
                let pb = positions(&vars, db.vars());
                let mut d = Denotation::new(vars.clone());
                self.for_each_legal(vars.len(), |c, vals| {
                    if da.contains_raw(c, &pick(vals, &pa)) && db.contains_raw(c, &pick(vals, &pb))
                    {
                        d.insert_raw(c, vals.to_vec());
                    }
                });
                Ok(d)
            }
            Formula::Not(a) => {
                let da = self.eval(a, props)?;
                let mut d = Denotation::new(da.vars().to_vec());
                self.for_each_legal(da.vars().len(), |c, vals| {
                    if !da.contains_raw(c, vals) {
                        d.insert_raw(c, vals.to_vec());
                    }
                });
                Ok(d)
            }
            Formula::Bind(spec, body) => {
                let db = self.eval(body, props)?;
                let rest: Vec<Var> = db
                    .vars()
                    .iter()
                    .filter(|v| **v != spec.var)
                    .cloned()
                    .collect();
                let mut all: BTreeSet<Var> = rest.iter().cloned().collect();
                all.extend(spec.causes.iter().cloned());
                all.extend(spec.indep.iter().cloned());
                let vars: Vec<Var> = all.into_iter().collect();
                let p_rest = positions(&vars, &rest);
                let p_causes = positions(&vars, &spec.causes);
                let p_indep = positions(&vars, &spec.indep);
                let z_slot = db.vars().iter().position(|v| *v == spec.var);
                let p_body: Vec<Option<usize>> = db
                    .vars()
                    .iter()
                    .map(|v| {
                        if *v == spec.var {
                            None
                        } else {
                            vars.iter().position(|w| w == v)
                        }
                    })
                    .collect();
                let candidates: Vec<EventId> = self
                    .visible
                    .iter()
                    .copied()
                    .filter(|&e| matches!(self.pes.label(e), Label::Visible(l) if *l == spec.label))
                    .collect();
                let mut d = Denotation::new(vars.clone());
                self.for_each_legal(vars.len(), |c, vals| {
                    let residual = self.pes.residual(c);
                    let rest_image: EventSet = pick(vals, &p_rest).into_iter().collect();
                    let indep_image: EventSet = pick(vals, &p_indep).into_iter().collect();
                    let found = candidates.iter().any(|&e| {
                        if !residual.contains(e) || !self.pes.consistent(rest_image.with(e)) {
                            return false;
                        }
                        if !p_causes.iter().all(|&i| self.pes.lt(vals[i], e)) {
                            return false;
                        }
                        if !p_indep.iter().all(|&i| self.pes.concurrent(vals[i], e)) {
                            return false;
                        }
                        if self.options.strict_independence
                            && !self.strictly_independent(indep_image, e)
                        {
                            return false;
                        }
                        let body_vals: Vec<EventId> =
                            p_body.iter().map(|p| p.map_or(e, |i| vals[i])).collect();
                        debug_assert!(z_slot.is_none_or(|z| body_vals[z] == e));
                        db.contains_raw(c, &body_vals)
                    });
                    if found {
                        d.insert_raw(c, vals.to_vec());
                    }
                });
                Ok(d)
            }
            Formula::Exec(z, body) => {
                let db = self.eval(body, props)?;
                let vars = union_vars(db.vars(), std::slice::from_ref(z));
                let pb = positions(&vars, db.vars());
                let pz = vars.iter().position(|v| v == z).unwrap();
                let mut d = Denotation::new(vars.clone());
                self.for_each_legal(vars.len(), |c, vals| {
                    let body_vals = pick(vals, &pb);
                    let ok = self
                        .weak
                        .get(&(c, vals[pz]))
                        .is_some_and(|succ| succ.iter().any(|&c2| db.contains_raw(c2, &body_vals)));
                    if ok {
                        d.insert_raw(c, vals.to_vec());
                    }
                });
                Ok(d)
            }
            Formula::Prop(name, args) => {
                let (params, value) = props
                    .get(name)
                    .ok_or_else(|| McError::UnboundProposition(name.clone()))?;
                if params.len() != args.len() {
                    return Err(McError::ArityMismatch {
                        name: name.clone(),
                        expected: params.len(),
                        got: args.len(),
                    });
                }
                let vars: Vec<Var> = args
                    .iter()
                    .cloned()
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                // value.vars() is the sorted parameter list; find the argument feeding each slot.
                let slots: Vec<usize> = value
                    .vars()
                    .iter()
                    .map(|p| {
                        let k = params.iter().position(|q| q == p).unwrap();
                        vars.iter().position(|v| *v == args[k]).unwrap()
                    })
                    .collect();
                let mut d = Denotation::new(vars.clone());
                self.for_each_legal(vars.len(), |c, vals| {
                    if value.contains_raw(c, &pick(vals, &slots)) {
                        d.insert_raw(c, vals.to_vec());
                    }
                });
                Ok(d)
            }
            Formula::Mu(name, params, body) => {
                let stages = self.mu_stages(name, params, body, props)?;
                Ok(Rc::try_unwrap(stages.into_iter().last().unwrap())
                    .unwrap_or_else(|rc| (*rc).clone()))
            }
            other => self.eval_node(&desugar(other), props),
        }
    }

    /// Iteration `S_0 = {}`, `S_{k+1} = body(S_k)`. The last two stages are equal.
    pub(crate) fn mu_stages(
        &self,
        name: &str,
        params: &[Var],
        body: &Formula,
        props: &PropEnv,
    ) -> Result<Vec<Rc<Denotation>>, McError> {
        let param_set: BTreeSet<Var> = params.iter().cloned().collect();
        if param_set.len() != params.len() || free_vars(body) != param_set {
            return Err(McError::ParameterMismatch(name.to_string()));
        }
        if !crate::fixpoint::occurs_positively(body, name) {
            return Err(McError::PositivityViolation(name.to_string()));
        }
        let bound = self.legal_pairs(&param_set).len() + 1;
        let mut stages = vec![Rc::new(Denotation::new(param_set.into_iter().collect()))];
        loop {
            let last = stages.last().unwrap().clone();
            let mut inner = props.clone();
            inner.insert(name.to_string(), (params.to_vec(), last.clone()));
            let next = self.eval(body, &inner)?;
            if !last.is_subset(&next) || stages.len() > bound {
                return Err(McError::NonMonotone(name.to_string()));
            }
            let done = *next == *last;
            stages.push(next);
            if done {
                return Ok(stages);
            }
        }
    }

    fn strictly_independent(&self, indep: EventSet, e: EventId) -> bool {
        let below = self.pes.closure(indep);
        let silent_causes = self
            .pes
            .closure(EventSet::singleton(e))
            .difference(self.pes.visible_events());
        silent_causes
            .difference(below)
            .iter()
            .all(|t| indep.iter().all(|y| self.pes.concurrent(y, t)))
    }
}

fn union_vars(a: &[Var], b: &[Var]) -> Vec<Var> {
    a.iter()
        .chain(b)
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

fn positions(all: &[Var], sub: &[Var]) -> Vec<usize> {
    sub.iter()
        .map(|v| all.iter().position(|w| w == v).unwrap())
        .collect()
}

fn pick(vals: &[EventId], pos: &[usize]) -> Vec<EventId> {
    pos.iter().map(|&i| vals[i]).collect()
}

/// Whether `(c, env)` is a legal pair of `pes`.
pub fn is_legal_pair(pes: &PrimeEventStructure, c: Configuration, env: &Environment) -> bool {
    pes.is_configuration(c.events())
        && env
            .0
            .values()
            .all(|&e| e.index() < pes.len() && !pes.is_tau(e))
        && pes.consistent(c.events().union(env.image()))
}

/// `c, env |= phi`.
pub fn satisfies(
    pes: &PrimeEventStructure,
    c: Configuration,
    env: &Environment,
    phi: &Formula,
) -> Result<bool, McError> {
    ModelChecker::new(pes).satisfies(c, env, phi)
}
