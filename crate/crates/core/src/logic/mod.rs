//! Event-identifier logic with fixpoints.

pub mod bounded;
pub mod eval;
pub mod formula;
pub mod pomset_formula;

pub use bounded::{bounded_logical_equiv, BoundedVerdict};
pub use eval::{
    is_legal_pair, satisfies, Denotation, Environment, EvalOptions, LegalPair, McError,
    ModelChecker, PropEnv,
};
pub use formula::{desugar, fragment_of, free_vars, gfp_desugar, BindSpec, Formula, Fragment, Var};
pub use pomset_formula::{pomset_class_member, pomset_formula, pomset_prefix, PrefixError};
