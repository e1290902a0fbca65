//! Weak true-concurrency semantics for prime event structures with silent events.

pub mod equivalence;
pub mod fixpoint;
pub mod frontend;
pub mod logic;
pub mod pes;
pub mod pomset;
pub mod transition;
