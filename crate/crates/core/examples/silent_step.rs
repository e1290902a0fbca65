//! `a.tau.b` against `a.b` under every weak and strong relation.

use std::time::Instant;

use wtc::equivalence::{check, EquivalenceKind};
use wtc::frontend::{compile_term, parse_term};

fn main() {
    let left = compile_term(&parse_term("a.tau.b").unwrap()).unwrap();
    let right = compile_term(&parse_term("a.b").unwrap()).unwrap();
    for kind in EquivalenceKind::all() {
        let start = Instant::now();
        let v = check(kind, &left, &right);
        let elapsed = start.elapsed();
        let verdict = if v.equivalent {
            "equivalent"
        } else {
            "NOT equivalent"
        };
        println!("{:<15} {verdict:<15} {:>8.2?}", kind.to_string(), elapsed);
        if let Some(t) = &v.trace {
            println!("    lost at {} in round {}", t.position, t.round);
        }
    }
}
