//! Certificates of inequivalence, checked back with the model checker.

use wtc::equivalence::{check, verify_certificate, EquivalenceKind, Relation};
use wtc::frontend::{compile_term, parse_term};
use wtc::logic::fragment_of;

fn show(left: &str, right: &str) {
    let l = compile_term(&parse_term(left).unwrap()).unwrap();
    let r = compile_term(&parse_term(right).unwrap()).unwrap();
    println!("{left}  vs  {right}");
    for relation in Relation::ALL {
        let kind = EquivalenceKind::weak(relation);
        let v = check(kind, &l, &r);
        match (&v.certificate, v.equivalent) {
            (_, true) => println!("  {:<12} equivalent", kind.to_string()),
            (Some(c), false) => {
                let ok = verify_certificate(&l, &r, c).unwrap();
                let in_fragment = fragment_of(&c.formula).contains(&relation.fragment());
                println!(
                    "  {:<12} holds on {:?}: {}  [verified {ok}, in fragment {in_fragment}]",
                    kind.to_string(),
                    c.satisfied_by,
                    c.formula
                );
            }
            (None, false) => println!("  {:<12} inequivalent, game trace only", kind.to_string()),
        }
    }
}

fn main() {
    show("a | b", "a.b + b.a");
    show("a.(b + c)", "a.b + a.c");
    show("a + tau.b", "a + b");
}
