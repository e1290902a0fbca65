//! Compile process terms to event structures.

use wtc::frontend::{compile_term, parse_term, print_pes};

fn main() {
    for src in ["0", "a.tau.b", "a | b", "a.b + b.a", "a.(b | c) + tau.d"] {
        let term = parse_term(src).unwrap();
        let pes = compile_term(&term).unwrap();
        println!(
            "# {term}  ({} events, {} configurations)",
            pes.len(),
            pes.enumerate_configurations().len()
        );
        print!("{}", print_pes(&pes));
        println!();
    }
}
