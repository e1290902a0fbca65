//! Build an event structure, list its configurations and inspect residuals.
//!
//! Run with `cargo run --example event_structures`.

use wtc::frontend::{parse_pes, print_pes};
use wtc::pes::{Label, RawPes};

fn main() {
    // a + tau.b, written with the builder
    let pes = RawPes::named("tau-choice")
        .event("e1", Label::visible("a"))
        .event("e2", Label::Tau)
        .event("e3", Label::visible("b"))
        .cause("e2", "e3")
        .conflict("e1", "e2")
        .validate()
        .expect("well formed");

    println!("{}", print_pes(&pes));
    for c in pes.enumerate_configurations() {
        let residual = pes.residual(c);
        println!(
            "{:<10} visible {:<6} residual {}",
            pes.describe_set(c.events()),
            pes.describe_set(pes.visible_part(c.events()).unwrap()),
            pes.describe_set(residual)
        );
    }

    // conflict is inherited along causality
    let e = |n| pes.event_by_name(n).unwrap();
    assert!(pes.in_conflict(e("e1"), e("e3")));

    let text = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/a-tau-b.pes"));
    let silent_step = parse_pes(text).unwrap();
    println!(
        "{} has {} configurations",
        silent_step.name().unwrap_or("?"),
        silent_step.enumerate_configurations().len()
    );

    match parse_pes("pes broken\nevent e1 a\ncause e1 e9\n") {
        Err(err) => println!("rejected: {err}"),
        Ok(_) => unreachable!(),
    }
}
