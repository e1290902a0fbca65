//! Least and greatest fixpoints and their approximants.

use wtc::fixpoint::{approximants, mu_denotation, positivity_check, stabilization_index};
use wtc::frontend::{parse_formula, parse_pes};
use wtc::logic::{ModelChecker, PropEnv};

fn main() {
    let pes = parse_pes(include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/a-tau-b.pes"
    )))
    .unwrap();
    let props = PropEnv::new();

    // eventually b, through any number of a's
    let live =
        parse_formula("mu X(). (<<|{}, {}~ << b z|>> T | <<|{}, {}~ << a z|>> X())").unwrap();
    assert!(positivity_check(&live));
    let stages = approximants(&pes, &live, &props).unwrap();
    let sizes: Vec<usize> = stages.iter().map(|s| s.len()).collect();
    println!(
        "approximant sizes {sizes:?}, stable after {} steps",
        stabilization_index(&pes, &live, &props).unwrap()
    );
    let d = mu_denotation(&pes, &live, &props).unwrap();
    for pair in d.pairs() {
        println!("  holds at {}", pes.describe_set(pair.config.events()));
    }

    let always = parse_formula("nu X(). ({{}, {}~ << a z} X() & {{}, {}~ << b z} X())").unwrap();
    println!(
        "{always}: {}",
        ModelChecker::new(&pes).holds_initially(&always).unwrap()
    );

    let bad = parse_formula("mu X(). !X()").unwrap();
    println!("{bad} positive: {}", positivity_check(&bad));
}
