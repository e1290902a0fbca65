//! Evaluate formulas with event identifiers at configurations and environments.

use wtc::frontend::{parse_formula, parse_pes};
use wtc::logic::{Environment, ModelChecker};
use wtc::pes::Configuration;

fn main() {
    let pes = parse_pes(include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/par-ab.pes"
    )))
    .unwrap();
    let mc = ModelChecker::new(&pes);

    let formulas = [
        "<<|{}, {}~ << a x|>> T",
        // b can happen concurrently with an a already bound
        "<<|{}, {}~ << a x|>> <<|{}, {x}~ << b y|>> T",
        // ... but not causally after it
        "<<|{}, {}~ << a x|>> <<|{x}, {}~ << b y|>> T",
        "(<<|{}, {}~ << a x|>> (x) <<|{}, {}~ << b y|>>) T",
    ];
    for text in formulas {
        let phi = parse_formula(text).unwrap();
        println!("{:<6} {phi}", mc.holds_initially(&phi).unwrap());
    }

    // open formulas need an environment
    let e1 = pes.event_by_name("e1").unwrap();
    let open = parse_formula("<<x>> T").unwrap();
    let env = Environment::new().bind("x", e1);
    println!(
        "<<x>> T with x=e1 at {{}}: {}",
        mc.satisfies(Configuration::EMPTY, &env, &open).unwrap()
    );

    let d = mc
        .denotation(&parse_formula("<<|{}, {}~ << b y|>> T").unwrap())
        .unwrap();
    println!("denotation has {} legal pairs", d.len());
}
