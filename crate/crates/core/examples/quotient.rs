//! The event structure built from a weak hhp-bisimulation, and its projections.

use wtc::equivalence::{
    build_quotient_pes, check_hhp_bisim, is_hhp_bisimulation, projection_relation, Side, Witness,
};
use wtc::frontend::{parse_pes, print_pes};
use wtc::pomset::PrefixMode;
use wtc::transition::Strength;

fn main() {
    let left = parse_pes(include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/a-tau-b.pes"
    )))
    .unwrap();
    let right = parse_pes(include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/a-b.pes"
    )))
    .unwrap();
    let v = check_hhp_bisim(Strength::Weak, &left, &right);
    let Some(Witness::Triples(relation)) = v.witness else {
        panic!("a.tau.b and a.b are weakly hhp-bisimilar");
    };
    println!("greatest weak hhp-bisimulation: {} triples", relation.len());

    let q = build_quotient_pes(&left, &right, &relation).unwrap();
    print!("{}", print_pes(&q.structure));
    for (name, target, side) in [("left", &left, Side::Left), ("right", &right, Side::Right)] {
        let r = projection_relation(&q, target, side);
        let ok = is_hhp_bisimulation(
            Strength::Weak,
            &q.structure,
            target,
            &r,
            PrefixMode::default(),
        );
        println!(
            "projection onto {name}: {} triples, weak hhp-bisimulation: {ok}",
            r.len()
        );
    }
}
