//! Induced pomsets, isomorphisms and posetal triples.

use wtc::frontend::parse_pes;
use wtc::pomset::{
    all_isomorphisms, induced_pomset, pointwise_prefixes, pomset_isomorphic, PosetalTriple,
};

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

    // the visible part of the maximal configurations: a before b on both sides
    let full_left = left
        .enumerate_configurations()
        .into_iter()
        .max_by_key(|c| c.len())
        .unwrap();
    let full_right = right
        .enumerate_configurations()
        .into_iter()
        .max_by_key(|c| c.len())
        .unwrap();
    let p = induced_pomset(&left, left.visible_part(full_left.events()).unwrap()).unwrap();
    let q = induced_pomset(&right, full_right.events()).unwrap();
    println!("left  {p}");
    println!("right {q}");

    let f = pomset_isomorphic(&p, &q).expect("same shape");
    let pairs: Vec<String> = f
        .pairs()
        .map(|(a, b)| format!("{}->{}", left.event_name(a), right.event_name(b)))
        .collect();
    println!("iso   {}", pairs.join(", "));

    let t = PosetalTriple {
        left: full_left,
        iso: f,
        right: full_right,
    };
    println!("prefixes of the full triple:");
    for pre in pointwise_prefixes(&left, &right, &t) {
        println!(
            "  ({}, {} pairs, {})",
            left.describe_set(pre.left.events()),
            pre.iso.len(),
            right.describe_set(pre.right.events())
        );
    }

    // an antichain of two a's has two automorphisms
    let par = parse_pes("event x a\nevent y a\n").unwrap();
    let anti = induced_pomset(&par, par.visible_events()).unwrap();
    println!(
        "automorphisms of {anti}: {}",
        all_isomorphisms(&anti, &anti).len()
    );
}
