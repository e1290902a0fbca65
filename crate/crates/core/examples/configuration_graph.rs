//! Strong and weak transitions of a small structure, exported as JSON.

use wtc::frontend::parse_pes;
use wtc::pes::Configuration;
use wtc::transition::{
    tau_closure, weak_pomset_successors, weak_step_successors, ConfigurationGraph,
};

fn main() {
    let pes = parse_pes(include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/a-tau-b.pes"
    )))
    .unwrap();
    let graph = ConfigurationGraph::build(&pes);
    println!(
        "{} nodes, {} strong, {} weak pomset, {} weak step edges",
        graph.nodes.len(),
        graph.strong_edges.len(),
        graph.weak_pomset_edges.len(),
        graph.weak_step_edges.len()
    );

    for (p, c) in weak_pomset_successors(&pes, Configuration::EMPTY) {
        println!("{{}} ={p}=> {}", pes.describe_set(c.events()));
    }
    let after_a = pes
        .configuration(pes.closure([pes.event_by_name("e1").unwrap()].into_iter().collect()))
        .unwrap();
    let silent: Vec<String> = tau_closure(&pes, after_a)
        .iter()
        .map(|c| pes.describe_set(c.events()))
        .collect();
    println!(
        "silent closure of {}: {}",
        pes.describe_set(after_a.events()),
        silent.join(" ")
    );
    println!(
        "weak steps from there: {}",
        weak_step_successors(&pes, after_a).len()
    );

    println!(
        "{}",
        serde_json::to_string_pretty(&graph.export(&pes)).unwrap()
    );
}
