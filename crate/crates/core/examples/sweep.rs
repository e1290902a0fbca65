//! Enumerate small structures up to isomorphism and run a property over all pairs.

use wtc::equivalence::{check_with, CheckOptions, EquivalenceKind, Relation};
use wtc::frontend::{sweep_small_pes, SweepSpec};

fn main() {
    for n in 0..=4 {
        let family = sweep_small_pes(&SweepSpec::new(n, &["a"], 1)).unwrap();
        println!(
            "up to {n} events over {{a, tau}}: {} structures",
            family.len()
        );
    }

    // how often does each weak relation identify two distinct structures?
    let family = sweep_small_pes(&SweepSpec::new(3, &["a", "b"], 1)).unwrap();
    for relation in Relation::ALL {
        let kind = EquivalenceKind::weak(relation);
        let mut identified = 0;
        for (i, p) in family.iter().enumerate() {
            for q in &family[i + 1..] {
                if check_with(kind, p, q, CheckOptions::verdict_only()).equivalent {
                    identified += 1;
                }
            }
        }
        println!(
            "{:<12} identifies {identified} distinct pairs",
            kind.to_string()
        );
    }
}
