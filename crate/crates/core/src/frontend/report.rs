//! Machine-readable JSON reports for the command line.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::equivalence::{Side, TraceNode, Verdict, Witness};
use crate::pes::{EventSet, PrimeEventStructure};
use crate::pomset::PosetalTriple;

fn names(pes: &PrimeEventStructure, x: EventSet) -> Vec<String> {
    x.iter().map(|e| pes.event_name(e).to_string()).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct TripleReport {
    pub left: Vec<String>,
    pub iso: Vec<(String, String)>,
    pub right: Vec<String>,
}

impl TripleReport {
    pub fn new(
        left: &PrimeEventStructure,
        right: &PrimeEventStructure,
        t: &PosetalTriple,
    ) -> TripleReport {
        TripleReport {
            left: names(left, t.left.events()),
            iso: t
                .iso
                .pairs()
                .map(|(a, b)| {
                    (
                        left.event_name(a).to_string(),
                        right.event_name(b).to_string(),
                    )
                })
                .collect(),
            right: names(right, t.right.events()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", content = "elements", rename_all = "lowercase")]
pub enum WitnessReport {
    Pairs(Vec<(Vec<String>, Vec<String>)>),
    Triples(Vec<TripleReport>),
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub formula: String,
    pub satisfied_by: Side,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub relation: String,
    pub left: String,
    pub right: String,
    pub equivalent: bool,
    pub witness: Option<WitnessReport>,
    pub certificate: Option<CertificateReport>,
    pub trace: Option<TraceNode>,
    pub elapsed_ms: f64,
}

impl CheckReport {
    pub fn new(
        verdict: &Verdict,
        left: (&str, &PrimeEventStructure),
        right: (&str, &PrimeEventStructure),
        elapsed_ms: f64,
    ) -> CheckReport {
        let (lp, rp) = (left.1, right.1);
        let witness = verdict.witness.as_ref().map(|w| match w {
            Witness::Pairs(ps) => WitnessReport::Pairs(
                ps.iter()
                    .map(|(a, b)| (names(lp, a.events()), names(rp, b.events())))
                    .collect(),
            ),
            Witness::Triples(ts) => {
                WitnessReport::Triples(ts.iter().map(|t| TripleReport::new(lp, rp, t)).collect())
            }
        });
        CheckReport {
            relation: verdict.kind.to_string(),
            left: left.0.to_string(),
            right: right.0.to_string(),
            equivalent: verdict.equivalent,
            witness,
            certificate: verdict.certificate.as_ref().map(|c| CertificateReport {
                formula: c.formula.to_string(),
                satisfied_by: c.satisfied_by,
            }),
            trace: verdict.trace.clone(),
            elapsed_ms,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelCheckReport {
    pub pes: String,
    pub formula: String,
    pub config: Vec<String>,
    pub env: BTreeMap<String, String>,
    pub satisfied: bool,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidateReport {
    pub pes: String,
    pub valid: bool,
    pub events: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigsReport {
    pub pes: String,
    pub configurations: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub suite: String,
    pub max_events: usize,
    pub max_tau: usize,
    pub alphabet: Vec<String>,
    pub structures: usize,
    pub cases: usize,
    pub failures: Vec<String>,
    pub elapsed_ms: f64,
}

/// Tagged by the subcommand that produced it.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Report {
    Validate(ValidateReport),
    Configs(ConfigsReport),
    Graph {
        pes: String,
        nodes: usize,
        edges: usize,
    },
    Check(CheckReport),
    Distinguish(CheckReport),
    Mc(ModelCheckReport),
    Term {
        term: String,
        events: usize,
    },
    Sweep(SweepReport),
    Error {
        message: String,
    },
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
