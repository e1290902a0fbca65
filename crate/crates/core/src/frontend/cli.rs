//! The `wtc` command line.
//!
//! Exit status is 0 on success, 1 when the structures are inequivalent, the formula
//! does not hold or a sweep suite finds a failure, and 2 on usage or input errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use super::report::{
    CheckReport, ConfigsReport, ModelCheckReport, Report, SweepReport, ValidateReport,
};
use super::suites::{run_suite, SUITES};
use super::{
    compile_term, parse_formula, parse_pes, parse_term, print_pes, sweep_small_pes, SweepSpec,
};
use crate::equivalence::{check_with, CheckOptions, EquivalenceKind, TraceNode, TraceReason};
use crate::logic::{Environment, ModelChecker};
use crate::pes::{EventSet, PrimeEventStructure};
use crate::pomset::PrefixMode;
use crate::transition::ConfigurationGraph;

#[derive(Parser, Debug)]
#[command(
    name = "wtc",
    version,
    about = "Weak true-concurrency equivalences and logic for event structures"
)]
struct Cli {
    /// Also write a JSON report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PrefixArg {
    Visible,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate an event structure.
    Validate { pes: PathBuf },
    /// List the configurations.
    Configs { pes: PathBuf },
    /// Export the configuration graph with strong and weak edges as JSON.
    Graph {
        pes: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide an equivalence, e.g. `--relation weak-hp`.
    Check {
        #[arg(long, value_parser = parse_relation)]
        relation: EquivalenceKind,
        left: PathBuf,
        right: PathBuf,
        /// Print a distinguishing formula or game trace when inequivalent.
        #[arg(long)]
        certificate: bool,
        #[arg(long, value_enum, default_value = "visible")]
        prefix_mode: PrefixArg,
    },
    /// Print a distinguishing formula for an inequivalent pair.
    Distinguish {
        #[arg(long, value_parser = parse_relation)]
        relation: EquivalenceKind,
        left: PathBuf,
        right: PathBuf,
    },
    /// Model-check a formula at a configuration under an environment.
    Mc {
        pes: PathBuf,
        #[arg(
            long,
            required_unless_present = "formula_file",
            conflicts_with = "formula_file"
        )]
        formula: Option<String>,
        #[arg(long)]
        formula_file: Option<PathBuf>,
        /// Comma-separated event identifiers; the empty configuration by default.
        #[arg(long, value_delimiter = ',')]
        config: Vec<String>,
        /// Comma-separated `var=event` bindings.
        #[arg(long, value_delimiter = ',')]
        env: Vec<String>,
    },
    /// Compile a process term such as `a.tau.b + c` to an event structure.
    Term {
        term: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate small structures and run a property suite over them.
    Sweep {
        #[arg(long)]
        max_events: usize,
        #[arg(long, value_delimiter = ',', default_value = "a")]
        alphabet: Vec<String>,
        #[arg(long, default_value_t = 0)]
        max_tau: usize,
        #[arg(long, default_value = "count")]
        suite: String,
    },
}

/// `weak-hp`, `strong-step`, or a bare relation name meaning its weak version.
fn parse_relation(s: &str) -> Result<EquivalenceKind, String> {
    if s.contains('-') {
        s.parse()
    } else {
        format!("weak-{s}").parse()
    }
}

/// Failure with an exit status and message.
struct Failure(i32, String);

fn input_error(msg: impl Into<String>) -> Failure {
    Failure(2, msg.into())
}

fn load(path: &Path) -> Result<PrimeEventStructure, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    parse_pes(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn event_set(pes: &PrimeEventStructure, ids: &[String]) -> Result<EventSet, Failure> {
    ids.iter()
        .filter(|s| !s.is_empty())
        .map(|s| {
            pes.event_by_name(s)
                .ok_or_else(|| input_error(format!("unknown event `{s}`")))
        })
        .collect()
}

fn render_trace(node: &TraceNode, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match &node.reason {
        TraceReason::Move {
            side,
            play,
            answers,
        } => {
            out.push_str(&format!(
                "{pad}at {} (round {}), {side:?} plays {play}\n",
                node.position, node.round
            ));
            if answers.is_empty() {
                out.push_str(&format!("{pad}  no answer\n"));
            }
            for a in answers {
                out.push_str(&format!("{pad}  answer {}\n", a.play));
                render_trace(&a.then, indent + 2, out);
            }
        }
        TraceReason::Prefix { prefix } => {
            out.push_str(&format!(
                "{pad}at {} (round {}), a prefix is lost\n",
                node.position, node.round
            ));
            render_trace(prefix, indent + 1, out);
        }
    }
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn execute(command: Command, out: &mut String) -> Result<(i32, Report), Failure> {
    match command {
        Command::Validate { pes } => {
            let p = load(&pes)?;
            out.push_str(&format!("{}: valid, {} events\n", pes.display(), p.len()));
            let report = ValidateReport {
                pes: pes.display().to_string(),
                valid: true,
                events: p.len(),
                error: None,
            };
            Ok((0, Report::Validate(report)))
        }
        Command::Configs { pes } => {
            let p = load(&pes)?;
            let configurations: Vec<Vec<String>> = p
                .enumerate_configurations()
                .into_iter()
                .map(|c| {
                    c.events()
                        .iter()
                        .map(|e| p.event_name(e).to_string())
                        .collect()
                })
                .collect();
            for c in &configurations {
                out.push_str(&format!("{{{}}}\n", c.join(",")));
            }
            Ok((
                0,
                Report::Configs(ConfigsReport {
                    pes: pes.display().to_string(),
                    configurations,
                }),
            ))
        }
        Command::Graph { pes, out: target } => {
            let p = load(&pes)?;
            let g = ConfigurationGraph::build(&p);
            let json = serde_json::to_string_pretty(&g.export(&p)).expect("graph serializes");
            match target {
                Some(path) => write_file(&path, &json)?,
                None => out.push_str(&(json + "\n")),
            }
            let edges = g.strong_edges.len() + g.weak_pomset_edges.len() + g.weak_step_edges.len();
            Ok((
                0,
                Report::Graph {
                    pes: pes.display().to_string(),
                    nodes: g.nodes.len(),
                    edges,
                },
            ))
        }
        Command::Check {
            relation,
            left,
            right,
            certificate,
            prefix_mode,
        } => {
            let (lp, rp) = (load(&left)?, load(&right)?);
            let options = CheckOptions {
                certificate,
                trace: certificate,
                prefix_mode: match prefix_mode {
                    PrefixArg::Visible => PrefixMode::VisibleGenerated,
                    PrefixArg::All => PrefixMode::AllConfigurations,
                },
                ..CheckOptions::default()
            };
            let start = Instant::now();
            let v = check_with(relation, &lp, &rp, options);
            let elapsed = millis(start);
            out.push_str(&format!(
                "{relation}: {}\n",
                if v.equivalent {
                    "equivalent"
                } else {
                    "not equivalent"
                }
            ));
            if let Some(c) = &v.certificate {
                out.push_str(&format!(
                    "certificate (holds on {:?}): {}\n",
                    c.satisfied_by, c.formula
                ));
            } else if let Some(t) = &v.trace {
                out.push_str("refutation:\n");
                render_trace(t, 1, out);
            }
            let names = (left.display().to_string(), right.display().to_string());
            let report = CheckReport::new(&v, (&names.0, &lp), (&names.1, &rp), elapsed);
            Ok((if v.equivalent { 0 } else { 1 }, Report::Check(report)))
        }
        Command::Distinguish {
            relation,
            left,
            right,
        } => {
            let (lp, rp) = (load(&left)?, load(&right)?);
            let start = Instant::now();
            let v = check_with(relation, &lp, &rp, CheckOptions::default());
            let elapsed = millis(start);
            if v.equivalent {
                return Err(Failure(
                    1,
                    format!("{relation}: the structures are equivalent"),
                ));
            }
            match &v.certificate {
                Some(c) => {
                    out.push_str(&format!("{} (holds on {:?})\n", c.formula, c.satisfied_by))
                }
                None => {
                    out.push_str("no formula found; refutation:\n");
                    if let Some(t) = &v.trace {
                        render_trace(t, 1, out);
                    }
                }
            }
            let names = (left.display().to_string(), right.display().to_string());
            let report = CheckReport::new(&v, (&names.0, &lp), (&names.1, &rp), elapsed);
            Ok((0, Report::Distinguish(report)))
        }
        Command::Mc {
            pes,
            formula,
            formula_file,
            config,
            env,
        } => {
            let p = load(&pes)?;
            let text = match (formula, formula_file) {
                (Some(f), _) => f,
                (None, Some(path)) => fs::read_to_string(&path)
                    .map_err(|e| input_error(format!("{}: {e}", path.display())))?,
                (None, None) => {
                    return Err(input_error(
                        "one of --formula or --formula-file is required",
                    ))
                }
            };
            let phi = parse_formula(&text).map_err(|e| input_error(format!("formula: {e}")))?;
            let c = p
                .configuration(event_set(&p, &config)?)
                .map_err(|e| input_error(format!("--config: {e}")))?;
            let mut environment = Environment::new();
            let mut env_names = BTreeMap::new();
            for binding in env.iter().filter(|s| !s.is_empty()) {
                let (var, ev) = binding.split_once('=').ok_or_else(|| {
                    input_error(format!("--env expects var=event, got `{binding}`"))
                })?;
                let e = p
                    .event_by_name(ev)
                    .ok_or_else(|| input_error(format!("unknown event `{ev}`")))?;
                environment = environment.bind(var, e);
                env_names.insert(var.to_string(), ev.to_string());
            }
            let start = Instant::now();
            let satisfied = ModelChecker::new(&p)
                .satisfies(c, &environment, &phi)
                .map_err(|e| input_error(format!("model checking: {e}")))?;
            let elapsed = millis(start);
            out.push_str(&format!(
                "{}\n",
                if satisfied {
                    "satisfied"
                } else {
                    "not satisfied"
                }
            ));
            let report = ModelCheckReport {
                pes: pes.display().to_string(),
                formula: phi.to_string(),
                config: config.into_iter().filter(|s| !s.is_empty()).collect(),
                env: env_names,
                satisfied,
                elapsed_ms: elapsed,
            };
            Ok((if satisfied { 0 } else { 1 }, Report::Mc(report)))
        }
        Command::Term { term, out: target } => {
            let t = parse_term(&term).map_err(|e| input_error(format!("term: {e}")))?;
            let p = compile_term(&t).map_err(|e| input_error(format!("term: {e}")))?;
            let text = print_pes(&p);
            match target {
                Some(path) => write_file(&path, &text)?,
                None => out.push_str(&text),
            }
            Ok((
                0,
                Report::Term {
                    term,
                    events: p.len(),
                },
            ))
        }
        Command::Sweep {
            max_events,
            alphabet,
            max_tau,
            suite,
        } => {
            if !SUITES.contains(&suite.as_str()) {
                return Err(input_error(format!(
                    "unknown suite `{suite}`, expected one of {}",
                    SUITES.join(", ")
                )));
            }
            let spec = SweepSpec {
                max_events,
                max_tau,
                alphabet: alphabet.clone(),
                min_events: 0,
            };
            let start = Instant::now();
            let family = sweep_small_pes(&spec).map_err(|e| input_error(e.to_string()))?;
            let outcome = run_suite(&suite, &family).map_err(input_error)?;
            let elapsed = millis(start);
            out.push_str(&format!(
                "{suite}: {} structures, {} cases, {} failures\n",
                family.len(),
                outcome.cases,
                outcome.failures.len()
            ));
            for f in &outcome.failures {
                out.push_str(&format!("  {f}\n"));
            }
            let status = if outcome.failures.is_empty() { 0 } else { 1 };
            let report = SweepReport {
                suite,
                max_events,
                max_tau,
                alphabet,
                structures: family.len(),
                cases: outcome.cases,
                failures: outcome.failures,
                elapsed_ms: elapsed,
            };
            Ok((status, Report::Sweep(report)))
        }
    }
}

/// Runs the command line on `args` (program name first).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let mut out = String::new();
    let (status, report) = match execute(cli.command, &mut out) {
        Ok(r) => r,
        Err(Failure(status, message)) => {
            let _ = writeln!(stderr, "wtc: {message}");
            (status, Report::Error { message })
        }
    };
    let _ = write!(stdout, "{out}");
    if let Some(path) = cli.report {
        if let Err(e) = fs::write(&path, report.to_json()) {
            let _ = writeln!(stderr, "wtc: {}: {e}", path.display());
            return 2;
        }
    }
    status
}
