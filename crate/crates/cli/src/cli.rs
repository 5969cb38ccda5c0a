//! Command line: `petri-causal <verb> <net-file> [options]`.
//!
//! Exit status: 0 holds, 1 fails (witness in the report), 2 unknown
//! (a bound was hit), 3 usage or parse error.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use petri_causal_core::conflict::{check_conflict_freeness, check_structural, ConflictMode};
use petri_causal_core::maximality::{bd_maximal, corollary_check, enumerate_maximal, weakly_maximal, CorollaryOutcome, MaximalityReport};
use petri_causal_core::net::explore;
use petri_causal_core::traces::{correspondence_check, trace_class};
use petri_causal_core::{BdEngine, Bounds, GrProcess, Net, Policy, Sequence, TransitionId, Verdict};
use serde::Serialize;

use crate::format::{parse_net, ParseError};
use crate::report::{self, Counts, ProcessDump, VerdictJson};

/// Default sequence length for `traces` and `correspond`, which enumerate
/// every pair of sequences.
pub const PAIRWISE_SEQ_LEN: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    /// Fire `--seq`, or report the initial marking and reachability.
    Simulate,
    /// The process of `--seq`, or all maximal processes.
    Processes,
    /// Trace classes of all sequences up to the length bound.
    Traces,
    /// Conflict-freeness, binary conflict-freeness and structural conflicts.
    Conflicts,
    /// Maximal processes and their swapping classes.
    Maximality,
    /// Conflict-freeness against the number of maximal swapping classes.
    Corollary,
    /// Trace equivalence against swapping equivalence.
    Correspond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum PolicyArg {
    #[default]
    Fifo,
    Lifo,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "petri-causal", version, about = "Causal semantics of place/transition nets")]
pub struct Command {
    #[arg(value_enum)]
    pub verb: Verb,
    pub net_path: PathBuf,
    /// Longest firing sequence explored [default: 12, or 6 for traces and correspond].
    #[arg(long)]
    pub max_seq_len: Option<usize>,
    #[arg(long, default_value_t = Bounds::default().max_tokens_per_place)]
    pub max_tokens: u32,
    #[arg(long, default_value_t = Bounds::default().max_states)]
    pub max_states: usize,
    #[arg(long, default_value_t = Bounds::default().class_budget)]
    pub class_budget: usize,
    #[arg(long, value_enum, default_value_t)]
    pub policy: PolicyArg,
    /// Space-separated transition names.
    #[arg(long)]
    pub seq: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// With `processes`: emit only the condition/event dump.
    #[arg(long)]
    pub dump: bool,
}

impl Command {
    pub fn bounds(&self) -> Bounds {
        let default_len = match self.verb {
            Verb::Traces | Verb::Correspond => PAIRWISE_SEQ_LEN,
            _ => Bounds::default().max_seq_len,
        };
        Bounds {
            max_seq_len: self.max_seq_len.unwrap_or(default_len),
            max_tokens_per_place: self.max_tokens,
            max_states: self.max_states,
            class_budget: self.class_budget,
            ..Bounds::default()
        }
    }

    fn policy(&self) -> Policy {
        match self.policy {
            PolicyArg::Fifo => Policy::Fifo,
            PolicyArg::Lifo => Policy::Lifo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Holds => 0,
            Status::Fails => 1,
            Status::Unknown => 2,
        }
    }

    /// A definite failure outweighs an unknown.
    fn and(self, other: Self) -> Self {
        if self == Status::Fails || other == Status::Fails {
            Status::Fails
        } else {
            self.max(other)
        }
    }

    fn of<W>(v: &Verdict<W>) -> Self {
        match v {
            Verdict::Holds => Status::Holds,
            Verdict::Fails(_) => Status::Fails,
            Verdict::Unknown(_) => Status::Unknown,
        }
    }
}

/// A finished run: the exit status and the JSON report (newline-terminated).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    pub json: String,
}

/// Usage and input errors; all exit with status 3.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{0}")]
    Usage(String),
}

impl RunError {
    pub const EXIT_CODE: i32 = 3;
}

fn outcome(status: Status, value: &impl Serialize) -> Outcome {
    let mut json = serde_json::to_string_pretty(value).expect("reports serialise");
    json.push('\n');
    Outcome { status, json }
}

/// Reads the net, runs the verb and writes the report to `--out` if given.
pub fn run(cmd: &Command) -> Result<Outcome, RunError> {
    let text = std::fs::read_to_string(&cmd.net_path).map_err(|source| RunError::Io { path: cmd.net_path.clone(), source })?;
    let net = parse_net(&text).map_err(|source| RunError::Parse { path: cmd.net_path.clone(), source })?;
    let out = run_on(cmd, &net)?;
    if let Some(path) = &cmd.out {
        std::fs::write(path, &out.json).map_err(|source| RunError::Io { path: path.clone(), source })?;
    }
    Ok(out)
}

/// Runs the verb on an already parsed net; does no IO.
pub fn run_on(cmd: &Command, net: &Net) -> Result<Outcome, RunError> {
    let seq = match &cmd.seq {
        Some(text) => Some(net.sequence_from_names(text).map_err(|e| RunError::Usage(e.to_string()))?),
        None => None,
    };
    if seq.is_some() && !matches!(cmd.verb, Verb::Simulate | Verb::Processes) {
        return Err(RunError::Usage("--seq only applies to simulate and processes".into()));
    }
    if cmd.dump && cmd.verb != Verb::Processes {
        return Err(RunError::Usage("--dump only applies to processes".into()));
    }
    let bounds = cmd.bounds();
    Ok(match cmd.verb {
        Verb::Simulate => simulate(net, &bounds, seq.as_deref()),
        Verb::Processes => processes(net, &bounds, seq.as_deref(), cmd.policy(), cmd.dump),
        Verb::Traces => traces(net, &bounds),
        Verb::Conflicts => conflicts(net, &bounds),
        Verb::Maximality => {
            let mut engine = BdEngine::new(bounds.class_budget);
            let r = enumerate_maximal(net, &bounds, &mut engine);
            let json = maximality_json(net, &r, &bounds, &mut engine);
            outcome(Status::of(&r.completeness), &json)
        }
        Verb::Corollary => {
            let mut engine = BdEngine::new(bounds.class_budget);
            let r = corollary_check(net, &bounds, &mut engine);
            let m = maximality_json(net, &r.maximality, &bounds, &mut engine);
            let status = match r.outcome {
                CorollaryOutcome::Agrees | CorollaryOutcome::NotStructural => Status::Holds,
                CorollaryOutcome::Disagrees => Status::Fails,
                CorollaryOutcome::Incomplete(_) => Status::Unknown,
            };
            outcome(status, &report::corollary(net, &r, m))
        }
        Verb::Correspond => {
            let r = correspondence_check(net, bounds.max_seq_len, &bounds).map_err(|e| RunError::Usage(e.to_string()))?;
            outcome(Status::of(&r.verdict), &report::correspondence(net, &r))
        }
    })
}

fn maximality_json(net: &Net, r: &MaximalityReport, bounds: &Bounds, engine: &mut BdEngine) -> report::MaximalityJson {
    let notions: Vec<_> = r
        .per_class
        .iter()
        .map(|c| (weakly_maximal(net, &c.class, bounds, engine), bd_maximal(net, &c.class, bounds, engine)))
        .collect();
    report::maximality(net, r, &notions)
}

#[derive(Serialize)]
struct FiredJson {
    net: String,
    sequence: Vec<String>,
    /// Markings before and after each transition; shorter when one was not enabled.
    markings: Vec<Counts>,
    final_marking: Option<Counts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    enabled: Vec<String>,
}

#[derive(Serialize)]
struct ReachabilityJson {
    net: String,
    initial_marking: Counts,
    enabled: Vec<String>,
    /// A lower bound unless `closed` is `holds`.
    reachable_markings: usize,
    closed: VerdictJson<()>,
}

fn names(net: &Net, ts: &[TransitionId]) -> Vec<String> {
    report::sequence(net, ts)
}

fn simulate(net: &Net, bounds: &Bounds, seq: Option<&[TransitionId]>) -> Outcome {
    let Some(seq) = seq else {
        let ex = explore(net, bounds);
        let m0 = net.initial_marking();
        let json = ReachabilityJson {
            net: net.name().to_string(),
            initial_marking: report::marking(net, m0),
            enabled: names(net, &net.enabled_transitions(m0)),
            reachable_markings: ex.markings.len(),
            closed: report::verdict(net, &ex.verdict, |never| match *never {}),
        };
        return outcome(Status::of(&ex.verdict), &json);
    };
    let mut m = net.initial_marking().clone();
    let mut markings = vec![report::marking(net, &m)];
    let mut error = None;
    for (i, &t) in seq.iter().enumerate() {
        match net.fire(&m, t) {
            Ok(next) => {
                m = next;
                markings.push(report::marking(net, &m));
            }
            Err(e) => {
                error = Some(format!("position {i} ({}): {e}", net.transition_name(t)));
                break;
            }
        }
    }
    let status = if error.is_some() { Status::Fails } else { Status::Holds };
    let json = FiredJson {
        net: net.name().to_string(),
        sequence: names(net, seq),
        final_marking: error.is_none().then(|| report::marking(net, &m)),
        enabled: if error.is_none() { names(net, &net.enabled_transitions(&m)) } else { Vec::new() },
        markings,
        error,
    };
    outcome(status, &json)
}

#[derive(Serialize)]
struct ProcessJson {
    sequence: Vec<String>,
    policy: &'static str,
    canonical_form: String,
    /// Canonical form of the swapping class.
    bd_class: Option<String>,
    cut_marking: Counts,
    process: ProcessDump,
}

#[derive(Serialize)]
struct ProcessErrorJson {
    sequence: Vec<String>,
    error: String,
}

#[derive(Serialize)]
struct MaximalProcessesJson {
    maximal_gr_count: usize,
    counts_are_lower_bounds: bool,
    completeness: VerdictJson<()>,
    processes: Vec<MaximalProcessJson>,
}

#[derive(Serialize)]
struct MaximalProcessJson {
    canonical_form: String,
    example: Vec<String>,
    process: ProcessDump,
}

fn processes(net: &Net, bounds: &Bounds, seq: Option<&[TransitionId]>, policy: Policy, dump_only: bool) -> Outcome {
    let mut engine = BdEngine::new(bounds.class_budget);
    let Some(seq) = seq else {
        let r = enumerate_maximal(net, bounds, &mut engine);
        let status = Status::of(&r.completeness);
        let procs: Vec<MaximalProcessJson> = r
            .maximal_processes
            .iter()
            .map(|p| MaximalProcessJson {
                canonical_form: report::hex(&petri_causal_core::swapping::canonical_form(p)),
                example: names(net, &p.linearize()),
                process: report::process_dump(net, p),
            })
            .collect();
        if dump_only {
            let dumps: Vec<&ProcessDump> = procs.iter().map(|p| &p.process).collect();
            return outcome(status, &dumps);
        }
        let json = MaximalProcessesJson {
            maximal_gr_count: r.maximal_gr_count,
            counts_are_lower_bounds: !r.completeness.holds(),
            completeness: report::verdict(net, &r.completeness, |never| match *never {}),
            processes: procs,
        };
        return outcome(status, &json);
    };
    let p = match GrProcess::from_sequence(net, seq, policy) {
        Ok(p) => p,
        Err(e) => return outcome(Status::Fails, &ProcessErrorJson { sequence: names(net, seq), error: e.to_string() }),
    };
    if dump_only {
        return outcome(Status::Holds, &report::process_dump(net, &p));
    }
    let (status, bd_class) = match engine.classify(&p) {
        Ok(c) => (Status::Holds, Some(report::hex(c.canonical_form()))),
        Err(_) => (Status::Unknown, None),
    };
    let json = ProcessJson {
        sequence: names(net, seq),
        policy: match policy {
            Policy::Fifo => "fifo",
            Policy::Lifo => "lifo",
        },
        canonical_form: report::hex(&petri_causal_core::swapping::canonical_form(&p)),
        bd_class,
        cut_marking: report::marking(net, &p.cut().marking),
        process: report::process_dump(net, &p),
    };
    outcome(status, &json)
}

#[derive(Serialize)]
struct TraceClassJson {
    canonical_member: Vec<String>,
    size: usize,
    transition_multiset: Counts,
}

#[derive(Serialize)]
struct TracesJson {
    max_len: usize,
    /// Classes in order of their first member in breadth-first order.
    classes: Vec<TraceClassJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<report::Bound>,
    correspondence: Option<report::CorrespondenceJson>,
}

fn traces(net: &Net, bounds: &Bounds) -> Outcome {
    let ex = explore(net, bounds);
    let mut covered: std::collections::BTreeSet<Sequence> = Default::default();
    let mut classes = Vec::new();
    let mut status = Status::Holds;
    let mut bound = None;
    for s in ex.tree.sequences() {
        if covered.contains(&s) {
            continue;
        }
        match trace_class(net, &s, bounds.trace_budget) {
            Ok(c) => {
                covered.extend(c.members().cloned());
                classes.push(TraceClassJson {
                    canonical_member: names(net, c.canonical_member()),
                    size: c.len(),
                    transition_multiset: report::step(net, c.transition_multiset()),
                });
            }
            Err(e) => {
                status = Status::Unknown;
                bound = Some(report::Bound { kind: "trace_budget", message: e.to_string() });
                break;
            }
        }
    }
    let correspondence = match correspondence_check(net, bounds.max_seq_len, bounds) {
        Ok(r) => {
            status = status.and(Status::of(&r.verdict));
            Some(report::correspondence(net, &r))
        }
        Err(_) => {
            status = status.and(Status::Unknown);
            None
        }
    };
    outcome(status, &TracesJson { max_len: bounds.max_seq_len, classes, bound, correspondence })
}

fn conflicts(net: &Net, bounds: &Bounds) -> Outcome {
    let reports = [
        check_conflict_freeness(net, bounds, ConflictMode::General),
        check_conflict_freeness(net, bounds, ConflictMode::Binary),
        check_structural(net, bounds),
    ];
    let status = reports.iter().fold(Status::Holds, |s, r| s.and(Status::of(&r.verdict)));
    let json: Vec<report::ConflictJson> = reports.iter().map(|r| report::conflict(net, r)).collect();
    outcome(status, &json)
}
