//! JSON report shapes. Markings and multisets are objects keyed by name,
//! sequences are arrays of transition names, canonical forms are lowercase
//! hex. Field order is fixed by the struct definitions.

use std::collections::BTreeMap;

use petri_causal_core::conflict::{ConflictReport, ConflictWitness};
use petri_causal_core::maximality::{CorollaryOutcome, CorollaryReport, MaximalityReport};
use petri_causal_core::process::GrProcess;
use petri_causal_core::traces::{CorrespondenceReport, Mismatch};
use petri_causal_core::{BoundHit, Marking, Net, Step, TransitionId, Verdict};
use serde::Serialize;

pub type Counts = BTreeMap<String, u32>;

pub fn marking(net: &Net, m: &Marking) -> Counts {
    m.iter().map(|(&s, k)| (net.place_name(s).to_string(), k)).collect()
}

pub fn step(net: &Net, g: &Step) -> Counts {
    g.iter().map(|(&t, k)| (net.transition_name(t).to_string(), k)).collect()
}

pub fn sequence(net: &Net, s: &[TransitionId]) -> Vec<String> {
    s.iter().map(|&t| net.transition_name(t).to_string()).collect()
}

pub fn hex(bytes: &[u8]) -> String {
    hex::encode(bytes)
}

#[derive(Debug, Clone, Serialize)]
pub struct Bound {
    pub kind: &'static str,
    pub message: String,
}

pub fn bound(net: &Net, hit: &BoundHit) -> Bound {
    let (kind, message) = match hit {
        BoundHit::SequenceLength(_) => ("sequence_length", hit.to_string()),
        BoundHit::TokensPerPlace { place, tokens, limit } => (
            "tokens_per_place",
            format!("place {} holds {tokens} tokens, above the limit {limit}", net.place_name(*place)),
        ),
        BoundHit::States(_) => ("states", hit.to_string()),
        BoundHit::ClassBudget(_) => ("class_budget", hit.to_string()),
    };
    Bound { kind, message }
}

/// `status` is `holds`, `fails` or `unknown`; `witness` only with `fails`,
/// `bound` only with `unknown`.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictJson<W> {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<W>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<Bound>,
}

pub fn verdict<W, V>(net: &Net, v: &Verdict<W>, f: impl FnOnce(&W) -> V) -> VerdictJson<V> {
    match v {
        Verdict::Holds => VerdictJson { status: "holds", witness: None, bound: None },
        Verdict::Fails(w) => VerdictJson { status: "fails", witness: Some(f(w)), bound: None },
        Verdict::Unknown(hit) => VerdictJson { status: "unknown", witness: None, bound: Some(bound(net, hit)) },
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionJson {
    pub id: u32,
    pub place: String,
    pub pre_event: Option<u32>,
    pub post_event: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EventJson {
    pub id: u32,
    pub transition: String,
    /// Occurrence number of `transition` among the events, from 0.
    pub index: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProcessDump {
    pub conditions: Vec<ConditionJson>,
    pub events: Vec<EventJson>,
}

pub fn process_dump(net: &Net, p: &GrProcess) -> ProcessDump {
    let conditions = p
        .conditions()
        .map(|(id, c)| ConditionJson {
            id: id.0,
            place: net.place_name(c.place).to_string(),
            pre_event: c.pre.map(|e| e.0),
            post_event: c.post.map(|e| e.0),
        })
        .collect();
    let mut seen: BTreeMap<TransitionId, u32> = BTreeMap::new();
    let events = p
        .events()
        .map(|(id, e)| {
            let k = seen.entry(e.transition).or_insert(0);
            let index = *k;
            *k += 1;
            EventJson { id: id.0, transition: net.transition_name(e.transition).to_string(), index }
        })
        .collect();
    ProcessDump { conditions, events }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConflictWitnessJson {
    Conflict { marking: Counts, multiset: Counts },
    SharedPreplace { marking: Counts, step: Counts, place: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct ConflictJson {
    pub property: String,
    pub markings_explored: usize,
    pub verdict: VerdictJson<ConflictWitnessJson>,
}

pub fn conflict(net: &Net, r: &ConflictReport) -> ConflictJson {
    ConflictJson {
        property: r.property.to_string(),
        markings_explored: r.markings_explored,
        verdict: verdict(net, &r.verdict, |w| match w {
            ConflictWitness::Conflict { marking: m, multiset } => {
                ConflictWitnessJson::Conflict { marking: marking(net, m), multiset: step(net, multiset) }
            }
            ConflictWitness::SharedPreplace { marking: m, step: g, place } => ConflictWitnessJson::SharedPreplace {
                marking: marking(net, m),
                step: step(net, g),
                place: net.place_name(*place).to_string(),
            },
        }),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MaximalClassJson {
    pub canonical_form: String,
    pub example: Vec<String>,
    pub transition_multiset: Counts,
    pub gr_members: usize,
    pub weakly_maximal: VerdictJson<String>,
    pub bd_maximal: VerdictJson<BdExtensionJson>,
}

/// A member of the class extended by `transition`, leaving the class.
#[derive(Debug, Clone, Serialize)]
pub struct BdExtensionJson {
    pub member: Vec<String>,
    pub transition: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaximalityJson {
    pub maximal_gr_count: usize,
    pub maximal_bd_count: usize,
    /// True when completeness is not `holds`: the counts are then lower bounds.
    pub counts_are_lower_bounds: bool,
    pub completeness: VerdictJson<()>,
    pub processes_explored: usize,
    pub classes: Vec<MaximalClassJson>,
}

/// `notions` holds the weak and BD maximality verdicts of each class, in
/// `r.per_class` order.
pub fn maximality(
    net: &Net,
    r: &MaximalityReport,
    notions: &[(Verdict<TransitionId>, Verdict<(Vec<TransitionId>, TransitionId)>)],
) -> MaximalityJson {
    let classes = r
        .per_class
        .iter()
        .zip(notions)
        .map(|(c, (weak, bd))| MaximalClassJson {
            canonical_form: hex(c.class.canonical_form()),
            example: sequence(net, &c.example),
            transition_multiset: step(net, c.class.transition_multiset()),
            gr_members: c.gr_members,
            weakly_maximal: verdict(net, weak, |&t| net.transition_name(t).to_string()),
            bd_maximal: verdict(net, bd, |(s, t)| BdExtensionJson {
                member: sequence(net, s),
                transition: net.transition_name(*t).to_string(),
            }),
        })
        .collect();
    MaximalityJson {
        maximal_gr_count: r.maximal_gr_count,
        maximal_bd_count: r.maximal_bd_count,
        counts_are_lower_bounds: !r.completeness.holds(),
        completeness: verdict(net, &r.completeness, |never| match *never {}),
        processes_explored: r.processes_explored,
        classes,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorollaryJson {
    pub structural: ConflictJson,
    pub conflict_free: ConflictJson,
    pub binary_conflict_free: ConflictJson,
    pub maximality: MaximalityJson,
    /// `agrees`, `disagrees`, `not_structural` or `incomplete`.
    pub outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<Bound>,
}

pub fn corollary(net: &Net, r: &CorollaryReport, maximality_json: MaximalityJson) -> CorollaryJson {
    let (outcome, b) = match &r.outcome {
        CorollaryOutcome::Agrees => ("agrees", None),
        CorollaryOutcome::Disagrees => ("disagrees", None),
        CorollaryOutcome::NotStructural => ("not_structural", None),
        CorollaryOutcome::Incomplete(hit) => ("incomplete", Some(bound(net, hit))),
    };
    CorollaryJson {
        structural: conflict(net, &r.structural),
        conflict_free: conflict(net, &r.conflict_free),
        binary_conflict_free: conflict(net, &r.binary_conflict_free),
        maximality: maximality_json,
        outcome,
        bound: b,
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MismatchJson {
    Equivalence { sigma: Vec<String>, rho: Vec<String>, trace_equivalent: bool, bd_equal: bool },
    Order { sigma: Vec<String>, rho: Vec<String>, trace_leq: bool, bd_leq: bool },
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrespondenceJson {
    pub max_len: usize,
    pub sequences: usize,
    pub trace_classes: usize,
    pub bd_classes: usize,
    pub maximal_trace_classes: usize,
    pub verdict: VerdictJson<MismatchJson>,
}

pub fn correspondence(net: &Net, r: &CorrespondenceReport) -> CorrespondenceJson {
    CorrespondenceJson {
        max_len: r.max_len,
        sequences: r.sequences,
        trace_classes: r.trace_classes,
        bd_classes: r.bd_classes,
        maximal_trace_classes: r.maximal_trace_classes,
        verdict: verdict(net, &r.verdict, |m| match m {
            Mismatch::Equivalence { sigma, rho, trace_equivalent, bd_equal } => MismatchJson::Equivalence {
                sigma: sequence(net, sigma),
                rho: sequence(net, rho),
                trace_equivalent: *trace_equivalent,
                bd_equal: *bd_equal,
            },
            Mismatch::Order { sigma, rho, trace_leq, bd_leq } => MismatchJson::Order {
                sigma: sequence(net, sigma),
                rho: sequence(net, rho),
                trace_leq: *trace_leq,
                bd_leq: *bd_leq,
            },
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;
    use petri_causal_core::Policy;

    #[test]
    fn hex_is_lowercase_and_padded() {
        assert_eq!(hex(&[0x01, 0xab, 0x00]), "01ab00");
    }

    #[test]
    fn dump_of_fig1_abc() {
        let net = fixture("fig1").unwrap();
        let p = GrProcess::from_sequence(&net, &net.sequence_from_names("a b c").unwrap(), Policy::Fifo).unwrap();
        let d = process_dump(&net, &p);
        assert_eq!(d.events.len(), 3);
        assert_eq!(d.conditions.len(), 3 + 3);
        let names: Vec<&str> = d.events.iter().map(|e| e.transition.as_str()).collect();
        assert_eq!(names, ["a", "b", "c"]);
        assert!(d.events.iter().all(|e| e.index == 0));
        // fifo: c consumes the older 4-token, the one a produced
        let c_id = d.events[2].id;
        let consumed: Vec<&ConditionJson> = d.conditions.iter().filter(|c| c.post_event == Some(c_id) && c.place == "4").collect();
        assert_eq!(consumed.len(), 1);
        assert_eq!(consumed[0].pre_event, Some(d.events[0].id));
    }

    #[test]
    fn verdict_shapes() {
        let net = fixture("fig1").unwrap();
        let v: Verdict<u8> = Verdict::Unknown(BoundHit::SequenceLength(3));
        let j = serde_json::to_value(verdict(&net, &v, |&w| w)).unwrap();
        assert_eq!(j["status"], "unknown");
        assert_eq!(j["bound"]["kind"], "sequence_length");
        assert!(j.get("witness").is_none());
        let j = serde_json::to_value(verdict(&net, &Verdict::Fails(4u8), |&w| w)).unwrap();
        assert_eq!(j["witness"], 4);
    }
}
