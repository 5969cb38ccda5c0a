//! Semantic conflict, (binary-)conflict-freeness, and structural conflict
//! nets, decided over the explored reachable markings.

use alloc::vec::Vec;
use core::fmt;

use crate::net::{explore, Exploration, Marking, Net};
use crate::verdict::Verdict;
use crate::{Bounds, PlaceId, Step, TransitionId};

/// `G` is in conflict at `M`: each `G↾{t}` is enabled but `G` is not.
///
/// Multiplicities are kept, so `{t, t, u}` is not in conflict when only one
/// `t` is enabled.
pub fn in_conflict(net: &Net, marking: &Marking, g: &Step) -> bool {
    !g.is_empty()
        && g.iter().all(|(&t, k)| net.is_enabled(marking, &Step::from_iter([(t, k)])))
        && !net.is_enabled(marking, g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConflictMode {
    /// Only multisets of two transitions.
    Binary,
    /// Every finite multiset.
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    ConflictFree,
    BinaryConflictFree,
    Structural,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::ConflictFree => "conflict_free",
            Property::BinaryConflictFree => "binary_conflict_free",
            Property::Structural => "structural",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConflictWitness {
    /// `multiset` is in conflict at the reachable `marking`.
    Conflict { marking: Marking, multiset: Step },
    /// `step` is enabled at the reachable `marking` although both
    /// transitions consume from `place`.
    SharedPreplace { marking: Marking, step: Step, place: PlaceId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictReport {
    pub property: Property,
    pub markings_explored: usize,
    pub verdict: Verdict<ConflictWitness>,
}

/// Finds the first reachable marking (in discovery order) with a witness;
/// otherwise holds if exploration closed.
fn scan(
    ex: &Exploration,
    property: Property,
    mut witness: impl FnMut(&Marking) -> Option<ConflictWitness>,
) -> ConflictReport {
    let found = ex.markings.iter().find_map(&mut witness);
    let verdict = match found {
        Some(w) => Verdict::Fails(w),
        None => Verdict::from_bound(ex.verdict.bound_hit().copied()),
    };
    ConflictReport { property, markings_explored: ex.markings.len(), verdict }
}

/// Conflict-freeness (`General`) or binary-conflict-freeness (`Binary`).
pub fn check_conflict_freeness(net: &Net, bounds: &Bounds, mode: ConflictMode) -> ConflictReport {
    let ex = explore(net, bounds);
    conflict_freeness_over(net, &ex, mode)
}

pub(crate) fn conflict_freeness_over(net: &Net, ex: &Exploration, mode: ConflictMode) -> ConflictReport {
    match mode {
        ConflictMode::Binary => scan(ex, Property::BinaryConflictFree, |m| binary_witness(net, m)),
        ConflictMode::General => scan(ex, Property::ConflictFree, |m| general_witness(net, m)),
    }
}

fn binary_witness(net: &Net, m: &Marking) -> Option<ConflictWitness> {
    let ts: Vec<TransitionId> = net.transitions().collect();
    for (i, &t) in ts.iter().enumerate() {
        for &u in &ts[i..] {
            let g: Step = [t, u].into_iter().collect();
            if in_conflict(net, m, &g) {
                return Some(ConflictWitness::Conflict { marking: m.clone(), multiset: g });
            }
        }
    }
    None
}

/// Largest `k` with `k·•t ≤ m`.
fn cap(net: &Net, m: &Marking, t: TransitionId) -> u32 {
    net.preset(t).iter().map(|(s, w)| m.count(s) / w).min().unwrap_or(0)
}

/// Smallest conflicting multiset at `m`, searched by cardinality. Only
/// multisets whose restrictions are all enabled can qualify, which caps each
/// multiplicity.
fn general_witness(net: &Net, m: &Marking) -> Option<ConflictWitness> {
    let caps: Vec<(TransitionId, u32)> =
        net.transitions().map(|t| (t, cap(net, m, t))).filter(|&(_, c)| c > 0).collect();
    let total: u32 = caps.iter().map(|&(_, c)| c).sum();
    for size in 2..=total {
        let mut counts = alloc::vec![0u32; caps.len()];
        if let Some(g) = search_size(net, m, &caps, &mut counts, 0, size) {
            return Some(ConflictWitness::Conflict { marking: m.clone(), multiset: g });
        }
    }
    None
}

fn search_size(net: &Net, m: &Marking, caps: &[(TransitionId, u32)], counts: &mut [u32], i: usize, left: u32) -> Option<Step> {
    if i == caps.len() {
        if left > 0 {
            return None;
        }
        let g: Step = caps.iter().zip(counts.iter()).map(|(&(t, _), &k)| (t, k)).collect();
        return (!net.is_enabled(m, &g)).then_some(g);
    }
    let rest: u32 = caps[i + 1..].iter().map(|&(_, c)| c).sum();
    let hi = caps[i].1.min(left);
    let lo = left.saturating_sub(rest);
    // larger counts first so that earlier transitions dominate the order
    for k in (lo..=hi).rev() {
        counts[i] = k;
        if let Some(g) = search_size(net, m, caps, counts, i + 1, left - k) {
            return Some(g);
        }
    }
    counts[i] = 0;
    None
}

/// Structural conflict net: whenever `{t, u}` is enabled at a reachable
/// marking, `•t ∩ •u = ∅` (`t = u` included).
pub fn check_structural(net: &Net, bounds: &Bounds) -> ConflictReport {
    structural_over(net, &explore(net, bounds))
}

pub(crate) fn structural_over(net: &Net, ex: &Exploration) -> ConflictReport {
    let ts: Vec<TransitionId> = net.transitions().collect();
    scan(ex, Property::Structural, |m| {
        for (i, &t) in ts.iter().enumerate() {
            for &u in &ts[i..] {
                let step: Step = [t, u].into_iter().collect();
                if !net.is_enabled(m, &step) {
                    continue;
                }
                let shared = net.preset(t).iter().map(|(s, _)| *s).find(|s| net.preset(u).contains(s));
                if let Some(place) = shared {
                    return Some(ConflictWitness::SharedPreplace { marking: m.clone(), step, place });
                }
            }
        }
        None
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::process::tests::{arb_net, fig1, fig2};
    use crate::NetBuilder;
    use proptest::prelude::*;

    pub(crate) fn remark() -> Net {
        let mut b = NetBuilder::new("remark");
        b.place("s", 1).unwrap().transition("t").unwrap().transition("u").unwrap();
        b.arc("s", "t", 1).unwrap().arc("s", "u", 1).unwrap();
        b.build().unwrap()
    }

    pub(crate) fn fig4() -> Net {
        let mut b = NetBuilder::new("fig4");
        b.place("1", 1).unwrap().place("2", 2).unwrap().place("3", 1).unwrap();
        b.transition("a").unwrap().transition("b").unwrap();
        for (t, ps) in [("a", ["1", "2"]), ("b", ["2", "3"])] {
            for p in ps {
                b.arc(p, t, 1).unwrap().arc(t, p, 1).unwrap();
            }
        }
        b.build().unwrap()
    }

    fn step(net: &Net, names: &str) -> Step {
        net.step_from_names(names.split_whitespace()).unwrap()
    }

    #[test]
    fn in_conflict_examples() {
        let n2 = fig2();
        assert!(in_conflict(&n2, n2.initial_marking(), &step(&n2, "a b c")));
        assert!(!in_conflict(&n2, n2.initial_marking(), &step(&n2, "a b")));
        let r = remark();
        assert!(in_conflict(&r, r.initial_marking(), &step(&r, "t u")));
        assert!(!in_conflict(&r, r.initial_marking(), &step(&r, "t t u")));
        assert!(!in_conflict(&r, r.initial_marking(), &Step::new()));
    }

    #[test]
    fn fig1_is_a_conflict_free_structural_net() {
        let n = fig1();
        let b = Bounds::default();
        assert!(check_conflict_freeness(&n, &b, ConflictMode::General).verdict.holds());
        assert!(check_conflict_freeness(&n, &b, ConflictMode::Binary).verdict.holds());
        let s = check_structural(&n, &b);
        assert!(s.verdict.holds());
        assert_eq!(s.markings_explored, 7);
    }

    #[test]
    fn fig2_conflicts() {
        let n = fig2();
        let b = Bounds::default();
        // after "a" one p-token is left and both b and c want it
        let after_a = n.fire_sequence(&n.sequence_from_names("a").unwrap()).unwrap();
        assert_eq!(
            check_conflict_freeness(&n, &b, ConflictMode::Binary).verdict.witness(),
            Some(&ConflictWitness::Conflict { marking: after_a, multiset: step(&n, "b c") })
        );
        let general = check_conflict_freeness(&n, &b, ConflictMode::General);
        assert_eq!(
            general.verdict.witness(),
            Some(&ConflictWitness::Conflict { marking: n.initial_marking().clone(), multiset: step(&n, "a b c") })
        );
        let s = check_structural(&n, &b);
        match s.verdict.witness() {
            Some(ConflictWitness::SharedPreplace { marking, step: g, place }) => {
                assert_eq!(marking, n.initial_marking());
                assert_eq!(*g, step(&n, "a b"));
                assert_eq!(n.place_name(*place), "p");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn remark_net() {
        let n = remark();
        let b = Bounds::default();
        assert!(check_structural(&n, &b).verdict.holds());
        let bin = check_conflict_freeness(&n, &b, ConflictMode::Binary);
        assert!(matches!(bin.verdict.witness(), Some(ConflictWitness::Conflict { multiset, .. }) if *multiset == step(&n, "t u")));
    }

    #[test]
    fn unbounded_behaviour_is_unknown() {
        let n = fig4();
        let b = Bounds::default().with_seq_len(5);
        for mode in [ConflictMode::Binary, ConflictMode::General] {
            assert!(check_conflict_freeness(&n, &b, mode).verdict.is_unknown());
        }
        // a definite failure survives unbounded behaviour: {a, b} shares place 2
        assert!(check_structural(&n, &b).verdict.fails());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn structural_nets(net in arb_net()) {
            let b = Bounds::default().with_seq_len(6);
            let ex = explore(&net, &b);
            let s = structural_over(&net, &ex);
            prop_assume!(s.verdict.holds());
            let general = conflict_freeness_over(&net, &ex, ConflictMode::General);
            let binary = conflict_freeness_over(&net, &ex, ConflictMode::Binary);
            prop_assert_eq!(general.verdict.holds(), binary.verdict.holds());
            for m in &ex.markings {
                let enabled = net.enabled_transitions(m);
                for &t in &enabled {
                    prop_assert!(!net.is_enabled(m, &Step::from_iter([(t, 2)])));
                    for &u in enabled.iter().filter(|&&u| u != t) {
                        let shares = net.preset(t).iter().any(|(s, _)| net.preset(u).contains(s));
                        prop_assert_eq!(in_conflict(&net, m, &Step::from_iter([t, u])), shares);
                    }
                }
            }
        }

        #[test]
        fn witnesses_recheck(net in arb_net()) {
            let b = Bounds::default().with_seq_len(5);
            for mode in [ConflictMode::Binary, ConflictMode::General] {
                if let Some(ConflictWitness::Conflict { marking, multiset }) = check_conflict_freeness(&net, &b, mode).verdict.witness() {
                    prop_assert!(in_conflict(&net, marking, multiset));
                    if mode == ConflictMode::Binary {
                        prop_assert_eq!(multiset.cardinality(), 2);
                    }
                }
            }
        }
    }
}
