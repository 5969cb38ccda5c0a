//! Maximal processes and the maximality notions for swapping classes, at
//! the scale where the behaviour of the net terminates within bounds.
//!
//! A finite process is maximal iff its cut marking enables nothing. When
//! some run does not terminate within [`Bounds::max_seq_len`] every verdict
//! here is unknown and counts are only lower bounds; finite processes cannot
//! separate the maximality notions on such nets.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::convert::Infallible;

use crate::conflict::{conflict_freeness_over, structural_over, ConflictMode, ConflictReport};
use crate::net::{explore, Net};
use crate::process::GrProcess;
use crate::swapping::{canonical_form, BdClass, BdEngine};
use crate::verdict::{BoundHit, Verdict};
use crate::{Bounds, Sequence, TransitionId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalClass {
    pub class: BdClass,
    /// A firing sequence of the class representative.
    pub example: Sequence,
    /// Maximal processes (up to isomorphism) in this class.
    pub gr_members: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalityReport {
    /// Maximal processes up to isomorphism.
    pub maximal_gr_count: usize,
    /// Swapping classes of maximal processes.
    pub maximal_bd_count: usize,
    /// Unknown when some run was cut off; the counts are then lower bounds.
    pub completeness: Verdict<Infallible>,
    /// Sorted by canonical form.
    pub per_class: Vec<MaximalClass>,
    /// The maximal processes, sorted by canonical form.
    pub maximal_processes: Vec<GrProcess>,
    pub processes_explored: usize,
}

/// Enumerates all finite processes level by level (one event per level, all
/// choices of consumed conditions, deduplicated up to isomorphism) and
/// collects the maximal ones.
pub fn enumerate_maximal(net: &Net, bounds: &Bounds, engine: &mut BdEngine) -> MaximalityReport {
    let mut hit: Option<BoundHit> = None;
    let mut maximal: Vec<GrProcess> = Vec::new();
    let mut level = alloc::vec![GrProcess::initial(net)];
    let mut explored = 1usize;
    let mut depth = 0;
    'levels: while !level.is_empty() {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for p in &level {
            let marking = p.cut().marking;
            if let Some((&place, tokens)) = marking.iter().find(|&(_, k)| k > bounds.max_tokens_per_place) {
                hit.get_or_insert(BoundHit::TokensPerPlace { place, tokens, limit: bounds.max_tokens_per_place });
                continue;
            }
            let enabled = net.enabled_transitions(&marking);
            if enabled.is_empty() {
                maximal.push(p.clone());
                continue;
            }
            if depth >= bounds.max_seq_len {
                hit.get_or_insert(BoundHit::SequenceLength(depth));
                continue;
            }
            for t in enabled {
                for q in p.all_extensions(net, t) {
                    if seen.insert(canonical_form(&q)) {
                        if explored >= bounds.max_states {
                            hit.get_or_insert(BoundHit::States(bounds.max_states));
                            break 'levels;
                        }
                        explored += 1;
                        next.push(q);
                    }
                }
            }
        }
        level = next;
        depth += 1;
    }

    let mut per_class: Vec<MaximalClass> = Vec::new();
    for p in &maximal {
        let class = match engine.classify(p) {
            Ok(c) => c,
            Err(_) => {
                hit.get_or_insert(BoundHit::ClassBudget(engine.budget()));
                continue;
            }
        };
        match per_class.iter_mut().find(|m| m.class == class) {
            Some(m) => m.gr_members += 1,
            None => {
                let example = class.representative().linearize();
                per_class.push(MaximalClass { class, example, gr_members: 1 });
            }
        }
    }
    per_class.sort_by(|a, b| a.class.cmp(&b.class));
    maximal.sort_by_cached_key(canonical_form);
    MaximalityReport {
        maximal_gr_count: maximal.len(),
        maximal_bd_count: per_class.len(),
        completeness: Verdict::from_bound(hit),
        per_class,
        maximal_processes: maximal,
        processes_explored: explored,
    }
}

/// The net's behaviour terminates within `bounds`.
fn closes(net: &Net, bounds: &Bounds) -> Option<BoundHit> {
    explore(net, bounds).verdict.bound_hit().copied()
}

/// Some member of `class` is a maximal process. Fails with a transition
/// enabled at every member's cut.
pub fn weakly_maximal(net: &Net, class: &BdClass, bounds: &Bounds, engine: &mut BdEngine) -> Verdict<TransitionId> {
    if let Some(hit) = closes(net, bounds) {
        return Verdict::Unknown(hit);
    }
    let Ok(members) = engine.members(class) else {
        return Verdict::Unknown(BoundHit::ClassBudget(engine.budget()));
    };
    let mut common: Option<BTreeSet<TransitionId>> = None;
    for m in &members {
        let enabled: BTreeSet<TransitionId> = net.enabled_transitions(&m.cut().marking).into_iter().collect();
        if enabled.is_empty() {
            return Verdict::Holds;
        }
        common = Some(match common {
            None => enabled,
            Some(c) => c.intersection(&enabled).copied().collect(),
        });
    }
    let t = common.and_then(|c| c.first().copied()).expect("cuts of one class share their marking");
    Verdict::Fails(t)
}

/// No member of `class` has a proper extension. Fails with a member (as a
/// firing sequence) and a transition extending it.
pub fn bd_maximal(net: &Net, class: &BdClass, bounds: &Bounds, engine: &mut BdEngine) -> Verdict<(Sequence, TransitionId)> {
    if let Some(hit) = closes(net, bounds) {
        return Verdict::Unknown(hit);
    }
    let Ok(members) = engine.members(class) else {
        return Verdict::Unknown(BoundHit::ClassBudget(engine.budget()));
    };
    for m in &members {
        if let Some(&t) = net.enabled_transitions(&m.cut().marking).first() {
            return Verdict::Fails((m.linearize(), t));
        }
    }
    Verdict::Holds
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorollaryOutcome {
    /// Conflict-free iff exactly one maximal class.
    Agrees,
    /// The biconditional failed on a structural conflict net.
    Disagrees,
    /// The net is not a structural conflict net; nothing is claimed.
    NotStructural,
    /// Some check did not close.
    Incomplete(BoundHit),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorollaryReport {
    pub structural: ConflictReport,
    pub conflict_free: ConflictReport,
    pub binary_conflict_free: ConflictReport,
    pub maximality: MaximalityReport,
    pub outcome: CorollaryOutcome,
}

/// On structural conflict nets: conflict-free iff exactly one maximal
/// swapping class.
pub fn corollary_check(net: &Net, bounds: &Bounds, engine: &mut BdEngine) -> CorollaryReport {
    let ex = explore(net, bounds);
    let structural = structural_over(net, &ex);
    let conflict_free = conflict_freeness_over(net, &ex, ConflictMode::General);
    let binary_conflict_free = conflict_freeness_over(net, &ex, ConflictMode::Binary);
    let maximality = enumerate_maximal(net, bounds, engine);
    let outcome = if structural.verdict.fails() {
        CorollaryOutcome::NotStructural
    } else if let Some(&hit) = structural
        .verdict
        .bound_hit()
        .or(conflict_free.verdict.bound_hit())
        .or(maximality.completeness.bound_hit())
    {
        CorollaryOutcome::Incomplete(hit)
    } else if conflict_free.verdict.holds() == (maximality.maximal_bd_count == 1) {
        CorollaryOutcome::Agrees
    } else {
        CorollaryOutcome::Disagrees
    };
    CorollaryReport { structural, conflict_free, binary_conflict_free, maximality, outcome }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conflict::tests::{fig4, remark};
    use crate::process::tests::{arb_net, fig1, fig2};
    use crate::process::Policy;
    use crate::NetBuilder;
    use proptest::prelude::*;

    fn fig5() -> Net {
        let mut b = NetBuilder::new("fig5");
        b.place("1", 1).unwrap().place("2", 2).unwrap().place("3", 1).unwrap().place("4", 1).unwrap();
        for t in ["a", "b", "c"] {
            b.transition(t).unwrap();
        }
        for (t, ps) in [("a", ["1", "2"]), ("b", ["2", "3"])] {
            for p in ps {
                b.arc(p, t, 1).unwrap().arc(t, p, 1).unwrap();
            }
        }
        b.arc("2", "c", 1).unwrap().arc("4", "c", 1).unwrap();
        b.build().unwrap()
    }

    fn class_of(net: &Net, s: &str, engine: &mut BdEngine) -> BdClass {
        engine.classify(&crate::process::tests::proc(net, s, Policy::Fifo)).unwrap()
    }

    #[test]
    fn fig1_has_two_maximal_processes_in_one_class() {
        let mut e = BdEngine::default();
        let r = enumerate_maximal(&fig1(), &Bounds::default(), &mut e);
        assert_eq!((r.maximal_gr_count, r.maximal_bd_count), (2, 1));
        assert!(r.completeness.holds());
        assert_eq!(r.per_class[0].gr_members, 2);
        assert_eq!(r.per_class[0].class.member_count_explored(), 2);
    }

    #[test]
    fn fig2_has_one_maximal_class() {
        let mut e = BdEngine::default();
        let r = enumerate_maximal(&fig2(), &Bounds::default(), &mut e);
        assert_eq!(r.maximal_bd_count, 1);
        assert!(r.completeness.holds());
        assert!(r.maximal_gr_count > 1);
    }

    #[test]
    fn remark_net_has_two_maximal_classes() {
        let mut e = BdEngine::default();
        let r = enumerate_maximal(&remark(), &Bounds::default(), &mut e);
        assert_eq!((r.maximal_gr_count, r.maximal_bd_count), (2, 2));
    }

    #[test]
    fn non_terminating_nets_are_unknown() {
        let b = Bounds::default().with_seq_len(6);
        for net in [fig4(), fig5()] {
            let mut e = BdEngine::default();
            let r = enumerate_maximal(&net, &b, &mut e);
            assert_eq!(r.completeness.bound_hit(), Some(&BoundHit::SequenceLength(6)));
            let c = class_of(&net, "a", &mut e);
            assert!(weakly_maximal(&net, &c, &b, &mut e).is_unknown());
            assert!(bd_maximal(&net, &c, &b, &mut e).is_unknown());
            assert!(matches!(corollary_check(&net, &b, &mut e).outcome, CorollaryOutcome::NotStructural | CorollaryOutcome::Incomplete(_)));
        }
        // c can fire once in Fig. 5 and then never again; the rest loops
        let mut e = BdEngine::default();
        let r = enumerate_maximal(&fig5(), &b, &mut e);
        assert_eq!(r.maximal_gr_count, 0);
    }

    #[test]
    fn maximality_notions_on_figures() {
        let b = Bounds::default();
        let n1 = fig1();
        let mut e = BdEngine::default();
        let top = class_of(&n1, "a b c", &mut e);
        assert!(weakly_maximal(&n1, &top, &b, &mut e).holds());
        assert!(bd_maximal(&n1, &top, &b, &mut e).holds());
        let a = class_of(&n1, "a", &mut e);
        assert_eq!(weakly_maximal(&n1, &a, &b, &mut e).witness(), n1.transition_id("b").as_ref());
        let ab = class_of(&n1, "a b", &mut e);
        assert_eq!(bd_maximal(&n1, &ab, &b, &mut e).witness().map(|w| w.1), n1.transition_id("c"));

        let n2 = fig2();
        let ab2 = class_of(&n2, "a b", &mut e);
        assert_eq!(weakly_maximal(&n2, &ab2, &b, &mut e).witness(), n2.transition_id("d").as_ref());
    }

    #[test]
    fn corollary_on_figures() {
        let b = Bounds::default();
        let mut e = BdEngine::default();
        let r1 = corollary_check(&fig1(), &b, &mut e);
        assert_eq!(r1.outcome, CorollaryOutcome::Agrees);
        assert!(r1.conflict_free.verdict.holds());
        let r2 = corollary_check(&fig2(), &b, &mut e);
        assert_eq!(r2.outcome, CorollaryOutcome::NotStructural);
        assert!(r2.conflict_free.verdict.fails());
        assert_eq!(r2.maximality.maximal_bd_count, 1);
        let r3 = corollary_check(&remark(), &b, &mut e);
        assert_eq!(r3.outcome, CorollaryOutcome::Agrees);
        assert!(r3.binary_conflict_free.verdict.fails());
        assert_eq!(r3.maximality.maximal_bd_count, 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn hierarchy_and_corollary_on_random_nets(net in arb_net()) {
            let b = Bounds { max_seq_len: 6, max_states: 5_000, ..Bounds::default() };
            let mut e = BdEngine::default();
            let report = corollary_check(&net, &b, &mut e);
            let m = &report.maximality;
            prop_assert!(m.maximal_bd_count <= m.maximal_gr_count);
            prop_assume!(m.completeness.holds());
            for c in &m.per_class {
                let bd = bd_maximal(&net, &c.class, &b, &mut e);
                prop_assert!(bd.holds());
                prop_assert!(weakly_maximal(&net, &c.class, &b, &mut e).holds());
            }
            prop_assert_ne!(report.outcome, CorollaryOutcome::Disagrees);
            if report.structural.verdict.holds() {
                if m.maximal_bd_count == 1 {
                    prop_assert!(report.conflict_free.verdict.holds());
                }
                if report.conflict_free.verdict.holds() {
                    prop_assert_eq!(m.maximal_bd_count, 1);
                }
            }
            if report.binary_conflict_free.verdict.holds() {
                prop_assert_eq!(m.maximal_bd_count, 1);
            }
        }
    }
}
