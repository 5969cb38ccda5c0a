//! Adjacency of firing sequences, trace classes, and the finite-level
//! correspondence between trace classes and swapping-equivalence classes.
//!
//! Two firing sequences are adjacent when they differ by exchanging two
//! neighbouring transitions that are jointly enabled as a step at that point.
//! Whether an exchange is allowed depends on the marking, so classes are
//! materialised explicitly rather than via a static independence relation.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;
use core::fmt;

use crate::net::{explore, Exploration, FireError, Marking, Net, SequenceTree};
use crate::process::{GrProcess, Policy};
use crate::swapping::{BdClass, BdEngine, SwapError};
use crate::unionfind::UnionFind;
use crate::verdict::{BoundHit, Verdict};
use crate::{Bounds, Sequence, Step, TransitionId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceError {
    Fire(FireError),
    /// The class has more members than the budget allows.
    BudgetExceeded(usize),
}

impl fmt::Display for TraceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceError::Fire(e) => write!(f, "{e}"),
            TraceError::BudgetExceeded(n) => write!(f, "trace class budget exceeded ({n} sequences)"),
        }
    }
}

impl core::error::Error for TraceError {}

impl From<FireError> for TraceError {
    fn from(e: FireError) -> Self {
        TraceError::Fire(e)
    }
}

/// Markings along `sequence`: `out[i]` is the marking after `sequence[..i]`.
fn markings_along(net: &Net, sequence: &[TransitionId]) -> Result<Vec<Marking>, FireError> {
    let mut out = Vec::with_capacity(sequence.len() + 1);
    let mut m = net.initial_marking().clone();
    for (position, &t) in sequence.iter().enumerate() {
        let next = net.fire(&m, t).map_err(|e| match e {
            FireError::NotEnabled { deficit } => FireError::NotAFiringSequence { position, transition: t, deficit },
            other => other,
        })?;
        out.push(core::mem::replace(&mut m, next));
    }
    out.push(m);
    Ok(out)
}

fn pair_enabled(net: &Net, m: &Marking, t: TransitionId, u: TransitionId) -> bool {
    net.is_enabled(m, &[t, u].into_iter().collect::<Step>())
}

/// Adjacency: `rho` is `sigma` with one neighbouring pair `t u` exchanged,
/// and `{t, u}` is enabled as a step where the pair starts.
pub fn adjacent(net: &Net, sigma: &[TransitionId], rho: &[TransitionId]) -> Result<bool, FireError> {
    let ms = markings_along(net, sigma)?;
    markings_along(net, rho)?;
    if sigma.len() != rho.len() {
        return Ok(false);
    }
    let diff: Vec<usize> = (0..sigma.len()).filter(|&i| sigma[i] != rho[i]).collect();
    Ok(match diff[..] {
        [i, j] if j == i + 1 && sigma[i] == rho[j] && sigma[j] == rho[i] => pair_enabled(net, &ms[i], sigma[i], sigma[j]),
        _ => false,
    })
}

/// Sequences adjacent to `sigma`, given the markings along it.
fn neighbours(net: &Net, sigma: &[TransitionId], ms: &[Marking]) -> Vec<Sequence> {
    let mut out = Vec::new();
    for i in 0..sigma.len().saturating_sub(1) {
        let (t, u) = (sigma[i], sigma[i + 1]);
        if t != u && pair_enabled(net, &ms[i], t, u) {
            let mut rho = sigma.to_vec();
            rho.swap(i, i + 1);
            out.push(rho);
        }
    }
    out
}

/// `[σ]`: an equivalence class of firing sequences under adjacency.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TraceClass {
    members: BTreeSet<Sequence>,
    transition_multiset: Step,
}

impl TraceClass {
    /// Members in ascending (lexicographic) order.
    pub fn members(&self) -> impl Iterator<Item = &Sequence> + '_ {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, sequence: &[TransitionId]) -> bool {
        self.members.contains(sequence)
    }

    /// The lexicographically least member.
    pub fn canonical_member(&self) -> &Sequence {
        self.members.first().expect("classes are non-empty")
    }

    pub fn transition_multiset(&self) -> &Step {
        &self.transition_multiset
    }

    pub fn sequence_len(&self) -> usize {
        self.canonical_member().len()
    }
}

/// Breadth-first closure of `sigma` under adjacency.
pub fn trace_class(net: &Net, sigma: &[TransitionId], budget: usize) -> Result<TraceClass, TraceError> {
    markings_along(net, sigma)?;
    let mut members = BTreeSet::new();
    let mut queue = VecDeque::new();
    members.insert(sigma.to_vec());
    queue.push_back(sigma.to_vec());
    while let Some(s) = queue.pop_front() {
        let ms = markings_along(net, &s)?;
        for rho in neighbours(net, &s, &ms) {
            if !members.contains(&rho) {
                if members.len() >= budget {
                    return Err(TraceError::BudgetExceeded(budget));
                }
                members.insert(rho.clone());
                queue.push_back(rho);
            }
        }
    }
    Ok(TraceClass { members, transition_multiset: sigma.iter().copied().collect() })
}

/// `[σ] ≤ [ρ]`: some member of `larger` has a member of `smaller` as prefix.
pub fn trace_leq(smaller: &TraceClass, larger: &TraceClass) -> bool {
    let k = smaller.sequence_len();
    if k > larger.sequence_len() || !smaller.transition_multiset.leq(&larger.transition_multiset) {
        return false;
    }
    larger.members().any(|m| smaller.contains(&m[..k]))
}

/// Whether some member of `[rho]` starts with `sigma`, searched breadth-first
/// from `rho` and stopping at the first hit.
fn class_has_prefix(net: &Net, rho: &[TransitionId], sigma: &[TransitionId], budget: usize) -> Result<bool, TraceError> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(rho.to_vec());
    queue.push_back(rho.to_vec());
    while let Some(s) = queue.pop_front() {
        if s.starts_with(sigma) {
            return Ok(true);
        }
        let ms = markings_along(net, &s)?;
        for n in neighbours(net, &s, &ms) {
            if !seen.contains(&n) {
                if seen.len() >= budget {
                    return Err(TraceError::BudgetExceeded(budget));
                }
                seen.insert(n.clone());
                queue.push_back(n);
            }
        }
    }
    Ok(false)
}

/// Unions every pair of explored sequences that are adjacent.
fn trace_partition(tree: &SequenceTree, ex: &Exploration, net: &Net) -> UnionFind {
    let mut uf = UnionFind::new(tree.len());
    for (x, node) in tree.nodes() {
        let m = ex.marking_of(x);
        for &(t, xt) in &node.children {
            for &(u, xtu) in &tree.node(xt).children {
                if t >= u || !pair_enabled(net, m, t, u) {
                    continue;
                }
                let Some(xut) = tree.child(x, u).and_then(|xu| tree.child(xu, t)) else {
                    continue;
                };
                join_subtrees(tree, &mut uf, xtu, xut);
            }
        }
    }
    uf
}

/// Unions `a·σ2` with `b·σ2` for every common continuation `σ2`.
fn join_subtrees(tree: &SequenceTree, uf: &mut UnionFind, a: usize, b: usize) {
    let mut stack = alloc::vec![(a, b)];
    while let Some((a, b)) = stack.pop() {
        uf.union(a, b);
        for &(t, ac) in &tree.node(a).children {
            if let Some(bc) = tree.child(b, t) {
                stack.push((ac, bc));
            }
        }
    }
}

/// How the two sides of the correspondence disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mismatch {
    /// `trace_equivalent` and `bd_equal` should agree.
    Equivalence { sigma: Sequence, rho: Sequence, trace_equivalent: bool, bd_equal: bool },
    /// `trace_leq` and `bd_leq` should agree.
    Order { sigma: Sequence, rho: Sequence, trace_leq: bool, bd_leq: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub max_len: usize,
    pub sequences: usize,
    pub trace_classes: usize,
    pub bd_classes: usize,
    /// Trace classes with no strictly larger class among the explored ones.
    pub maximal_trace_classes: usize,
    pub verdict: Verdict<Mismatch>,
}

/// Checks, for all firing sequences of length at most `max_len`, that trace
/// equivalence coincides with equality of the swapping classes of their
/// processes, and that the two prefix orders agree.
///
/// Only `max_tokens_per_place`, `max_states` and `class_budget` are taken
/// from `bounds`. A hit on either of the first two leaves coverage
/// incomplete and the verdict unknown unless a mismatch was found.
pub fn correspondence_check(net: &Net, max_len: usize, bounds: &Bounds) -> Result<CorrespondenceReport, SwapError> {
    let ex = explore(net, &bounds.with_seq_len(max_len));
    let tree = &ex.tree;
    let mut uf = trace_partition(tree, &ex, net);
    let mut engine = BdEngine::new(bounds.class_budget);

    // BD class of every node, via its parent's process and each extension choice
    // (fifo, as any policy yields the same class).
    let mut procs: Vec<Option<GrProcess>> = alloc::vec![None; tree.len()];
    let mut bd: Vec<BdClass> = Vec::with_capacity(tree.len());
    let mut class_ids: BTreeMap<BdClass, usize> = BTreeMap::new();
    let mut bd_of_node: Vec<usize> = alloc::vec![0; tree.len()];
    for (id, node) in tree.nodes() {
        let p = match node.parent {
            None => GrProcess::initial(net),
            Some(parent) => procs[parent].as_ref().expect("parents come first").extend(net, node.last.expect("non-root"), Policy::Fifo).expect("firing sequence"),
        };
        let class = engine.classify(&p)?;
        let next = class_ids.len();
        let cid = *class_ids.entry(class.clone()).or_insert_with(|| {
            bd.push(class);
            next
        });
        bd_of_node[id] = cid;
        procs[id] = Some(p);
    }

    let roots: Vec<usize> = (0..tree.len()).map(|i| uf.find(i)).collect();
    let mut mismatch = None;

    // equivalence: the partition by trace class and by BD class must coincide
    let mut bd_by_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut root_by_bd: BTreeMap<usize, usize> = BTreeMap::new();
    for id in 0..tree.len() {
        let (r, c) = (roots[id], bd_of_node[id]);
        if let Some(&c2) = bd_by_root.get(&r) {
            if c2 != c && mismatch.is_none() {
                let other = (0..id).find(|&j| roots[j] == r && bd_of_node[j] == c2).expect("recorded");
                mismatch = Some(Mismatch::Equivalence {
                    sigma: tree.sequence(other),
                    rho: tree.sequence(id),
                    trace_equivalent: true,
                    bd_equal: false,
                });
            }
        } else {
            bd_by_root.insert(r, c);
        }
        if let Some(&r2) = root_by_bd.get(&c) {
            if r2 != r && mismatch.is_none() {
                let other = (0..id).find(|&j| roots[j] == r2 && bd_of_node[j] == c).expect("recorded");
                mismatch = Some(Mismatch::Equivalence {
                    sigma: tree.sequence(other),
                    rho: tree.sequence(id),
                    trace_equivalent: false,
                    bd_equal: true,
                });
            }
        } else {
            root_by_bd.insert(c, r);
        }
    }

    // order: [σ] ≤ [ρ] iff σ' ≤ ρ' for some members, i.e. the class of some
    // prefix of some member of [ρ]
    let mut below: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for id in 0..tree.len() {
        let mut set = BTreeSet::new();
        let mut cur = Some(id);
        while let Some(c) = cur {
            set.insert(roots[c]);
            cur = tree.node(c).parent;
        }
        below.entry(roots[id]).or_default().extend(set);
    }
    let class_roots: Vec<usize> = bd_by_root.keys().copied().collect();
    let representative: BTreeMap<usize, usize> =
        (0..tree.len()).rev().map(|id| (roots[id], id)).collect();
    let mut maximal = 0;
    if mismatch.is_none() {
        for &a in &class_roots {
            let mut has_larger = false;
            for &b in &class_roots {
                let t_leq = below[&b].contains(&a);
                let b_leq = engine.leq(&bd[bd_by_root[&a]], &bd[bd_by_root[&b]])?;
                if t_leq != b_leq {
                    mismatch = Some(Mismatch::Order {
                        sigma: tree.sequence(representative[&a]),
                        rho: tree.sequence(representative[&b]),
                        trace_leq: t_leq,
                        bd_leq: b_leq,
                    });
                    break;
                }
                has_larger |= t_leq && a != b;
            }
            if mismatch.is_some() {
                break;
            }
            if !has_larger {
                maximal += 1;
            }
        }
    }

    let bound = match ex.verdict.bound_hit() {
        Some(BoundHit::SequenceLength(_)) | None => None,
        Some(other) => Some(*other),
    };
    let verdict = match (mismatch, bound) {
        (Some(m), _) => Verdict::Fails(m),
        (None, Some(b)) => Verdict::Unknown(b),
        (None, None) => Verdict::Holds,
    };
    Ok(CorrespondenceReport {
        max_len,
        sequences: tree.len(),
        trace_classes: class_roots.len(),
        bd_classes: bd.len(),
        maximal_trace_classes: maximal,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectednessReport {
    pub max_len: usize,
    /// Pairs of trace classes for which a join was searched.
    pub pairs_checked: usize,
    /// Fails with two sequences that have no common extension.
    pub verdict: Verdict<(Sequence, Sequence)>,
}

/// For every pair of firing sequences of length at most `max_len`, searches
/// extensions `μ, μ'` with `σμ ↔* σ'μ'` and `|σμ| ≤ bounds.max_seq_len`.
///
/// Fails only when one side's extensions are exhausted without a join.
pub fn directedness_check(net: &Net, max_len: usize, bounds: &Bounds) -> DirectednessReport {
    let ex = explore(net, &bounds.with_seq_len(max_len));
    let tree = &ex.tree;
    let mut uf = trace_partition(tree, &ex, net);
    let mut hit = match ex.verdict.bound_hit() {
        Some(BoundHit::SequenceLength(_)) | None => None,
        Some(other) => Some(*other),
    };

    // A join of a pair is also a join of their prefixes, so only sequences
    // without explored extensions need pairing, one per trace class.
    let mut leaves: BTreeMap<usize, usize> = BTreeMap::new();
    for (id, node) in tree.nodes() {
        if node.children.is_empty() {
            leaves.entry(uf.find(id)).or_insert(id);
        }
    }
    let leaves: Vec<Sequence> = leaves.values().map(|&id| tree.sequence(id)).collect();
    let mut search = JoinSearch { net, limit: bounds.max_seq_len.max(max_len), budget: bounds.trace_budget };
    let mut pairs = 0;
    for (i, a) in leaves.iter().enumerate() {
        for b in &leaves[i + 1..] {
            pairs += 1;
            match search.joinable(a, b) {
                Ok(Some(true)) => {}
                Ok(Some(false)) => {
                    return DirectednessReport { max_len, pairs_checked: pairs, verdict: Verdict::Fails((a.clone(), b.clone())) }
                }
                Ok(None) => {
                    hit.get_or_insert(BoundHit::SequenceLength(search.limit));
                }
                Err(_) => {
                    hit.get_or_insert(BoundHit::ClassBudget(search.budget));
                }
            }
        }
    }
    DirectednessReport { max_len, pairs_checked: pairs, verdict: Verdict::from_bound(hit) }
}

struct JoinSearch<'a> {
    net: &'a Net,
    limit: usize,
    budget: usize,
}

impl JoinSearch<'_> {
    /// `Some(true)` if joined, `Some(false)` if provably not, `None` if the
    /// length limit cut the search short.
    fn joinable(&mut self, a: &[TransitionId], b: &[TransitionId]) -> Result<Option<bool>, TraceError> {
        let ma: Step = a.iter().copied().collect();
        let mb: Step = b.iter().copied().collect();
        let target = ma.union(&mb);
        let start = target.cardinality() as usize;
        // any join contains both multisets; look for the shortest
        for k in start..=self.limit {
            let mut found = false;
            let mut candidates = Vec::new();
            self.extensions(b, &target, k, &mut candidates);
            for rho in candidates {
                if class_has_prefix(self.net, &rho, a, self.budget)? {
                    found = true;
                    break;
                }
            }
            if found {
                return Ok(Some(true));
            }
        }
        if !self.reaches_limit(a) || !self.reaches_limit(b) {
            Ok(Some(false))
        } else {
            Ok(None)
        }
    }

    /// Extensions of `prefix` of length exactly `k` containing `target`.
    fn extensions(&self, prefix: &[TransitionId], target: &Step, k: usize, out: &mut Vec<Sequence>) {
        let m = self.net.fire_sequence(prefix).expect("firing sequence");
        let have: Step = prefix.iter().copied().collect();
        let mut seq = prefix.to_vec();
        self.extend(&mut seq, &m, &have, target, k, out);
    }

    fn extend(&self, seq: &mut Sequence, m: &Marking, have: &Step, target: &Step, k: usize, out: &mut Vec<Sequence>) {
        let missing = target.monus(have).cardinality() as usize;
        if missing > k - seq.len() {
            return;
        }
        if seq.len() == k {
            out.push(seq.clone());
            return;
        }
        for t in self.net.enabled_transitions(m) {
            let next = self.net.fire(m, t).expect("enabled");
            let mut h = have.clone();
            h.insert(t, 1).expect("small counts");
            seq.push(t);
            self.extend(seq, &next, &h, target, k, out);
            seq.pop();
        }
    }

    /// Whether some extension of `prefix` reaches the length limit.
    fn reaches_limit(&self, prefix: &[TransitionId]) -> bool {
        fn go(net: &Net, m: &Marking, len: usize, limit: usize) -> bool {
            if len >= limit {
                return true;
            }
            net.enabled_transitions(m).into_iter().any(|t| go(net, &net.fire(m, t).expect("enabled"), len + 1, limit))
        }
        go(self.net, &self.net.fire_sequence(prefix).expect("firing sequence"), prefix.len(), self.limit)
    }
}
