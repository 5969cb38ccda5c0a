//! The swap transformation, isomorphism of processes, and classes of
//! finite processes under swapping equivalence.
//!
//! # Canonical forms
//!
//! Up to isomorphism a finite process is determined by the labels of its
//! events together with the multiset of condition triples
//! `(place, pre-event, post-event)`; conditions with equal triples are
//! interchangeable. A canonical labelling orders the events by iterated
//! partition refinement on (transition label, labelled neighbourhood), then
//! individualises the remaining ties one event at a time and keeps the
//! lexicographically least encoding over all leaves. Branches that differ by
//! an event transposition which is an automorphism are skipped.
//!
//! The encoding (format version 1) is, with every integer a big-endian `u32`:
//!
//! ```text
//! 0x01
//! n                               number of events
//! label[0] .. label[n-1]          transition index of each event, canonical order
//! m                               number of conditions
//! (place, pre, post) × m          ascending; pre/post are 0 for none,
//!                                 otherwise canonical event index + 1
//! ```
//!
//! Two processes of the same net are isomorphic iff their encodings are
//! equal. A swapping-equivalence class is represented by the least encoding
//! over the (exhaustively explored) closure of a member under swaps.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use hashbrown::HashSet;

use crate::bitset::BitSet;
use crate::net::{PlaceId, TransitionId};
use crate::process::{Condition, ConditionId, Event, EventId, GrProcess};
use crate::Step;

/// Version byte leading every canonical form.
pub const CANONICAL_FORM_VERSION: u8 = 1;

const NONE: u32 = 0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SwapError {
    UnknownCondition(ConditionId),
    SameCondition,
    NotSamePlace,
    CausallyOrdered,
    /// The closure produced more distinct processes than the budget allows.
    ClassBudgetExceeded(usize),
    MalformedCanonicalForm,
}

impl fmt::Display for SwapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SwapError::UnknownCondition(c) => write!(f, "unknown condition c{}", c.0),
            SwapError::SameCondition => f.write_str("cannot swap a condition with itself"),
            SwapError::NotSamePlace => f.write_str("not same place"),
            SwapError::CausallyOrdered => f.write_str("causally ordered conditions"),
            SwapError::ClassBudgetExceeded(n) => write!(f, "class budget exceeded ({n} processes)"),
            SwapError::MalformedCanonicalForm => f.write_str("malformed canonical form"),
        }
    }
}

impl core::error::Error for SwapError {}

/// `swap(P, p, q)`: exchanges the post-events of two concurrent conditions
/// on the same place.
pub fn swap(process: &GrProcess, p: ConditionId, q: ConditionId) -> Result<GrProcess, SwapError> {
    let cp = *process.condition(p).ok_or(SwapError::UnknownCondition(p))?;
    let cq = *process.condition(q).ok_or(SwapError::UnknownCondition(q))?;
    if p == q {
        return Err(SwapError::SameCondition);
    }
    if cp.place != cq.place {
        return Err(SwapError::NotSamePlace);
    }
    if !process.causality().concurrent(process, p, q) {
        return Err(SwapError::CausallyOrdered);
    }
    let conditions = process
        .conditions()
        .map(|(id, c)| {
            let post = if id == p {
                cq.post
            } else if id == q {
                cp.post
            } else {
                c.post
            };
            (id, Condition { post, ..*c })
        })
        .collect();
    let events = process.events().map(|(id, e)| (id, *e)).collect();
    Ok(GrProcess::from_parts_unchecked(conditions, events))
}

/// Pairs of conditions on which [`swap`] is defined and changes the flow.
pub fn legal_swaps(process: &GrProcess) -> Vec<(ConditionId, ConditionId)> {
    let cz = process.causality();
    let conds: Vec<(ConditionId, &Condition)> = process.conditions().collect();
    let mut out = Vec::new();
    for (i, &(p, cp)) in conds.iter().enumerate() {
        for &(q, cq) in &conds[i + 1..] {
            if cp.place == cq.place && cp.post != cq.post && cz.concurrent(process, p, q) {
                out.push((p, q));
            }
        }
    }
    out
}

/// Isomorphism respecting the folding map.
pub fn isomorphic(a: &GrProcess, b: &GrProcess) -> bool {
    canonical_form(a) == canonical_form(b)
}

/// Canonical encoding of the isomorphism class of `process`.
pub fn canonical_form(process: &GrProcess) -> Vec<u8> {
    Skeleton::from_process(process).canonical_form()
}

/// Condition triple with events numbered from 1 (0 means none).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Cond {
    pub place: u32,
    pub pre: u32,
    pub post: u32,
}

/// Id-free form of a process: event labels plus the sorted multiset of
/// condition triples.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Skeleton {
    pub events: Vec<TransitionId>,
    pub conds: Vec<Cond>,
}

impl Skeleton {
    pub fn from_process(p: &GrProcess) -> Self {
        let index: BTreeMap<EventId, u32> = p.events().enumerate().map(|(i, (e, _))| (e, i as u32 + 1)).collect();
        let events = p.events().map(|(_, e)| e.transition).collect();
        let opt = |e: Option<EventId>| e.map_or(NONE, |e| index[&e]);
        let mut conds: Vec<Cond> =
            p.conditions().map(|(_, c)| Cond { place: c.place.0, pre: opt(c.pre), post: opt(c.post) }).collect();
        conds.sort_unstable();
        Self { events, conds }
    }

    pub fn to_process(&self) -> GrProcess {
        let ev = |x: u32| (x != NONE).then(|| EventId(x - 1));
        let conditions = self
            .conds
            .iter()
            .enumerate()
            .map(|(i, c)| (ConditionId(i as u32), Condition { place: PlaceId(c.place), pre: ev(c.pre), post: ev(c.post) }))
            .collect();
        let events =
            self.events.iter().enumerate().map(|(i, &transition)| (EventId(i as u32), Event { transition })).collect();
        GrProcess::from_parts_unchecked(conditions, events)
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, SwapError> {
        let mut words = Words { bytes, at: 0 };
        if bytes.first() != Some(&CANONICAL_FORM_VERSION) {
            return Err(SwapError::MalformedCanonicalForm);
        }
        words.at = 1;
        let n = words.next()? as usize;
        let events = (0..n).map(|_| words.next().map(TransitionId)).collect::<Result<Vec<_>, _>>()?;
        let m = words.next()? as usize;
        let mut conds = Vec::with_capacity(m);
        for _ in 0..m {
            let c = Cond { place: words.next()?, pre: words.next()?, post: words.next()? };
            if c.pre as usize > n || c.post as usize > n {
                return Err(SwapError::MalformedCanonicalForm);
            }
            conds.push(c);
        }
        if words.at != bytes.len() {
            return Err(SwapError::MalformedCanonicalForm);
        }
        Ok(Self { events, conds })
    }

    pub fn transition_multiset(&self) -> Step {
        self.events.iter().copied().collect()
    }

    /// `before[e]` holds the strict causal predecessors of event `e`.
    fn causality(&self) -> Vec<BitSet> {
        let n = self.events.len();
        let mut preds: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
        for c in &self.conds {
            if c.pre != NONE && c.post != NONE {
                preds[c.post as usize - 1].push(c.pre as usize - 1);
            }
        }
        let mut before: Vec<Option<BitSet>> = alloc::vec![None; n];
        fn fill(v: usize, preds: &[Vec<usize>], before: &mut [Option<BitSet>], n: usize) {
            if before[v].is_some() {
                return;
            }
            let mut set = BitSet::new(n);
            for &u in &preds[v] {
                fill(u, preds, before, n);
                set.union_with(before[u].as_ref().expect("filled"));
                set.insert(u);
            }
            before[v] = Some(set);
        }
        for v in 0..n {
            fill(v, &preds, &mut before, n);
        }
        before.into_iter().map(|b| b.expect("filled")).collect()
    }

    /// The prefixes with one event fewer: each drops a causally maximal event.
    fn without_maximal_events(&self) -> Vec<Skeleton> {
        let n = self.events.len() as u32;
        let has_successor: BTreeSet<u32> =
            self.conds.iter().filter(|c| c.pre != NONE && c.post != NONE).map(|c| c.pre).collect();
        (1..=n)
            .filter(|e| !has_successor.contains(e))
            .map(|e| {
                let shift = |x: u32| if x != NONE && x > e { x - 1 } else { x };
                let mut conds: Vec<Cond> = self
                    .conds
                    .iter()
                    .filter(|c| c.pre != e)
                    .map(|c| Cond { place: c.place, pre: shift(c.pre), post: if c.post == e { NONE } else { shift(c.post) } })
                    .collect();
                conds.sort_unstable();
                let mut events = self.events.clone();
                events.remove(e as usize - 1);
                Skeleton { events, conds }
            })
            .collect()
    }

    /// All processes one legal swap away (duplicates possible).
    fn swap_neighbours(&self) -> Vec<Skeleton> {
        let before = self.causality();
        let precedes = |x: &Cond, y: &Cond| {
            x.post != NONE && y.pre != NONE && (x.post == y.pre || before[y.pre as usize - 1].contains(x.post as usize - 1))
        };
        let mut kinds: Vec<Cond> = self.conds.clone();
        kinds.dedup();
        let mut out = Vec::new();
        for (i, x) in kinds.iter().enumerate() {
            for y in &kinds[i + 1..] {
                // equal pre events make the exchange a no-op on the multiset
                if x.place != y.place || x.post == y.post || x.pre == y.pre || precedes(x, y) || precedes(y, x) {
                    continue;
                }
                let mut conds = self.conds.clone();
                let ix = conds.binary_search(x).expect("present");
                conds[ix].post = y.post;
                let iy = conds.binary_search(y).expect("present");
                conds[iy].post = x.post;
                conds.sort_unstable();
                out.push(Skeleton { events: self.events.clone(), conds });
            }
        }
        out
    }

    pub fn canonical_form(&self) -> Vec<u8> {
        let n = self.events.len();
        let nb = Neighbourhood::new(self);
        let mut labels: Vec<u32> = self.events.iter().map(|t| t.0).collect();
        labels.sort_unstable();
        labels.dedup();
        let colors: Vec<u32> =
            self.events.iter().map(|t| labels.binary_search(&t.0).expect("label") as u32).collect();
        let mut best: Option<Vec<u8>> = None;
        self.search(&nb, colors, n, &mut best);
        best.unwrap_or_else(|| self.encode(&[]))
    }

    fn search(&self, nb: &Neighbourhood, mut colors: Vec<u32>, n: usize, best: &mut Option<Vec<u8>>) {
        nb.refine(&mut colors);
        // colours are ranks 0..k after refinement; branch on the first shared one
        let mut sizes = alloc::vec![0usize; n];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let Some(shared) = sizes.iter().position(|&k| k > 1) else {
            let enc = self.encode(&colors);
            if best.as_ref().is_none_or(|b| enc < *b) {
                *best = Some(enc);
            }
            return;
        };
        let cell: Vec<usize> = (0..n).filter(|&e| colors[e] as usize == shared).collect();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cell {
            if tried.iter().any(|&w| self.transposition_is_automorphism(v, w)) {
                continue;
            }
            tried.push(v);
            let cv = colors[v];
            let mut next: Vec<u32> =
                colors.iter().enumerate().map(|(e, &c)| 2 * c + u32::from(c == cv && e != v)).collect();
            rerank(&mut next);
            self.search(nb, next, n, best);
        }
    }

    fn transposition_is_automorphism(&self, v: usize, w: usize) -> bool {
        let (v1, w1) = (v as u32 + 1, w as u32 + 1);
        let swap = |x: u32| {
            if x == v1 {
                w1
            } else if x == w1 {
                v1
            } else {
                x
            }
        };
        let mut mapped: Vec<Cond> =
            self.conds.iter().map(|c| Cond { place: c.place, pre: swap(c.pre), post: swap(c.post) }).collect();
        mapped.sort_unstable();
        mapped == self.conds
    }

    /// Encodes with event `e` at position `colors[e]`; `colors` must be a
    /// permutation of `0..n`.
    fn encode(&self, colors: &[u32]) -> Vec<u8> {
        let n = self.events.len();
        let mut labels = alloc::vec![0u32; n];
        for (e, &c) in colors.iter().enumerate() {
            labels[c as usize] = self.events[e].0;
        }
        let map = |x: u32| if x == NONE { NONE } else { colors[x as usize - 1] + 1 };
        let mut conds: Vec<Cond> =
            self.conds.iter().map(|c| Cond { place: c.place, pre: map(c.pre), post: map(c.post) }).collect();
        conds.sort_unstable();
        let mut out = Vec::with_capacity(1 + 4 * (2 + n + 3 * conds.len()));
        out.push(CANONICAL_FORM_VERSION);
        out.extend_from_slice(&(n as u32).to_be_bytes());
        for l in labels {
            out.extend_from_slice(&l.to_be_bytes());
        }
        out.extend_from_slice(&(conds.len() as u32).to_be_bytes());
        for c in conds {
            for x in [c.place, c.pre, c.post] {
                out.extend_from_slice(&x.to_be_bytes());
            }
        }
        out
    }
}

struct Words<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl Words<'_> {
    fn next(&mut self) -> Result<u32, SwapError> {
        let chunk = self.bytes.get(self.at..self.at + 4).ok_or(SwapError::MalformedCanonicalForm)?;
        self.at += 4;
        Ok(u32::from_be_bytes(chunk.try_into().expect("four bytes")))
    }
}

/// Labelled neighbourhood of every event, for refinement, stored flat:
/// event `e` owns `ins[in_at[e]..in_at[e + 1]]` and likewise for `outs`.
struct Neighbourhood {
    /// (place, producing event) of each consumed condition.
    ins: Vec<(u32, u32)>,
    in_at: Vec<usize>,
    /// (place, consuming event) of each produced condition.
    outs: Vec<(u32, u32)>,
    out_at: Vec<usize>,
}

impl Neighbourhood {
    fn new(sk: &Skeleton) -> Self {
        let n = sk.events.len();
        // counting sort of the condition endpoints by event
        let bucket = |key: fn(&Cond) -> (u32, u32)| {
            let mut at = alloc::vec![0usize; n + 1];
            for c in &sk.conds {
                let (e, _) = key(c);
                if e != NONE {
                    at[e as usize] += 1;
                }
            }
            for i in 0..n {
                at[i + 1] += at[i];
            }
            let mut next = at.clone();
            let mut flat = alloc::vec![(0, 0); at[n]];
            for c in &sk.conds {
                let (e, other) = key(c);
                if e != NONE {
                    let slot = &mut next[e as usize - 1];
                    flat[*slot] = (c.place, other);
                    *slot += 1;
                }
            }
            (flat, at)
        };
        let (ins, in_at) = bucket(|c| (c.post, c.pre));
        let (outs, out_at) = bucket(|c| (c.pre, c.post));
        Self { ins, in_at, outs, out_at }
    }

    /// Splits colour classes by the multiset of (place, neighbour colour)
    /// on each side until stable. New colours rank the signatures
    /// `(colour, sorted ins, sorted outs)`.
    fn refine(&self, colors: &mut [u32]) {
        let n = colors.len();
        let color_of = |x: u32, colors: &[u32]| if x == NONE { u32::MAX } else { colors[x as usize - 1] };
        let mut ins: Vec<(u32, u32)> = Vec::new();
        let mut outs: Vec<(u32, u32)> = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        let mut classes = distinct(colors);
        loop {
            fill(&self.ins, &self.in_at, colors, &mut ins, color_of);
            fill(&self.outs, &self.out_at, colors, &mut outs, color_of);
            let sig = |e: usize| {
                (colors[e], &ins[self.in_at[e]..self.in_at[e + 1]], &outs[self.out_at[e]..self.out_at[e + 1]])
            };
            order.sort_by(|&a, &b| sig(a).cmp(&sig(b)));
            let mut next = alloc::vec![0u32; n];
            let mut rank = 0;
            for w in 0..n {
                if w > 0 && sig(order[w - 1]) != sig(order[w]) {
                    rank += 1;
                }
                next[order[w]] = rank;
            }
            colors.copy_from_slice(&next);
            let now = rank as usize + 1;
            if now == classes {
                return;
            }
            classes = now;
        }
    }
}

/// Rewrites each event's (place, neighbour) list to (place, neighbour colour),
/// sorted per event.
fn fill(src: &[(u32, u32)], at: &[usize], colors: &[u32], dst: &mut Vec<(u32, u32)>, color_of: impl Fn(u32, &[u32]) -> u32) {
    dst.clear();
    dst.extend(src.iter().map(|&(p, x)| (p, color_of(x, colors))));
    for w in at.windows(2) {
        dst[w[0]..w[1]].sort_unstable();
    }
}

fn distinct(colors: &[u32]) -> usize {
    colors.iter().collect::<BTreeSet<_>>().len()
}

fn rerank(colors: &mut [u32]) {
    let mut values: Vec<u32> = colors.to_vec();
    values.sort_unstable();
    values.dedup();
    for c in colors.iter_mut() {
        *c = values.binary_search(c).expect("value") as u32;
    }
}

/// A finite BD-process: the class of a finite process under the reflexive
/// transitive closure of swapping (up to isomorphism).
///
/// Equality is swapping equivalence; the class is identified by the least
/// canonical form in its closure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BdClass {
    canonical_form: Vec<u8>,
    member_count: usize,
    transition_multiset: Step,
}

impl BdClass {
    /// Canonical form (see the module docs) of the class representative.
    pub fn canonical_form(&self) -> &[u8] {
        &self.canonical_form
    }

    /// Number of pairwise non-isomorphic processes in the class.
    pub fn member_count_explored(&self) -> usize {
        self.member_count
    }

    /// Multiset of transitions of every member.
    pub fn transition_multiset(&self) -> &Step {
        &self.transition_multiset
    }

    pub fn event_count(&self) -> u64 {
        self.transition_multiset.cardinality()
    }

    /// The distinguished member whose canonical form identifies the class.
    pub fn representative(&self) -> GrProcess {
        Skeleton::decode(&self.canonical_form).expect("canonical form produced by this crate").to_process()
    }
}

/// Computes swapping-equivalence classes, memoising closures across calls.
#[derive(Debug, Clone)]
pub struct BdEngine {
    budget: usize,
    /// Canonical form of any explored process to its class.
    memo: BTreeMap<Vec<u8>, Arc<BdClass>>,
    /// Representative form to the members of its class.
    members: BTreeMap<Vec<u8>, Arc<Vec<Skeleton>>>,
    /// Representative form to every class below it, itself included.
    below: BTreeMap<Vec<u8>, Arc<BTreeSet<BdClass>>>,
}

impl Default for BdEngine {
    fn default() -> Self {
        Self::new(crate::Bounds::default().class_budget)
    }
}

impl BdEngine {
    /// `budget` caps the number of non-isomorphic processes per class.
    pub fn new(budget: usize) -> Self {
        Self { budget, memo: BTreeMap::new(), members: BTreeMap::new(), below: BTreeMap::new() }
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// `[P]` for a finite process.
    pub fn classify(&mut self, process: &GrProcess) -> Result<BdClass, SwapError> {
        self.classify_skeleton(&Skeleton::from_process(process))
    }

    pub(crate) fn classify_skeleton(&mut self, sk: &Skeleton) -> Result<BdClass, SwapError> {
        let form = sk.canonical_form();
        if let Some(c) = self.memo.get(&form) {
            return Ok((**c).clone());
        }
        let closure = self.closure(sk.clone(), form)?;
        let rep = closure.iter().map(|(f, _)| f).min().expect("non-empty").clone();
        let class = Arc::new(BdClass {
            canonical_form: rep.clone(),
            member_count: closure.len(),
            transition_multiset: sk.transition_multiset(),
        });
        let mut skeletons = Vec::with_capacity(closure.len());
        for (f, m) in closure {
            self.memo.insert(f, class.clone());
            skeletons.push(m);
        }
        self.members.insert(rep, Arc::new(skeletons));
        Ok((*class).clone())
    }

    fn member_skeletons(&mut self, class: &BdClass) -> Result<Arc<Vec<Skeleton>>, SwapError> {
        if let Some(m) = self.members.get(&class.canonical_form) {
            return Ok(m.clone());
        }
        let sk = Skeleton::decode(&class.canonical_form)?;
        self.classify_skeleton(&sk)?;
        Ok(self.members[&class.canonical_form].clone())
    }

    /// Every member of the class up to isomorphism.
    pub fn members(&mut self, class: &BdClass) -> Result<Vec<GrProcess>, SwapError> {
        Ok(self.member_skeletons(class)?.iter().map(Skeleton::to_process).collect())
    }

    /// Breadth-first closure under swaps, deduplicated by canonical form.
    fn closure(&self, start: Skeleton, form: Vec<u8>) -> Result<Vec<(Vec<u8>, Skeleton)>, SwapError> {
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        // swaps keep event numbers, so many neighbours recur verbatim
        let mut seen_raw: HashSet<Skeleton> = HashSet::new();
        seen_raw.insert(start.clone());
        let mut members = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(form.clone());
        queue.push_back(members.len());
        members.push((form, start));
        while let Some(i) = queue.pop_front() {
            for next in members[i].1.swap_neighbours() {
                if !seen_raw.insert(next.clone()) {
                    continue;
                }
                let f = next.canonical_form();
                if seen.insert(f.clone()) {
                    if members.len() >= self.budget {
                        return Err(SwapError::ClassBudgetExceeded(self.budget));
                    }
                    queue.push_back(members.len());
                    members.push((f, next));
                }
            }
        }
        Ok(members)
    }

    /// Classes of the prefixes of every member of `class`.
    pub fn prefix_classes(&mut self, class: &BdClass) -> Result<BTreeSet<BdClass>, SwapError> {
        let mut out = BTreeSet::new();
        for m in self.member_skeletons(class)?.iter() {
            for p in m.to_process().prefixes() {
                out.insert(self.classify(&p)?);
            }
        }
        Ok(out)
    }

    /// All classes `≤ class`, reflexively and transitively closed.
    ///
    /// Every prefix of a member is reached by dropping maximal events one at
    /// a time, so the classes one event below suffice.
    pub fn classes_below(&mut self, class: &BdClass) -> Result<Arc<BTreeSet<BdClass>>, SwapError> {
        if let Some(b) = self.below.get(&class.canonical_form) {
            return Ok(b.clone());
        }
        let mut lower = BTreeSet::new();
        for m in self.member_skeletons(class)?.iter() {
            for sk in m.without_maximal_events() {
                lower.insert(self.classify_skeleton(&sk)?);
            }
        }
        let mut all = BTreeSet::new();
        all.insert(class.clone());
        for c in lower {
            all.extend(self.classes_below(&c)?.iter().cloned());
        }
        let all = Arc::new(all);
        self.below.insert(class.canonical_form.clone(), all.clone());
        Ok(all)
    }

    /// `[P'] ≤ [P]`: some member of `smaller` is a prefix of some member of
    /// `larger` (closed transitively).
    pub fn leq(&mut self, smaller: &BdClass, larger: &BdClass) -> Result<bool, SwapError> {
        if !smaller.transition_multiset.leq(&larger.transition_multiset) {
            return Ok(false);
        }
        Ok(self.classes_below(larger)?.contains(smaller))
    }

    /// `BD(P)`: every class below `[P]`.
    pub fn bd_of(&mut self, process: &GrProcess) -> Result<FiniteBdRun, SwapError> {
        let top = self.classify(process)?;
        Ok(FiniteBdRun { classes: (*self.classes_below(&top)?).clone() })
    }
}

/// A finite BD-run: a prefix-closed, directed set of finite BD-processes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteBdRun {
    classes: BTreeSet<BdClass>,
}

impl FiniteBdRun {
    pub fn classes(&self) -> &BTreeSet<BdClass> {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, class: &BdClass) -> bool {
        self.classes.contains(class)
    }

    pub fn is_subset(&self, other: &FiniteBdRun) -> bool {
        self.classes.is_subset(&other.classes)
    }

    pub fn is_prefix_closed(&self, engine: &mut BdEngine) -> Result<bool, SwapError> {
        for c in &self.classes {
            for below in engine.prefix_classes(c)? {
                if !self.classes.contains(&below) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_directed(&self, engine: &mut BdEngine) -> Result<bool, SwapError> {
        let all: Vec<&BdClass> = self.classes.iter().collect();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i..] {
                let mut joined = false;
                for u in &all {
                    if engine.leq(a, u)? && engine.leq(b, u)? {
                        joined = true;
                        break;
                    }
                }
                if !joined {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The largest class, if the run has one.
    pub fn top(&self, engine: &mut BdEngine) -> Result<Option<BdClass>, SwapError> {
        let Some(max) = self.classes.iter().max_by_key(|c| c.event_count()) else {
            return Ok(None);
        };
        for c in &self.classes {
            if !engine.leq(c, max)? {
                return Ok(None);
            }
        }
        Ok(Some(max.clone()))
    }
}
