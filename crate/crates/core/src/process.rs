//! Goltz–Reisig processes: occurrence nets folded onto a net.
//!
//! A [`GrProcess`] is always well formed: every condition has at most one
//! pre-event and one post-event, and the conditions without pre-event are
//! exactly the initial ones. Arbitrary (possibly ill-formed) structures are
//! represented by [`ProcessStructure`] and checked with [`validate`].
//!
//! Condition and event ids are creation indices. [`GrProcess::extend`]
//! always allocates fresh, larger ids, so a process built by extension keeps
//! the ids of all its prefixes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::bitset::BitSet;
use crate::net::{FireError, Marking, Net, PlaceId, TransitionId};
use crate::Sequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConditionId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Condition {
    pub place: PlaceId,
    pub pre: Option<EventId>,
    pub post: Option<EventId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event {
    pub transition: TransitionId,
}

/// Which cut conditions an extending event consumes when there is a choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Policy {
    /// Oldest condition first.
    #[default]
    Fifo,
    /// Newest condition first.
    Lifo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProcessError {
    /// The cut lacks these tokens.
    NotEnabledAtCut { transition: TransitionId, deficit: Marking },
    /// The event set does not contain all causal predecessors of its members.
    NotDownwardClosed(EventId),
    UnknownEvent(EventId),
    UnknownCondition(ConditionId),
    Fire(FireError),
    Invalid(Vec<Violation>),
}

impl fmt::Display for ProcessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProcessError::NotEnabledAtCut { deficit, .. } => {
                write!(f, "not enabled at cut; missing tokens {deficit:?}")
            }
            ProcessError::NotDownwardClosed(e) => write!(f, "event set not causally closed at e{}", e.0),
            ProcessError::UnknownEvent(e) => write!(f, "unknown event e{}", e.0),
            ProcessError::UnknownCondition(c) => write!(f, "unknown condition c{}", c.0),
            ProcessError::Fire(e) => write!(f, "{e}"),
            ProcessError::Invalid(v) => write!(f, "invalid process ({} violations)", v.len()),
        }
    }
}

impl core::error::Error for ProcessError {}

impl From<FireError> for ProcessError {
    fn from(e: FireError) -> Self {
        ProcessError::Fire(e)
    }
}

/// The conditions without post-event and the marking they fold onto.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessCut {
    pub conditions: Vec<ConditionId>,
    pub marking: Marking,
}

/// A finite GR-process of some net.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrProcess {
    conditions: BTreeMap<ConditionId, Condition>,
    events: BTreeMap<EventId, Event>,
}

impl GrProcess {
    /// The process without events: one initial condition per token of `M0`.
    pub fn initial(net: &Net) -> Self {
        let mut conditions = BTreeMap::new();
        let mut next = 0;
        for (&place, k) in net.initial_marking().iter() {
            for _ in 0..k {
                conditions.insert(ConditionId(next), Condition { place, pre: None, post: None });
                next += 1;
            }
        }
        Self { conditions, events: BTreeMap::new() }
    }

    /// Builds a process by firing `sequence` from the initial process.
    pub fn from_sequence(net: &Net, sequence: &[TransitionId], policy: Policy) -> Result<Self, ProcessError> {
        let mut p = Self::initial(net);
        for (position, &t) in sequence.iter().enumerate() {
            p = p.extend(net, t, policy).map_err(|e| match e {
                ProcessError::NotEnabledAtCut { transition, deficit } => {
                    ProcessError::Fire(FireError::NotAFiringSequence { position, transition, deficit })
                }
                other => other,
            })?;
        }
        Ok(p)
    }

    /// Assembles a process from parts, checking every well-formedness clause.
    pub fn from_parts(
        net: &Net,
        conditions: impl IntoIterator<Item = (ConditionId, Condition)>,
        events: impl IntoIterator<Item = (EventId, Event)>,
    ) -> Result<Self, ProcessError> {
        let p = Self { conditions: conditions.into_iter().collect(), events: events.into_iter().collect() };
        let violations = validate(net, &p.to_structure());
        if violations.is_empty() {
            Ok(p)
        } else {
            Err(ProcessError::Invalid(violations))
        }
    }

    pub(crate) fn from_parts_unchecked(
        conditions: BTreeMap<ConditionId, Condition>,
        events: BTreeMap<EventId, Event>,
    ) -> Self {
        Self { conditions, events }
    }

    pub fn from_structure(net: &Net, s: &ProcessStructure) -> Result<Self, ProcessError> {
        let violations = validate(net, s);
        if !violations.is_empty() {
            return Err(ProcessError::Invalid(violations));
        }
        let mut conditions: BTreeMap<ConditionId, Condition> =
            s.conditions.iter().map(|(&c, &place)| (c, Condition { place, pre: None, post: None })).collect();
        for &(c, e) in &s.consumes {
            conditions.get_mut(&c).expect("validated").post = Some(e);
        }
        for &(e, c) in &s.produces {
            conditions.get_mut(&c).expect("validated").pre = Some(e);
        }
        let events = s.events.iter().map(|(&e, &transition)| (e, Event { transition })).collect();
        Ok(Self { conditions, events })
    }

    pub fn to_structure(&self) -> ProcessStructure {
        let mut s = ProcessStructure::default();
        for (&c, cond) in &self.conditions {
            s.conditions.insert(c, cond.place);
            match cond.pre {
                Some(e) => {
                    s.produces.insert((e, c));
                }
                None => {
                    s.initial.insert(c);
                }
            }
            if let Some(e) = cond.post {
                s.consumes.insert((c, e));
            }
        }
        s.events = self.events.iter().map(|(&e, ev)| (e, ev.transition)).collect();
        s
    }

    pub fn conditions(&self) -> impl Iterator<Item = (ConditionId, &Condition)> + '_ {
        self.conditions.iter().map(|(&c, x)| (c, x))
    }

    pub fn events(&self) -> impl Iterator<Item = (EventId, &Event)> + '_ {
        self.events.iter().map(|(&e, x)| (e, x))
    }

    pub fn condition(&self, id: ConditionId) -> Option<&Condition> {
        self.conditions.get(&id)
    }

    pub fn event(&self, id: EventId) -> Option<&Event> {
        self.events.get(&id)
    }

    pub fn condition_count(&self) -> usize {
        self.conditions.len()
    }

    pub fn event_count(&self) -> usize {
        self.events.len()
    }

    pub fn initial_conditions(&self) -> impl Iterator<Item = ConditionId> + '_ {
        self.conditions.iter().filter(|(_, c)| c.pre.is_none()).map(|(&id, _)| id)
    }

    /// `•e`
    pub fn event_preset(&self, e: EventId) -> Vec<ConditionId> {
        self.conditions.iter().filter(|(_, c)| c.post == Some(e)).map(|(&id, _)| id).collect()
    }

    /// `e•`
    pub fn event_postset(&self, e: EventId) -> Vec<ConditionId> {
        self.conditions.iter().filter(|(_, c)| c.pre == Some(e)).map(|(&id, _)| id).collect()
    }

    /// Multiset of transitions the events fold onto.
    pub fn transition_multiset(&self) -> crate::Step {
        self.events.values().map(|e| e.transition).collect()
    }

    /// `P°` and `P̂`.
    pub fn cut(&self) -> ProcessCut {
        let conditions: Vec<ConditionId> =
            self.conditions.iter().filter(|(_, c)| c.post.is_none()).map(|(&id, _)| id).collect();
        let marking = conditions.iter().map(|c| self.conditions[c].place).collect();
        ProcessCut { conditions, marking }
    }

    fn next_condition_id(&self) -> u32 {
        self.conditions.keys().next_back().map_or(0, |c| c.0 + 1)
    }

    fn next_event_id(&self) -> u32 {
        self.events.keys().next_back().map_or(0, |e| e.0 + 1)
    }

    /// Cut conditions per place, in ascending id order.
    fn cut_by_place(&self) -> BTreeMap<PlaceId, Vec<ConditionId>> {
        let mut by_place: BTreeMap<PlaceId, Vec<ConditionId>> = BTreeMap::new();
        for (&id, c) in &self.conditions {
            if c.post.is_none() {
                by_place.entry(c.place).or_default().push(id);
            }
        }
        by_place
    }

    fn check_enabled(&self, net: &Net, t: TransitionId) -> Result<BTreeMap<PlaceId, Vec<ConditionId>>, ProcessError> {
        let by_place = self.cut_by_place();
        let available: Marking = by_place.iter().map(|(&p, v)| (p, v.len() as u32)).collect();
        if !net.preset(t).leq(&available) {
            return Err(ProcessError::NotEnabledAtCut { transition: t, deficit: net.preset(t).monus(&available) });
        }
        Ok(by_place)
    }

    /// Appends one event for `t`, consuming cut conditions chosen by `policy`.
    pub fn extend(&self, net: &Net, t: TransitionId, policy: Policy) -> Result<Self, ProcessError> {
        let by_place = self.check_enabled(net, t)?;
        let mut chosen = Vec::new();
        for (&s, w) in net.preset(t).iter() {
            let cands = &by_place[&s];
            let w = w as usize;
            match policy {
                Policy::Fifo => chosen.extend_from_slice(&cands[..w]),
                Policy::Lifo => chosen.extend(cands.iter().rev().take(w)),
            }
        }
        Ok(self.extend_with(net, t, &chosen))
    }

    /// Every one-event extension by `t`, one per choice of consumed cut
    /// conditions. Choices are made among distinct conditions, so the results
    /// may be isomorphic to each other.
    pub fn all_extensions(&self, net: &Net, t: TransitionId) -> Vec<Self> {
        let Ok(by_place) = self.check_enabled(net, t) else {
            return Vec::new();
        };
        let per_place: Vec<Vec<Vec<ConditionId>>> =
            net.preset(t).iter().map(|(s, w)| combinations(&by_place[s], w as usize)).collect();
        let mut out = Vec::new();
        let mut pick = Vec::new();
        product(&per_place, 0, &mut pick, &mut |chosen: &[ConditionId]| out.push(self.extend_with(net, t, chosen)));
        out
    }

    fn extend_with(&self, net: &Net, t: TransitionId, consumed: &[ConditionId]) -> Self {
        let mut next = self.clone();
        let e = EventId(self.next_event_id());
        next.events.insert(e, Event { transition: t });
        for c in consumed {
            next.conditions.get_mut(c).expect("cut condition").post = Some(e);
        }
        let mut id = self.next_condition_id();
        for (&s, w) in net.postset(t).iter() {
            for _ in 0..w {
                next.conditions.insert(ConditionId(id), Condition { place: s, pre: Some(e), post: None });
                id += 1;
            }
        }
        next
    }

    /// Strict causal order on events.
    pub fn causality(&self) -> Causality {
        let index: BTreeMap<EventId, usize> = self.events.keys().enumerate().map(|(i, &e)| (e, i)).collect();
        let n = index.len();
        let mut direct: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
        for c in self.conditions.values() {
            if let (Some(a), Some(b)) = (c.pre, c.post) {
                direct[index[&b]].push(index[&a]);
            }
        }
        let order = topological(n, &direct).expect("process flow is acyclic");
        let mut before: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        for &v in &order {
            for &u in &direct[v] {
                let bu = before[u].clone();
                before[v].union_with(&bu);
                before[v].insert(u);
            }
        }
        Causality { index, before }
    }

    /// A topological order of the events mapped to transitions; ties go to
    /// the smaller event id.
    pub fn linearize(&self) -> Sequence {
        self.linear_events().into_iter().map(|e| self.events[&e].transition).collect()
    }

    pub(crate) fn linear_events(&self) -> Vec<EventId> {
        let mut indegree: BTreeMap<EventId, usize> = self.events.keys().map(|&e| (e, 0)).collect();
        let mut succ: BTreeMap<EventId, Vec<EventId>> = BTreeMap::new();
        for c in self.conditions.values() {
            if let (Some(a), Some(b)) = (c.pre, c.post) {
                *indegree.get_mut(&b).expect("event") += 1;
                succ.entry(a).or_default().push(b);
            }
        }
        let mut ready: BTreeSet<EventId> = indegree.iter().filter(|(_, &d)| d == 0).map(|(&e, _)| e).collect();
        let mut out = Vec::with_capacity(self.events.len());
        while let Some(e) = ready.pop_first() {
            out.push(e);
            for b in succ.get(&e).into_iter().flatten() {
                let d = indegree.get_mut(b).expect("event");
                *d -= 1;
                if *d == 0 {
                    ready.insert(*b);
                }
            }
        }
        out
    }

    /// `self ≤ other`: `self` is literally contained in `other` with the
    /// same initial conditions, and flow and folding are restrictions.
    pub fn prefix_of(&self, other: &Self) -> bool {
        for (e, ev) in &self.events {
            if other.events.get(e) != Some(ev) {
                return false;
            }
        }
        for (c, cond) in &self.conditions {
            let Some(big) = other.conditions.get(c) else {
                return false;
            };
            let restrict = |x: Option<EventId>| x.filter(|e| self.events.contains_key(e));
            if big.place != cond.place || restrict(big.pre) != cond.pre || restrict(big.post) != cond.post {
                return false;
            }
            // a condition produced by an event outside `self` would be initial here
            if big.pre.is_some() && cond.pre.is_none() {
                return false;
            }
        }
        other.initial_conditions().all(|c| self.conditions.contains_key(&c))
    }

    /// The prefix determined by a causally downward-closed set of events.
    pub fn prefix_by_events(&self, events: &BTreeSet<EventId>) -> Result<Self, ProcessError> {
        for e in events {
            if !self.events.contains_key(e) {
                return Err(ProcessError::UnknownEvent(*e));
            }
        }
        for c in self.conditions.values() {
            if let (Some(a), Some(b)) = (c.pre, c.post) {
                if events.contains(&b) && !events.contains(&a) {
                    return Err(ProcessError::NotDownwardClosed(b));
                }
            }
        }
        let conditions = self
            .conditions
            .iter()
            .filter(|(_, c)| c.pre.is_none_or(|e| events.contains(&e)))
            .map(|(&id, c)| (id, Condition { post: c.post.filter(|e| events.contains(e)), ..*c }))
            .collect();
        let events = self.events.iter().filter(|(e, _)| events.contains(e)).map(|(&e, &x)| (e, x)).collect();
        Ok(Self { conditions, events })
    }

    /// All causally downward-closed event sets, smallest first.
    pub fn downward_closed_event_sets(&self) -> Vec<BTreeSet<EventId>> {
        let order = self.linear_events();
        let preds: BTreeMap<EventId, BTreeSet<EventId>> = self
            .events
            .keys()
            .map(|&e| {
                let p = self.conditions.values().filter(|c| c.post == Some(e)).filter_map(|c| c.pre).collect();
                (e, p)
            })
            .collect();
        let mut out = Vec::new();
        let mut current = BTreeSet::new();
        ideals(&order, 0, &preds, &mut current, &mut out);
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Every prefix of the process (including the initial one and itself).
    pub fn prefixes(&self) -> Vec<Self> {
        self.downward_closed_event_sets()
            .iter()
            .map(|es| self.prefix_by_events(es).expect("downward closed"))
            .collect()
    }
}

fn ideals(
    order: &[EventId],
    i: usize,
    preds: &BTreeMap<EventId, BTreeSet<EventId>>,
    current: &mut BTreeSet<EventId>,
    out: &mut Vec<BTreeSet<EventId>>,
) {
    if i == order.len() {
        out.push(current.clone());
        return;
    }
    ideals(order, i + 1, preds, current, out);
    let e = order[i];
    // `order` is topological, so predecessors were decided already
    if preds[&e].iter().all(|p| current.contains(p)) {
        current.insert(e);
        ideals(order, i + 1, preds, current, out);
        current.remove(&e);
    }
}

fn topological(n: usize, preds: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut indeg: Vec<usize> = preds.iter().map(Vec::len).collect();
    let mut succ: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    for (v, ps) in preds.iter().enumerate() {
        for &u in ps {
            succ[u].push(v);
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut out = Vec::with_capacity(n);
    while let Some(v) = stack.pop() {
        out.push(v);
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    (out.len() == n).then_some(out)
}

pub(crate) fn combinations<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn go<T: Copy>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

fn product<T: Copy>(per: &[Vec<Vec<T>>], i: usize, pick: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
    if i == per.len() {
        f(pick);
        return;
    }
    for choice in &per[i] {
        let len = pick.len();
        pick.extend_from_slice(choice);
        product(per, i + 1, pick, f);
        pick.truncate(len);
    }
}

/// Strict causal order `F⁺` restricted to events.
#[derive(Debug, Clone)]
pub struct Causality {
    index: BTreeMap<EventId, usize>,
    before: Vec<BitSet>,
}

impl Causality {
    /// `a` strictly precedes `b`.
    pub fn event_before(&self, a: EventId, b: EventId) -> bool {
        self.before[self.index[&b]].contains(self.index[&a])
    }

    /// `(p, q) ∈ F⁺` for conditions of `process`.
    pub fn condition_before(&self, process: &GrProcess, p: ConditionId, q: ConditionId) -> bool {
        match (process.conditions[&p].post, process.conditions[&q].pre) {
            (Some(a), Some(b)) => a == b || self.event_before(a, b),
            _ => false,
        }
    }

    /// Neither condition is a causal predecessor of the other.
    pub fn concurrent(&self, process: &GrProcess, p: ConditionId, q: ConditionId) -> bool {
        p != q && !self.condition_before(process, p, q) && !self.condition_before(process, q, p)
    }
}

/// A process-like structure with arbitrary flow, as read from outside.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProcessStructure {
    pub conditions: BTreeMap<ConditionId, PlaceId>,
    pub events: BTreeMap<EventId, TransitionId>,
    /// Arcs condition → event.
    pub consumes: BTreeSet<(ConditionId, EventId)>,
    /// Arcs event → condition.
    pub produces: BTreeSet<(EventId, ConditionId)>,
    pub initial: BTreeSet<ConditionId>,
}

/// A broken well-formedness clause of a process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownPlace(ConditionId),
    UnknownTransition(EventId),
    DanglingArc { condition: ConditionId, event: EventId },
    /// `|•s| ≤ 1`
    MultiplePreEvents(ConditionId),
    /// `|s•| ≤ 1`
    MultiplePostEvents(ConditionId),
    /// Initial conditions must be exactly those without pre-event.
    InitialMismatch(ConditionId),
    /// The event lies on a cycle of the flow relation.
    Cycle(EventId),
    /// `M0(s) = |π⁻¹(s) ∩ initial|`
    InitialMarking { place: PlaceId, expected: u32, found: u32 },
    /// `F(s, π(e)) = |π⁻¹(s) ∩ •e|`
    PresetWeight { event: EventId, place: PlaceId, expected: u32, found: u32 },
    /// `F(π(e), s) = |π⁻¹(s) ∩ e•|`
    PostsetWeight { event: EventId, place: PlaceId, expected: u32, found: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownPlace(c) => write!(f, "condition c{} folds onto an unknown place", c.0),
            Violation::UnknownTransition(e) => write!(f, "event e{} folds onto an unknown transition", e.0),
            Violation::DanglingArc { condition, event } => {
                write!(f, "arc between c{} and e{} refers to an undeclared node", condition.0, event.0)
            }
            Violation::MultiplePreEvents(c) => write!(f, "|•s| ≤ 1 violated at c{}", c.0),
            Violation::MultiplePostEvents(c) => write!(f, "|s•| ≤ 1 violated at c{}", c.0),
            Violation::InitialMismatch(c) => write!(f, "c{} is initial iff it has no pre-event: violated", c.0),
            Violation::Cycle(e) => write!(f, "flow is cyclic through e{}", e.0),
            Violation::InitialMarking { place, expected, found } => {
                write!(f, "initial marking: place #{} needs {expected} initial conditions, found {found}", place.0)
            }
            Violation::PresetWeight { event, place, expected, found } => write!(
                f,
                "arc weight: e{} needs {expected} preconditions on place #{}, found {found}",
                event.0, place.0
            ),
            Violation::PostsetWeight { event, place, expected, found } => write!(
                f,
                "arc weight: e{} needs {expected} postconditions on place #{}, found {found}",
                event.0, place.0
            ),
        }
    }
}

/// Checks every clause of the process definition; an empty result means
/// `structure` is a process of `net`.
pub fn validate(net: &Net, structure: &ProcessStructure) -> Vec<Violation> {
    let mut out = Vec::new();
    let s = structure;
    for (&c, p) in &s.conditions {
        if p.0 as usize >= net.place_count() {
            out.push(Violation::UnknownPlace(c));
        }
    }
    for (&e, t) in &s.events {
        if t.0 as usize >= net.transition_count() {
            out.push(Violation::UnknownTransition(e));
        }
    }
    let arcs = s.consumes.iter().copied().chain(s.produces.iter().map(|&(e, c)| (c, e)));
    for (condition, event) in arcs {
        if !s.conditions.contains_key(&condition) || !s.events.contains_key(&event) {
            out.push(Violation::DanglingArc { condition, event });
        }
    }
    if !out.is_empty() {
        return out;
    }

    let mut pre_count: BTreeMap<ConditionId, usize> = BTreeMap::new();
    let mut post_count: BTreeMap<ConditionId, usize> = BTreeMap::new();
    for &(_, c) in &s.produces {
        *pre_count.entry(c).or_default() += 1;
    }
    for &(c, _) in &s.consumes {
        *post_count.entry(c).or_default() += 1;
    }
    for &c in s.conditions.keys() {
        let pre = pre_count.get(&c).copied().unwrap_or(0);
        if pre > 1 {
            out.push(Violation::MultiplePreEvents(c));
        }
        if post_count.get(&c).copied().unwrap_or(0) > 1 {
            out.push(Violation::MultiplePostEvents(c));
        }
        if (pre == 0) != s.initial.contains(&c) {
            out.push(Violation::InitialMismatch(c));
        }
    }
    for &c in &s.initial {
        if !s.conditions.contains_key(&c) {
            out.push(Violation::InitialMismatch(c));
        }
    }

    // cycles: events whose flow successors lead back to themselves
    let index: BTreeMap<EventId, usize> = s.events.keys().enumerate().map(|(i, &e)| (e, i)).collect();
    let ids: Vec<EventId> = s.events.keys().copied().collect();
    let mut preds: Vec<Vec<usize>> = alloc::vec![Vec::new(); ids.len()];
    for &(a, c) in &s.produces {
        for &(c2, b) in s.consumes.range((c, EventId(0))..=(c, EventId(u32::MAX))) {
            debug_assert_eq!(c2, c);
            preds[index[&b]].push(index[&a]);
        }
    }
    if topological(ids.len(), &preds).is_none() {
        let mut indeg: Vec<usize> = preds.iter().map(Vec::len).collect();
        let mut removed = alloc::vec![false; ids.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for v in 0..ids.len() {
                if !removed[v] && indeg[v] == 0 {
                    removed[v] = true;
                    changed = true;
                    for (w, ps) in preds.iter().enumerate() {
                        indeg[w] -= ps.iter().filter(|&&u| u == v).count();
                    }
                }
            }
        }
        out.extend((0..ids.len()).filter(|&v| !removed[v]).map(|v| Violation::Cycle(ids[v])));
    }

    let mut initial_by_place = Marking::new();
    for c in &s.initial {
        if let Some(&p) = s.conditions.get(c) {
            initial_by_place.insert(p, 1).expect("count");
        }
    }
    for place in net.places() {
        let expected = net.initial_marking().count(&place);
        let found = initial_by_place.count(&place);
        if expected != found {
            out.push(Violation::InitialMarking { place, expected, found });
        }
    }

    for (&event, &t) in &s.events {
        let pre: Marking = s.consumes.iter().filter(|(_, e)| *e == event).map(|(c, _)| s.conditions[c]).collect();
        let post: Marking = s.produces.iter().filter(|(e, _)| *e == event).map(|(_, c)| s.conditions[c]).collect();
        for place in net.places() {
            let (expected, found) = (net.weight_in(place, t), pre.count(&place));
            if expected != found {
                out.push(Violation::PresetWeight { event, place, expected, found });
            }
            let (expected, found) = (net.weight_out(t, place), post.count(&place));
            if expected != found {
                out.push(Violation::PostsetWeight { event, place, expected, found });
            }
        }
    }
    out
}
