//! Place/transition nets, the firing rule, and bounded enumeration of
//! firing sequences.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::multiset::{CountOverflow, Multiset};
use crate::verdict::{BoundHit, Verdict};
use crate::Sequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlaceId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionId(pub u32);

/// A place or a transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Place(PlaceId),
    Transition(TransitionId),
}

/// A multiset of places.
pub type Marking = Multiset<PlaceId>;

/// A non-empty multiset of transitions.
pub type Step = Multiset<TransitionId>;

/// Limits for every bounded analysis in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_seq_len: usize,
    pub max_tokens_per_place: u32,
    pub max_states: usize,
    /// Distinct processes (up to isomorphism) per swapping-equivalence class.
    pub class_budget: usize,
    /// Members per trace class.
    pub trace_budget: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            max_seq_len: 12,
            max_tokens_per_place: 8,
            max_states: 100_000,
            class_budget: 20_000,
            trace_budget: 50_000,
        }
    }
}

impl Bounds {
    pub fn with_seq_len(self, max_seq_len: usize) -> Self {
        Self { max_seq_len, ..self }
    }
}

/// Errors raised while building a net.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetError {
    DuplicateId(String),
    UnknownNode(String),
    ArcBetweenPlaces(String, String),
    ArcBetweenTransitions(String, String),
    EmptyPreset(String),
    ZeroWeight(String, String),
    Overflow,
}

impl fmt::Display for NetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetError::DuplicateId(id) => write!(f, "duplicate id `{id}`"),
            NetError::UnknownNode(id) => write!(f, "unknown node `{id}`"),
            NetError::ArcBetweenPlaces(a, b) => write!(f, "arc `{a}` -> `{b}` connects two places"),
            NetError::ArcBetweenTransitions(a, b) => write!(f, "arc `{a}` -> `{b}` connects two transitions"),
            NetError::EmptyPreset(t) => write!(f, "transition `{t}` has empty preset"),
            NetError::ZeroWeight(a, b) => write!(f, "arc `{a}` -> `{b}` has weight 0"),
            NetError::Overflow => f.write_str("arc weight or token count overflow"),
        }
    }
}

impl core::error::Error for NetError {}

impl From<CountOverflow> for NetError {
    fn from(_: CountOverflow) -> Self {
        NetError::Overflow
    }
}

/// Errors raised by the firing rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FireError {
    /// The step needs these additional tokens.
    NotEnabled { deficit: Marking },
    EmptyStep,
    UnknownTransition(String),
    UnknownNode(String),
    /// `sequence[position]` could not fire.
    NotAFiringSequence { position: usize, transition: TransitionId, deficit: Marking },
    Overflow,
}

impl fmt::Display for FireError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FireError::NotEnabled { deficit } => write!(f, "step not enabled; missing tokens {deficit:?}"),
            FireError::EmptyStep => f.write_str("a step must be non-empty"),
            FireError::UnknownTransition(t) => write!(f, "unknown transition `{t}`"),
            FireError::UnknownNode(x) => write!(f, "unknown node {x}"),
            FireError::NotAFiringSequence { position, .. } => {
                write!(f, "not a firing sequence: position {position} is not enabled")
            }
            FireError::Overflow => f.write_str("token count overflow"),
        }
    }
}

impl core::error::Error for FireError {}

impl From<CountOverflow> for FireError {
    fn from(_: CountOverflow) -> Self {
        FireError::Overflow
    }
}

/// A validated net `(S, T, F, M0)`.
///
/// Places and transitions are numbered in declaration order; names are only
/// used for input and output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Net {
    name: String,
    places: Vec<String>,
    transitions: Vec<String>,
    pre: Vec<Marking>,
    post: Vec<Marking>,
    initial: Marking,
}

impl Net {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn places(&self) -> impl Iterator<Item = PlaceId> + '_ {
        (0..self.places.len() as u32).map(PlaceId)
    }

    pub fn transitions(&self) -> impl Iterator<Item = TransitionId> + '_ {
        (0..self.transitions.len() as u32).map(TransitionId)
    }

    pub fn place_name(&self, p: PlaceId) -> &str {
        &self.places[p.0 as usize]
    }

    pub fn transition_name(&self, t: TransitionId) -> &str {
        &self.transitions[t.0 as usize]
    }

    pub fn place_id(&self, name: &str) -> Option<PlaceId> {
        self.places.iter().position(|p| p == name).map(|i| PlaceId(i as u32))
    }

    pub fn transition_id(&self, name: &str) -> Option<TransitionId> {
        self.transitions.iter().position(|t| t == name).map(|i| TransitionId(i as u32))
    }

    /// `•t`
    pub fn preset(&self, t: TransitionId) -> &Marking {
        &self.pre[t.0 as usize]
    }

    /// `t•`
    pub fn postset(&self, t: TransitionId) -> &Marking {
        &self.post[t.0 as usize]
    }

    /// `F(s, t)`
    pub fn weight_in(&self, s: PlaceId, t: TransitionId) -> u32 {
        self.preset(t).count(&s)
    }

    /// `F(t, s)`
    pub fn weight_out(&self, t: TransitionId, s: PlaceId) -> u32 {
        self.postset(t).count(&s)
    }

    pub fn initial_marking(&self) -> &Marking {
        &self.initial
    }

    /// `(•X, X•)` for a multiset of nodes, extended linearly from single nodes.
    pub fn pre_post(&self, x: &Multiset<Node>) -> Result<(Multiset<Node>, Multiset<Node>), FireError> {
        let mut pre = Multiset::new();
        let mut post = Multiset::new();
        for (&node, k) in x.iter() {
            match node {
                Node::Transition(t) => {
                    if t.0 as usize >= self.transitions.len() {
                        return Err(FireError::UnknownNode(alloc::format!("transition #{}", t.0)));
                    }
                    for (&s, w) in self.preset(t).iter() {
                        pre.insert(Node::Place(s), w.checked_mul(k).ok_or(FireError::Overflow)?)?;
                    }
                    for (&s, w) in self.postset(t).iter() {
                        post.insert(Node::Place(s), w.checked_mul(k).ok_or(FireError::Overflow)?)?;
                    }
                }
                Node::Place(s) => {
                    if s.0 as usize >= self.places.len() {
                        return Err(FireError::UnknownNode(alloc::format!("place #{}", s.0)));
                    }
                    for t in self.transitions() {
                        let w_in = self.weight_out(t, s);
                        if w_in > 0 {
                            pre.insert(Node::Transition(t), w_in.checked_mul(k).ok_or(FireError::Overflow)?)?;
                        }
                        let w_out = self.weight_in(s, t);
                        if w_out > 0 {
                            post.insert(Node::Transition(t), w_out.checked_mul(k).ok_or(FireError::Overflow)?)?;
                        }
                    }
                }
            }
        }
        Ok((pre, post))
    }

    /// `•G` for a multiset of transitions.
    pub fn step_preset(&self, step: &Step) -> Result<Marking, CountOverflow> {
        let mut out = Marking::new();
        for (&t, k) in step.iter() {
            out = out.sum(&self.preset(t).scale(k)?)?;
        }
        Ok(out)
    }

    /// `G•` for a multiset of transitions.
    pub fn step_postset(&self, step: &Step) -> Result<Marking, CountOverflow> {
        let mut out = Marking::new();
        for (&t, k) in step.iter() {
            out = out.sum(&self.postset(t).scale(k)?)?;
        }
        Ok(out)
    }

    /// `•G ⊆ M`.
    pub fn is_enabled(&self, marking: &Marking, step: &Step) -> bool {
        self.step_preset(step).is_ok_and(|pre| pre.leq(marking))
    }

    /// Whether the single transition `t` may fire at `marking`.
    pub fn is_enabled_once(&self, marking: &Marking, t: TransitionId) -> bool {
        self.preset(t).leq(marking)
    }

    /// Transitions enabled at `marking`, in declaration order.
    pub fn enabled_transitions(&self, marking: &Marking) -> Vec<TransitionId> {
        self.transitions().filter(|&t| self.is_enabled_once(marking, t)).collect()
    }

    /// `M' = (M - •G) + G•`, defined only when `G` is enabled at `M`.
    pub fn fire_step(&self, marking: &Marking, step: &Step) -> Result<Marking, FireError> {
        if step.is_empty() {
            return Err(FireError::EmptyStep);
        }
        let pre = self.step_preset(step)?;
        if !pre.leq(marking) {
            return Err(FireError::NotEnabled { deficit: pre.monus(marking) });
        }
        Ok(marking.monus(&pre).sum(&self.step_postset(step)?)?)
    }

    /// Fires `t` alone.
    pub fn fire(&self, marking: &Marking, t: TransitionId) -> Result<Marking, FireError> {
        let pre = self.preset(t);
        if !pre.leq(marking) {
            return Err(FireError::NotEnabled { deficit: pre.monus(marking) });
        }
        Ok(marking.monus(pre).sum(self.postset(t))?)
    }

    /// Fires `sequence` from the initial marking and returns the final marking.
    pub fn fire_sequence(&self, sequence: &[TransitionId]) -> Result<Marking, FireError> {
        self.fire_sequence_from(&self.initial, sequence)
    }

    pub fn fire_sequence_from(&self, marking: &Marking, sequence: &[TransitionId]) -> Result<Marking, FireError> {
        let mut m = marking.clone();
        for (position, &t) in sequence.iter().enumerate() {
            m = self.fire(&m, t).map_err(|e| match e {
                FireError::NotEnabled { deficit } => FireError::NotAFiringSequence { position, transition: t, deficit },
                other => other,
            })?;
        }
        Ok(m)
    }

    /// `σ ∈ FS(N)`.
    pub fn is_firing_sequence(&self, sequence: &[TransitionId]) -> bool {
        self.fire_sequence(sequence).is_ok()
    }

    /// Looks up a whitespace-separated list of transition names.
    pub fn sequence_from_names(&self, text: &str) -> Result<Sequence, FireError> {
        text.split_whitespace()
            .map(|name| self.transition_id(name).ok_or_else(|| FireError::UnknownTransition(name.to_string())))
            .collect()
    }

    /// Transition names joined by single spaces.
    pub fn sequence_names(&self, sequence: &[TransitionId]) -> String {
        let names: Vec<&str> = sequence.iter().map(|&t| self.transition_name(t)).collect();
        names.join(" ")
    }

    /// A multiset of transitions looked up by name, e.g. `["a", "b", "c"]`.
    pub fn step_from_names<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Result<Step, FireError> {
        let mut step = Step::new();
        for name in names {
            let t = self.transition_id(name).ok_or_else(|| FireError::UnknownTransition(name.to_string()))?;
            step.insert(t, 1)?;
        }
        Ok(step)
    }

    /// A marking given by place names and counts.
    pub fn marking_from_names<'a>(&self, pairs: impl IntoIterator<Item = (&'a str, u32)>) -> Option<Marking> {
        let mut m = Marking::new();
        for (name, count) in pairs {
            m.insert(self.place_id(name)?, count).ok()?;
        }
        Some(m)
    }
}

/// Incremental construction of a [`Net`], validated by [`NetBuilder::build`].
#[derive(Debug, Default, Clone)]
pub struct NetBuilder {
    name: String,
    places: Vec<(String, u32)>,
    transitions: Vec<String>,
    arcs: Vec<(String, String, u32)>,
}

impl NetBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), ..Self::default() }
    }

    pub fn set_name(&mut self, name: impl Into<String>) -> &mut Self {
        self.name = name.into();
        self
    }

    fn declared(&self, id: &str) -> bool {
        self.places.iter().any(|(p, _)| p == id) || self.transitions.iter().any(|t| t == id)
    }

    pub fn place(&mut self, id: impl Into<String>, tokens: u32) -> Result<&mut Self, NetError> {
        let id = id.into();
        if self.declared(&id) {
            return Err(NetError::DuplicateId(id));
        }
        self.places.push((id, tokens));
        Ok(self)
    }

    pub fn transition(&mut self, id: impl Into<String>) -> Result<&mut Self, NetError> {
        let id = id.into();
        if self.declared(&id) {
            return Err(NetError::DuplicateId(id));
        }
        self.transitions.push(id);
        Ok(self)
    }

    /// Adds an arc. Repeated arcs between the same nodes add up.
    pub fn arc(&mut self, src: impl Into<String>, dst: impl Into<String>, weight: u32) -> Result<&mut Self, NetError> {
        let (src, dst) = (src.into(), dst.into());
        let is_place = |b: &Self, id: &str| b.places.iter().any(|(p, _)| p == id);
        let is_trans = |b: &Self, id: &str| b.transitions.iter().any(|t| t == id);
        for id in [&src, &dst] {
            if !self.declared(id) {
                return Err(NetError::UnknownNode(id.clone()));
            }
        }
        if is_place(self, &src) && is_place(self, &dst) {
            return Err(NetError::ArcBetweenPlaces(src, dst));
        }
        if is_trans(self, &src) && is_trans(self, &dst) {
            return Err(NetError::ArcBetweenTransitions(src, dst));
        }
        if weight == 0 {
            return Err(NetError::ZeroWeight(src, dst));
        }
        self.arcs.push((src, dst, weight));
        Ok(self)
    }

    pub fn build(&self) -> Result<Net, NetError> {
        let place_ix: BTreeMap<&str, PlaceId> =
            self.places.iter().enumerate().map(|(i, (p, _))| (p.as_str(), PlaceId(i as u32))).collect();
        let trans_ix: BTreeMap<&str, TransitionId> =
            self.transitions.iter().enumerate().map(|(i, t)| (t.as_str(), TransitionId(i as u32))).collect();
        let mut pre = alloc::vec![Marking::new(); self.transitions.len()];
        let mut post = alloc::vec![Marking::new(); self.transitions.len()];
        for (src, dst, w) in &self.arcs {
            if let (Some(&s), Some(&t)) = (place_ix.get(src.as_str()), trans_ix.get(dst.as_str())) {
                pre[t.0 as usize].insert(s, *w)?;
            } else if let (Some(&t), Some(&s)) = (trans_ix.get(src.as_str()), place_ix.get(dst.as_str())) {
                post[t.0 as usize].insert(s, *w)?;
            } else {
                return Err(NetError::UnknownNode(src.clone()));
            }
        }
        if let Some(i) = pre.iter().position(|m| m.is_empty()) {
            return Err(NetError::EmptyPreset(self.transitions[i].clone()));
        }
        let initial = self.places.iter().enumerate().map(|(i, (_, k))| (PlaceId(i as u32), *k)).collect();
        Ok(Net {
            name: self.name.clone(),
            places: self.places.iter().map(|(p, _)| p.clone()).collect(),
            transitions: self.transitions.clone(),
            pre,
            post,
            initial,
        })
    }
}

/// One node of a [`SequenceTree`]: a firing sequence and the marking it reaches.
#[derive(Debug, Clone)]
pub struct TreeNode {
    pub parent: Option<usize>,
    pub last: Option<TransitionId>,
    pub depth: usize,
    /// Index into [`Exploration::markings`].
    pub marking: usize,
    /// Extensions by one transition, in declaration order.
    pub children: Vec<(TransitionId, usize)>,
}

/// Prefix tree of enumerated firing sequences; node 0 is the empty sequence.
#[derive(Debug, Clone, Default)]
pub struct SequenceTree {
    nodes: Vec<TreeNode>,
}

impl SequenceTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: usize) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (usize, &TreeNode)> + '_ {
        self.nodes.iter().enumerate()
    }

    pub fn child(&self, id: usize, t: TransitionId) -> Option<usize> {
        self.nodes[id].children.iter().find(|(u, _)| *u == t).map(|&(_, c)| c)
    }

    /// Node reached by following `sequence` from `from`.
    pub fn descend(&self, from: usize, sequence: &[TransitionId]) -> Option<usize> {
        sequence.iter().try_fold(from, |n, &t| self.child(n, t))
    }

    pub fn lookup(&self, sequence: &[TransitionId]) -> Option<usize> {
        self.descend(0, sequence)
    }

    pub fn sequence(&self, mut id: usize) -> Sequence {
        let mut out = Vec::with_capacity(self.nodes[id].depth);
        while let Some(t) = self.nodes[id].last {
            out.push(t);
            id = self.nodes[id].parent.expect("non-root node has a parent");
        }
        out.reverse();
        out
    }

    /// All enumerated firing sequences in breadth-first order.
    pub fn sequences(&self) -> impl Iterator<Item = Sequence> + '_ {
        (0..self.nodes.len()).map(|i| self.sequence(i))
    }
}

/// Outcome of [`explore`].
#[derive(Debug, Clone)]
pub struct Exploration {
    /// Distinct reachable markings in discovery order; the initial marking is first.
    pub markings: Vec<Marking>,
    pub tree: SequenceTree,
    /// `Holds` when the enumeration closed: every enumerated sequence that
    /// could be extended was extended within the bounds.
    pub verdict: Verdict<core::convert::Infallible>,
}

impl Exploration {
    pub fn marking_of(&self, node: usize) -> &Marking {
        &self.markings[self.tree.node(node).marking]
    }

    pub fn closed(&self) -> bool {
        self.verdict.holds()
    }
}

/// Breadth-first enumeration of the firing sequences of `net` up to
/// `bounds.max_seq_len`, firing singletons in declaration order.
///
/// Sequences whose marking exceeds `max_tokens_per_place` are recorded but
/// not extended. At most `max_states` sequences are generated. Hitting any
/// bound makes the verdict unknown.
pub fn explore(net: &Net, bounds: &Bounds) -> Exploration {
    let mut markings = Vec::new();
    let mut marking_ix: BTreeMap<Marking, usize> = BTreeMap::new();
    let mut intern = |m: Marking, markings: &mut Vec<Marking>| -> usize {
        *marking_ix.entry(m.clone()).or_insert_with(|| {
            markings.push(m);
            markings.len() - 1
        })
    };
    let root_marking = intern(net.initial_marking().clone(), &mut markings);
    let mut tree = SequenceTree {
        nodes: alloc::vec![TreeNode { parent: None, last: None, depth: 0, marking: root_marking, children: Vec::new() }],
    };
    let mut bound: Option<BoundHit> = None;
    let mut queue = VecDeque::from([0usize]);

    'bfs: while let Some(id) = queue.pop_front() {
        let depth = tree.nodes[id].depth;
        let m = markings[tree.nodes[id].marking].clone();
        if let Some((&place, tokens)) = m.iter().find(|(_, c)| *c > bounds.max_tokens_per_place) {
            bound.get_or_insert(BoundHit::TokensPerPlace { place, tokens, limit: bounds.max_tokens_per_place });
            continue;
        }
        let enabled = net.enabled_transitions(&m);
        if depth >= bounds.max_seq_len {
            if !enabled.is_empty() {
                bound.get_or_insert(BoundHit::SequenceLength(bounds.max_seq_len));
            }
            continue;
        }
        for t in enabled {
            if tree.nodes.len() >= bounds.max_states {
                bound = Some(BoundHit::States(bounds.max_states));
                break 'bfs;
            }
            let next = match net.fire(&m, t) {
                Ok(next) => next,
                Err(_) => {
                    // count overflow; t is enabled
                    let place = net.postset(t).iter().map(|(&s, _)| s).next().unwrap_or(PlaceId(0));
                    bound.get_or_insert(BoundHit::TokensPerPlace { place, tokens: u32::MAX, limit: bounds.max_tokens_per_place });
                    continue;
                }
            };
            let mi = intern(next, &mut markings);
            let child = tree.nodes.len();
            tree.nodes.push(TreeNode { parent: Some(id), last: Some(t), depth: depth + 1, marking: mi, children: Vec::new() });
            tree.nodes[id].children.push((t, child));
            queue.push_back(child);
        }
    }

    Exploration { markings, tree, verdict: Verdict::from_bound(bound) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> Net {
        let mut b = NetBuilder::new("fig1");
        for (p, k) in [("1", 1), ("2", 1), ("3", 1), ("4", 0), ("5", 0)] {
            b.place(p, k).unwrap();
        }
        for t in ["a", "b", "c"] {
            b.transition(t).unwrap();
        }
        for (s, d) in [("1", "a"), ("2", "b"), ("a", "4"), ("b", "4"), ("4", "c"), ("3", "c"), ("c", "5")] {
            b.arc(s, d, 1).unwrap();
        }
        b.build().unwrap()
    }

    fn fig2() -> Net {
        let mut b = NetBuilder::new("fig2");
        for (p, k) in [("p", 2), ("pa", 1), ("pb", 1), ("pc", 1), ("pd", 1), ("q", 0)] {
            b.place(p, k).unwrap();
        }
        for t in ["a", "b", "c", "d"] {
            b.transition(t).unwrap();
        }
        for x in ["a", "b", "c"] {
            b.arc("p", x, 1).unwrap();
            b.arc(alloc::format!("p{x}"), x, 1).unwrap();
            b.arc(x, "q", 1).unwrap();
        }
        b.arc("q", "d", 1).unwrap().arc("pd", "d", 1).unwrap().arc("d", "p", 1).unwrap();
        b.build().unwrap()
    }

    fn m(net: &Net, pairs: &[(&str, u32)]) -> Marking {
        net.marking_from_names(pairs.iter().copied()).unwrap()
    }

    fn seq(net: &Net, s: &str) -> Sequence {
        net.sequence_from_names(s).unwrap()
    }

    #[test]
    fn builder_rejects_malformed_nets() {
        let mut b = NetBuilder::new("x");
        b.place("s", 1).unwrap().transition("t").unwrap().transition("u").unwrap();
        assert_eq!(b.clone().build(), Err(NetError::EmptyPreset("t".into())));
        assert!(matches!(b.arc("t", "u", 1), Err(NetError::ArcBetweenTransitions(..))));
        assert!(matches!(b.place("t", 0), Err(NetError::DuplicateId(_))));
        assert!(matches!(b.arc("s", "zz", 1), Err(NetError::UnknownNode(_))));
        let mut c = NetBuilder::new("y");
        c.place("p", 0).unwrap().place("q", 0).unwrap();
        assert!(matches!(c.arc("p", "q", 1), Err(NetError::ArcBetweenPlaces(..))));
    }

    #[test]
    fn repeated_arcs_sum() {
        let mut b = NetBuilder::new("w");
        b.place("s", 3).unwrap().transition("t").unwrap();
        b.arc("s", "t", 1).unwrap().arc("s", "t", 2).unwrap();
        let net = b.build().unwrap();
        assert_eq!(net.weight_in(PlaceId(0), TransitionId(0)), 3);
    }

    #[test]
    fn pre_post_of_node_multisets() {
        let net = fig1();
        let c = Node::Transition(net.transition_id("c").unwrap());
        let (pre, post) = net.pre_post(&Multiset::singleton(c)).unwrap();
        let p = |n: &str| Node::Place(net.place_id(n).unwrap());
        assert_eq!(pre, [(p("3"), 1), (p("4"), 1)].into_iter().collect());
        assert_eq!(post, [(p("5"), 1)].into_iter().collect());

        let ab: Multiset<Node> = ["a", "b"].iter().map(|n| Node::Transition(net.transition_id(n).unwrap())).collect();
        let (pre, post) = net.pre_post(&ab).unwrap();
        assert_eq!(pre, [(p("1"), 1), (p("2"), 1)].into_iter().collect());
        assert_eq!(post, [(p("4"), 2)].into_iter().collect());

        let (pre, post) = net.pre_post(&Multiset::new()).unwrap();
        assert!(pre.is_empty() && post.is_empty());

        // places: •4 = {a, b}, 4• = {c}
        let (pre, post) = net.pre_post(&Multiset::singleton(p("4"))).unwrap();
        assert_eq!(pre.cardinality(), 2);
        assert_eq!(post, Multiset::singleton(c));
    }

    #[test]
    fn fire_step_examples() {
        let net = fig1();
        let m0 = net.initial_marking().clone();
        let a = net.step_from_names(["a"]).unwrap();
        assert_eq!(net.fire_step(&m0, &a).unwrap(), m(&net, &[("2", 1), ("3", 1), ("4", 1)]));
        let ab = net.step_from_names(["a", "b"]).unwrap();
        assert_eq!(net.fire_step(&m0, &ab).unwrap(), m(&net, &[("3", 1), ("4", 2)]));
        assert_eq!(net.fire_step(&m0, &Step::new()), Err(FireError::EmptyStep));

        let net2 = fig2();
        let abc = net2.step_from_names(["a", "b", "c"]).unwrap();
        match net2.fire_step(net2.initial_marking(), &abc) {
            Err(FireError::NotEnabled { deficit }) => assert_eq!(deficit, m(&net2, &[("p", 1)])),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fire_sequence_examples() {
        let net = fig1();
        // a and b both put a token on 4; c consumes only one of them.
        assert_eq!(net.fire_sequence(&seq(&net, "a b c")).unwrap(), m(&net, &[("4", 1), ("5", 1)]));
        assert!(matches!(
            net.fire_sequence(&seq(&net, "c")),
            Err(FireError::NotAFiringSequence { position: 0, .. })
        ));

        let net2 = fig2();
        assert_eq!(net2.fire_sequence(&seq(&net2, "a b d c")).unwrap(), m(&net2, &[("q", 2)]));
    }

    #[test]
    fn step_implies_both_interleavings() {
        let net = fig1();
        let m0 = net.initial_marking();
        let ab = net.step_from_names(["a", "b"]).unwrap();
        let via_step = net.fire_step(m0, &ab).unwrap();
        assert_eq!(net.fire_sequence(&seq(&net, "a b")).unwrap(), via_step);
        assert_eq!(net.fire_sequence(&seq(&net, "b a")).unwrap(), via_step);
    }

    #[test]
    fn explore_fig1_and_fig2_close() {
        let net = fig1();
        let ex = explore(&net, &Bounds::default());
        assert!(ex.closed());
        assert_eq!(ex.markings.len(), 7);
        assert_eq!(&ex.markings[0], net.initial_marking());
        // stable: every enabled singleton leads back into the set
        for mk in &ex.markings {
            for t in net.enabled_transitions(mk) {
                assert!(ex.markings.contains(&net.fire(mk, t).unwrap()));
            }
        }
        let ex2 = explore(&fig2(), &Bounds::default());
        assert!(ex2.closed());
        assert!(ex2.tree.nodes().all(|(_, n)| n.depth <= 4));
    }

    #[test]
    fn explore_self_loop_does_not_close() {
        let mut b = NetBuilder::new("loop");
        b.place("1", 1).unwrap().place("2", 2).unwrap().transition("a").unwrap();
        b.arc("1", "a", 1).unwrap().arc("a", "1", 1).unwrap().arc("2", "a", 1).unwrap().arc("a", "2", 1).unwrap();
        let net = b.build().unwrap();
        let ex = explore(&net, &Bounds::default().with_seq_len(5));
        assert_eq!(ex.verdict, Verdict::Unknown(BoundHit::SequenceLength(5)));
        assert_eq!(ex.markings.len(), 1);
        assert_eq!(ex.tree.len(), 6);
    }

    #[test]
    fn state_and_token_bounds() {
        let mut b = NetBuilder::new("grow");
        b.place("s", 1).unwrap().transition("t").unwrap();
        b.arc("s", "t", 1).unwrap().arc("t", "s", 2).unwrap();
        let net = b.build().unwrap();
        let ex = explore(&net, &Bounds { max_tokens_per_place: 3, ..Bounds::default() });
        assert!(matches!(ex.verdict, Verdict::Unknown(BoundHit::TokensPerPlace { tokens: 4, .. })));
        let ex = explore(&net, &Bounds { max_states: 3, ..Bounds::default() });
        assert_eq!(ex.verdict, Verdict::Unknown(BoundHit::States(3)));
    }

    #[test]
    fn tree_lookup_round_trips() {
        let net = fig1();
        let ex = explore(&net, &Bounds::default());
        for (id, _) in ex.tree.nodes() {
            let s = ex.tree.sequence(id);
            assert_eq!(ex.tree.lookup(&s), Some(id));
            assert_eq!(&net.fire_sequence(&s).unwrap(), ex.marking_of(id));
        }
        assert_eq!(ex.tree.lookup(&seq(&net, "c")), None);
    }
}
