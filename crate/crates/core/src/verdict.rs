use core::fmt;

use crate::PlaceId;

/// A bound of a bounded analysis that was exhausted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundHit {
    /// Firing sequences (or processes) of this length could still be extended.
    SequenceLength(usize),
    /// A reachable marking put more tokens on a place than allowed.
    TokensPerPlace { place: PlaceId, tokens: u32, limit: u32 },
    /// More states than allowed were generated.
    States(usize),
    /// An equivalence-class closure grew past its budget.
    ClassBudget(usize),
}

impl fmt::Display for BoundHit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundHit::SequenceLength(n) => write!(f, "sequence length bound {n} reached with enabled transitions"),
            BoundHit::TokensPerPlace { place, tokens, limit } => {
                write!(f, "place #{} holds {tokens} tokens, above the limit {limit}", place.0)
            }
            BoundHit::States(n) => write!(f, "state bound {n} exceeded"),
            BoundHit::ClassBudget(n) => write!(f, "class budget {n} exceeded"),
        }
    }
}

/// Result of a bounded check: it holds, it fails with a witness, or the
/// bounds were exhausted before either could be established.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    Fails(W),
    Unknown(BoundHit),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Fails(w) => Some(w),
            _ => None,
        }
    }

    pub fn bound_hit(&self) -> Option<&BoundHit> {
        match self {
            Verdict::Unknown(b) => Some(b),
            _ => None,
        }
    }

    pub fn map_witness<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(w) => Verdict::Fails(f(w)),
            Verdict::Unknown(b) => Verdict::Unknown(b),
        }
    }

    /// `holds` unless a bound was hit, in which case the answer is unknown.
    pub fn from_bound(bound: Option<BoundHit>) -> Self {
        match bound {
            None => Verdict::Holds,
            Some(b) => Verdict::Unknown(b),
        }
    }
}
