//! Causal semantics of place/transition nets.
//!
//! The crate is `no_std` (it needs `alloc`) and performs no IO. It covers:
//!
//! * multiset algebra ([`multiset`]) and the firing rule ([`net`]),
//! * Goltz–Reisig processes built from firing sequences ([`process`]),
//! * the swap transformation and swapping-equivalence classes ([`swapping`]),
//! * adjacency of firing sequences and trace classes ([`traces`]),
//! * semantic and structural conflicts ([`conflict`]),
//! * maximal processes and the maximality notions for their classes ([`maximality`]).
//!
//! Every analysis that has to quantify over a possibly infinite behaviour is
//! bounded by [`Bounds`] and answers with a three-valued [`Verdict`].

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod bitset;
pub mod conflict;
pub mod maximality;
pub mod multiset;
pub mod net;
pub mod process;
pub mod swapping;
pub mod traces;
mod unionfind;
mod verdict;

pub use multiset::{CountOverflow, Multiset};
pub use net::{Bounds, Marking, Net, NetBuilder, NetError, PlaceId, Step, TransitionId};
pub use process::{GrProcess, Policy};
pub use swapping::{BdClass, BdEngine};
pub use verdict::{BoundHit, Verdict};

/// Firing sequence: a word over the transitions of a net.
pub type Sequence = alloc::vec::Vec<TransitionId>;
