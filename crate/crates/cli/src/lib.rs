//! Text format, fixtures, random nets and JSON reports around
//! `petri_causal_core`, plus the command dispatcher used by the binary.

pub mod cli;
pub mod corpus;
pub mod fixtures;
pub mod format;
pub mod report;

pub use cli::{run, Command, Outcome, RunError, Status, Verb};
pub use format::{parse_net, write_net, ParseError};
