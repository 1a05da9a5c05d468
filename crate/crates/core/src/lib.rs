//! Belief revision and contraction over finite propositional vocabularies,
//! iterated (Darwiche–Pearl style) operators, postulate auditing, belief-set
//! distances, and the replay of binary-network training trajectories as
//! sequences of revisions and contractions.

pub mod ann;
pub mod audit;
pub mod epistemics;
pub mod logic;
pub mod metrics;
pub mod operators;
pub mod replay;

pub use logic::{
    parse_formula, Formula, ParseError, Universe, Vocabulary, World, WorldLabel, WorldSet,
};
