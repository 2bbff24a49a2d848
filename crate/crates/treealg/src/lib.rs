//! Bottom-up tree automata: evaluation, quotient minimisation, Myhill-Nerode
//! synthesis, and nondeterministic/weighted variants.
//!
//! A deterministic bottom-up tree automaton ([`dfta::Dfta`]) assigns states to
//! trees leaf-to-root and reads an output value off the root state; the
//! assignment is the unique structural extension of the initial leaf map, so
//! evaluation is plain recursion. On top of that core the crate provides:
//!
//! - [`term`] — signatures, frontiers, tree/context parsing and rendering,
//!   and bounded enumeration of all trees or contexts up to a height.
//! - [`quotient`] — the partition lattice on states, transition-stable
//!   refinement, and greatest-fixpoint minimisation: the coarsest partition
//!   below the output kernel that is stable under single-argument
//!   replacement. Quotienting by it yields the minimal automaton for the
//!   language of a reachable, output-restricted automaton.
//! - [`nerode`] — the opposite direction: given only a language oracle,
//!   enumerate trees and contexts to bounded heights, split trees by their
//!   context-value rows, and read the minimal automaton off the classes,
//!   rejecting honestly when the heights are too small. Includes the
//!   word-monad analogue, bounded syntactic congruence on words.
//! - [`effectful`] — nondeterministic automata with subset-construction
//!   determinisation, and semiring-weighted automata evaluated by Kronecker
//!   products and vector-matrix multiplication ([`semiring`] supplies exact
//!   rationals and the boolean semiring).
//! - [`format`] — a line-oriented text format for all automaton kinds and
//!   for oracle tables, with canonical rendering.
//!
//! The `treealg` binary wraps these as subcommands; see the crate README.

pub mod dfta;
pub mod effectful;
pub mod error;
pub mod format;
pub mod nerode;
pub mod quotient;
pub mod semiring;
pub mod term;
#[cfg(test)]
pub(crate) mod testutil;
mod util;

pub use error::{Error, Result};
