//! Exact reduction of probabilistic and weighted automata.
//!
//! A state is *redundant* when its language is a combination of the languages
//! of the other states: a convex combination for probabilistic automata, a
//! linear combination for weighted automata over the rationals, and a
//! nonnegative (conic) combination for weighted automata over the nonnegative
//! rationals. Eliminating every redundant state yields a *reduced* automaton.
//!
//! The pipeline is:
//!
//! 1. grow an observation table until it is consistent ([`table::make_consistent`]),
//! 2. extract a base from its rows: extreme points, a conic frame
//!    ([`frame`]), or a linear basis,
//! 3. express every other state over the base ([`reduce::RewriteMap`]),
//! 4. redirect transitions through that map.
//!
//! Everything is computed over exact rationals; there are no tolerances.
//! The [`oracles`] module provides independent equivalence checks used to
//! certify every reduction.

pub mod automaton;
pub mod error;
pub mod format;
pub mod frame;
pub mod linalg;
pub mod oracles;
pub mod rational;
pub mod reduce;
pub mod table;

pub use automaton::{Alphabet, Automaton, StateVector, Theory, Word};
pub use error::{Error, Result};
pub use frame::{conical_frame, convex_extreme_points, membership_oracle, HullMode};
pub use linalg::Matrix;
pub use oracles::{equiv_exact, equiv_up_to, redundancy_bruteforce, EquivQuery, EquivVerdict};
pub use rational::Rational;
pub use reduce::{reduce, reduce_wa, verify, ReductionResult, RewriteMap, VerifyReport};
pub use table::{make_consistent, ConsistencyDefect, ConsistencyVerdict, ObservationTable};
