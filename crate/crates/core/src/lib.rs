//! Satisfiability solver for the Bernays-Schönfinkel-Ramsey (∃*∀*) fragment
//! of separation logic over an uninterpreted location sort with k-tuple data.
//!
//! The solver decides quantified inputs by counterexample-guided
//! instantiation on top of a small-model-bounded quantifier-free checker.
//! A brute-force reference procedure and a benchmark harness for finite
//! unfoldings of inductive predicates are included for validation.

pub mod bench;
pub mod cegqi;
pub mod formula;
pub mod frontend;
pub mod oracle;
pub mod qf;
pub mod semantics;

pub use cegqi::{solve, Mode, SolveOptions, SolveResult};
pub use formula::{Formula, LocTerm, PrenexInput, TupleTerm};
pub use frontend::{parse, Problem};
pub use semantics::{Heap, Interpretation, Model};
