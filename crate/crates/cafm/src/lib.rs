//! Anomaly detection for context-aware feature models (CaFMs).
//!
//! A CaFM is a propositional formula over two kinds of variables: *features*,
//! chosen by whoever configures a product, and *contexts*, fixed externally.
//! This crate detects the classic modeling anomalies — voidness, dead
//! features, false-optional features, redundant constraints — with three
//! interchangeable strategies:
//!
//! * **Iterative**: repeated incremental SAT calls using push/pop,
//! * **Pruning**: a SAT-model-guided elimination loop for feature analyses,
//! * **Forall**: a single ∃∀ query decided by a CEGAR loop over two SAT
//!   instances,
//!
//! plus a brute-force oracle for cross-checking, a random instance
//! generator, and a benchmark harness that races the strategies.

pub mod analyses;
pub mod cli;
pub mod formula;
pub mod generator;
pub mod model;
pub mod qbf;
pub mod sat;

pub use formula::{Assignment, Formula, VarName};
pub use model::{CaFM, ContextAssignment, Product};
