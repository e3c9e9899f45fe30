//! A laboratory for oracle-guided inductive synthesis over decidable
//! languages of naturals.
//!
//! The crate wires together:
//! - [`lang`]: the closed catalog of language representations with exact
//!   membership/subset/difference operations;
//! - [`transcript`] and [`query`]: the dialogue artifacts — positive-example
//!   transcripts, counterexample sequences, and the query/response model;
//! - [`verifiers`]: the arbitrary, minimal, constant-bounded, and
//!   positive-bounded counterexample oracles plus the check-only simulation
//!   adapters;
//! - [`learners`]: finite-memory learners (Gold-style, chain, the two-phase
//!   positive-bounded learner, enumeration) and batch inference;
//! - [`engine`]: the dialogue driver with convergence detection, query
//!   metrics, memory audits, and the adversary search;
//! - [`families`]: generators for the language families behind the
//!   separation results;
//! - [`finite_lab`]: teaching dimension, VC dimension, minimum
//!   counterexample sets, and the set-cover reduction for finite classes;
//! - [`experiments`]: the runnable separation battery.
//!
//! Sweeps run data-parallel by default; disable the `parallel` feature for
//! a fully sequential build.

pub mod engine;
pub mod families;
pub mod finite_lab;
pub mod lang;
pub mod learners;
pub mod par;
pub mod query;
pub mod transcript;
pub mod verifiers;

pub mod experiments;

pub use engine::{run_cegis, RunConfig, RunResult};
pub use lang::{Example, Language};
pub use learners::LearnerSpec;
pub use transcript::{Transcript, TranscriptOrder};
pub use verifiers::{Strategy, VerifierKind};
