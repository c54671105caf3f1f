//! Enumeration of minimal unsatisfiable cores (MUCs) of LTLf specifications.
//!
//! A specification is a list of conjuncts. For a depth `k`, a
//! [`probe::Probe`] answers "do these conjuncts have a model of length at
//! most `k`?" for any subset of conjuncts. Minimal unsatisfiable subsets of
//! the probe are candidate cores; each candidate is certified with the
//! complete satisfiability check in [`oracle`], and the depth grows whenever
//! a candidate turns out to be satisfiable by a longer trace.

pub mod engine;
pub mod error;
pub mod limits;
pub mod mus;
pub mod oracle;
pub mod probe;
pub mod sat;
pub mod syntax;

pub use engine::{
    enumerate_k_mucs, enumerate_mucs, find_one_muc, CandidateStatus, EngineConfig, Event, MucReport, MucStream,
    RunSummary,
};
pub use error::{Error, Result};
pub use limits::Limits;
pub use oracle::{check_satisfiability, LtlfOracle, SatOutcome};
pub use probe::{build_probe, export_asp_facts, Probe, ProbeConfig, ProbeResult};
pub use syntax::{
    evaluate, parse, split_conjunctive, ConjunctiveSpec, Formula, SelectorSet, SplitMode, Trace,
};
