//! Deterministic discrete-event simulator for semantics-driven network slicing.
//!
//! Semantic events are distilled into tasks, tasks into service classes and
//! resource demands, and four provisioning policies are compared on one
//! shared resource pool.

#![recursion_limit = "256"]

pub mod catalog;
pub mod semantic;
pub mod slice;
pub mod baselines;
pub mod orchestrator;
pub mod policy;
pub mod engine;
