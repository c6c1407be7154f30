//! Generalized planning by heuristic search over structured programs.
//!
//! A [`program::Program`] is a short list of pointer steps, action calls,
//! conditionals and bounded loops. Executed on a planning instance it induces
//! a sequential plan without grounding. [`synthesis::synthesize`] searches for
//! a program that solves every instance of a [`model::GpProblem`];
//! [`analysis`] certifies termination and reports the program's complexity,
//! and [`codegen`] emits a standalone C++ validator.

pub mod analysis;
pub mod benchmarks;
pub mod codegen;
pub mod interpreter;
pub mod model;
pub mod program;
pub mod report;
pub mod sexpr;
pub mod synthesis;
