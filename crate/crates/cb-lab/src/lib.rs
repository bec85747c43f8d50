//! Harness around [`cb_core`]: named built-in scenarios, JSON scenario
//! files, and deterministic run reports.
//!
//! The pieces line up with the pipeline: [`file`] parses and compiles
//! scenario files, [`tasks`] resolves defaults and runs the checks,
//! [`report`] holds the result types and their text and JSON renderings.
//! The binary in `main.rs` is a thin argument layer over these; everything
//! it can do is callable as a library.

pub mod file;
pub mod report;
pub mod tasks;
