//! Command-line front end: JSON inputs, dispatch to the analyses, and
//! deterministic JSON reports.

pub mod app;
pub mod format;
pub mod report;

pub use app::{run, Cli, Outcome};
