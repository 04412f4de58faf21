//! File formats and command line for the splice-diagram calculus: the
//! line-oriented diagram DSL, deterministic JSON output, and the `graphlink`
//! binary driving the full pipeline.

pub mod cli;
pub mod dsl;
pub mod json;
