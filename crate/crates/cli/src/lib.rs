//! Query parsing, the persistent cache and output formats of the `conic-floors` tool.

pub mod cache;
pub mod output;
pub mod query;
