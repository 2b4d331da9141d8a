//! Command-line front end for `quasinv-core`: polynomial and twist parsers,
//! JSON and CSV output, and parallel table scans.

pub mod app;
pub mod parse;
pub mod report;
pub mod scan;
