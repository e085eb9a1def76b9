//! Library surface of the command-line driver, exposed so integration
//! tests can parse and compare typed reports.

pub mod config;
pub mod report;
pub mod suites;
