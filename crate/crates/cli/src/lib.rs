//! Scenario files, the verification pipeline and its reports.

pub mod report;
pub mod runner;
pub mod scenario;
