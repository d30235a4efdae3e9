//! CLI laboratory around the core numerics: JSON wire formats, experiment
//! reports, randomized audits, and the selftest suites.

pub mod audit;
pub mod commands;
pub mod report;
pub mod schema;
pub mod selftest;
