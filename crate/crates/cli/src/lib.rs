//! Document formats, report rendering, report validation and command
//! implementations for the `coxsplit` binary.

pub mod commands;
pub mod formats;
pub mod report;
pub mod validate;
