//! Command-line front end: polynomial files, run configuration, and the
//! `prove`, `certify`, `scan`, `fem` and `check-certificate` commands.

pub mod commands;
pub mod config;
pub mod expr;

pub use config::RunConfig;
pub use expr::{parse_poly, print_poly};
