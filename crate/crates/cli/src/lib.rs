//! The `ghc` command-line front end, as a library so tests can drive it
//! in-process.

pub mod app;
pub mod error;
pub mod fixtures;
pub mod scenarios;

pub use app::{run, Outcome};
