//! Library side of the `sigma` command line tool.

pub mod app;
pub mod claims;
pub mod suite;

pub use app::{run, Outcome};
