//! Command-line front end for `kabelian-core`.

pub mod args;
pub mod commands;
pub mod schema;

pub use args::Cli;
pub use commands::{run, Report};
