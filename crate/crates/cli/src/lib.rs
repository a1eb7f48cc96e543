//! Command-line front end for `ncl-core`: parsing instance and graph files,
//! running solvers and reductions, and exporting results.

mod app;
pub mod dot;

pub use app::{run, Cli, Command, DEFAULT_LIMIT_L, EXIT_LIMIT, EXIT_NO, EXIT_USAGE, EXIT_YES};
