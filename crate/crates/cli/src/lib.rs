//! Library half of the `comednet` binary: argument model, table rendering and
//! command dispatch, exposed so integration tests can drive commands in-process.

pub mod config;
pub mod run;
pub mod table;

pub use config::RunConfig;
pub use run::{dispatch, CliError};
pub use table::render_table;
