//! Files, configuration and command-line front end for `qrisk-core`.

pub mod cli;
pub mod config;
mod error;
pub mod io;
pub mod report;
pub mod run;
pub mod svg;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use io::{load_prices, LoadedPanel};
pub use report::emit_report;
pub use run::{run, RunReport};
