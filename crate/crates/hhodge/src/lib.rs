//! File formats, the batch verifier and the command implementations for
//! `hhodge-core`.

pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod gamma_io;
pub mod sample;
pub mod verify;

pub use cache::{CoeffCache, SolvedSystem};
pub use config::Config;
pub use error::{CliError, Result};
