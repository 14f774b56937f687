use std::path::PathBuf;

use hhodge_core::series::DEFAULT_ORDER;
use hhodge_core::surface::MatrixMode;

use crate::error::{usage, Result};

/// Largest series order the CLI will compute.
pub const MAX_ORDER: usize = 120;

/// Settings shared by the subcommands, after command-line and environment
/// parsing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub order: usize,
    pub samples: u64,
    pub seed: u64,
    pub matrix_mode: MatrixMode,
    pub gamma_files: Vec<PathBuf>,
    pub gamma_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            order: DEFAULT_ORDER,
            samples: 200,
            seed: 0,
            matrix_mode: MatrixMode::Consistent,
            gamma_files: Vec::new(),
            gamma_dir: None,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_ORDER).contains(&self.order) {
            return Err(usage(format!("--order must lie in 2..={MAX_ORDER}")));
        }
        if self.samples == 0 {
            return Err(usage("--samples must be at least 1"));
        }
        Ok(())
    }
}
