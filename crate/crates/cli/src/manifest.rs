use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::Duration;

use chialvo_core::Error;
use serde::{Deserialize, Serialize};

use crate::args::Cli;

/// Everything needed to regenerate one output file.
#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    /// Command line as typed.
    pub argv: Vec<String>,
    /// Parsed arguments with every default filled in.
    pub cli: Cli,
    pub output: PathBuf,
    pub rows: usize,
    pub wall_time_s: f64,
}

impl Manifest {
    pub fn new(cli: &Cli, argv: Vec<String>, output: &Path, rows: usize, wall: Duration) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: cli.command.name().to_string(),
            argv,
            cli: cli.clone(),
            output: output.to_path_buf(),
            rows,
            wall_time_s: wall.as_secs_f64(),
        }
    }

    /// `<output>.manifest.json`
    pub fn path_for(output: &Path) -> PathBuf {
        let mut s = output.as_os_str().to_owned();
        s.push(".manifest.json");
        PathBuf::from(s)
    }

    pub fn save(&self, path: &Path) -> Result<(), Error> {
        let file = File::create(path)?;
        serde_json::to_writer_pretty(file, self)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let file = File::open(path)?;
        Ok(serde_json::from_reader(BufReader::new(file))?)
    }
}
