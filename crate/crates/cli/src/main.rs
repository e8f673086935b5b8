mod args;
mod manifest;
mod run;

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use chialvo_core::table::Format;
use clap::Parser;

use args::{Cli, Command};
use manifest::Manifest;
use run::CliError;

/// Environment variable naming the default output directory.
const OUT_DIR_VAR: &str = "CHIALVO_OUT_DIR";

fn output_path(cli: &Cli) -> PathBuf {
    if let Some(p) = &cli.global.out {
        return p.clone();
    }
    let format: Format = cli.global.format.into();
    let file = format!("{}.{}", cli.command.name(), format.extension());
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(file),
        _ => PathBuf::from(file),
    }
}

fn execute(cli: Cli, argv: Vec<String>) -> Result<PathBuf, CliError> {
    let cli = match &cli.command {
        Command::Replay { manifest } => {
            let recorded = Manifest::load(manifest)?;
            let mut replayed = recorded.cli;
            // An explicit --out on the replay wins over the recorded path.
            if cli.global.out.is_some() {
                replayed.global.out = cli.global.out.clone();
            } else {
                replayed.global.out = Some(recorded.output);
            }
            return execute(replayed, recorded.argv);
        }
        _ => cli,
    };

    let out = output_path(&cli);
    let started = Instant::now();
    let table = run::build(&cli.command, &cli.global)?;

    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(chialvo_core::Error::from)?;
    }
    let file = File::create(&out).map_err(chialvo_core::Error::from)?;
    table.write(cli.global.format.into(), BufWriter::new(file))?;

    let manifest = Manifest::new(&cli, argv, &out, table.len(), started.elapsed());
    manifest.save(&Manifest::path_for(&out))?;
    Ok(out)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap reports help and version requests as errors with exit code 0.
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(cli, argv) {
        Ok(out) => {
            println!("{}", out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
