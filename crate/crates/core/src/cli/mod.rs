//! Command-line front end: flag and config-file resolution, the six
//! subcommands, and the exit-code map (2 input, 3 convergence, 4 singularity,
//! 1 for a failed `verify`).

mod commands;
mod config;
mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};

pub use commands::{
    density_cmd, efp_finite_cmd, efp_thermo_cmd, partition_cmd, solve_bae_cmd, solve_roots, Output,
};
pub use config::{parse_config_text, read_config_file, CommandKind, Flags, RunConfig};
pub use verify::{run_verify, Check, VerifyReport};

use crate::error::{Error, ErrorKind, Result};

#[derive(Debug, Parser)]
#[command(name = "svdwbc", version, about = "Six-vertex model with domain wall boundaries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cross-check every closed formula against brute force (M <= 12).
    Verify(#[command(flatten)] Flags),
    /// Solve the Bethe equations; JSON with roots and residuals.
    SolveBae(#[command(flatten)] Flags),
    /// Partition function <N|R|N> by direct state algebra.
    Partition(#[command(flatten)] Flags),
    /// Finite-lattice emptiness formation probability.
    EfpFinite(#[command(flatten)] Flags),
    /// Thermodynamic root density; CSV.
    Density(#[command(flatten)] Flags),
    /// Multiple-integral emptiness formation probability.
    EfpThermo(#[command(flatten)] Flags),
}

impl Command {
    fn split(self) -> (CommandKind, Flags) {
        match self {
            Command::Verify(f) => (CommandKind::Verify, f),
            Command::SolveBae(f) => (CommandKind::SolveBae, f),
            Command::Partition(f) => (CommandKind::Partition, f),
            Command::EfpFinite(f) => (CommandKind::EfpFinite, f),
            Command::Density(f) => (CommandKind::Density, f),
            Command::EfpThermo(f) => (CommandKind::EfpThermo, f),
        }
    }
}

pub fn exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Input => 2,
        ErrorKind::Convergence => 3,
        ErrorKind::Singularity => 4,
    }
}

/// Resolves flags against the optional config file.
pub fn resolve(kind: CommandKind, flags: Flags) -> Result<RunConfig> {
    let flags = match flags.config.clone() {
        Some(path) => flags.merge_file(&read_config_file(&path)?)?,
        None => flags,
    };
    RunConfig::resolve(kind, &flags)
}

/// Executes a resolved configuration.
pub fn execute(cfg: &RunConfig) -> Result<Output> {
    let work = || match cfg.command {
        CommandKind::Verify => {
            let report = run_verify(cfg)?;
            let mut body = serde_json::to_string_pretty(&report).map_err(Error::io)?;
            body.push('\n');
            Ok(Output {
                body,
                success: report.all_pass,
            })
        }
        CommandKind::SolveBae => solve_bae_cmd(cfg),
        CommandKind::Partition => partition_cmd(cfg),
        CommandKind::EfpFinite => efp_finite_cmd(cfg),
        CommandKind::Density => density_cmd(cfg),
        CommandKind::EfpThermo => efp_thermo_cmd(cfg),
    };
    match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(Error::io)?
            .install(work),
        None => work(),
    }
}

fn write_output(cfg: &RunConfig, out: &Output) -> Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, &out.body)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(out.body.as_bytes())
            .map_err(Error::io),
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (kind, flags) = cli.command.split();
    let result = resolve(kind, flags).and_then(|cfg| {
        let out = execute(&cfg)?;
        write_output(&cfg, &out)?;
        Ok(out.success)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("svdwbc: verification failed");
            1
        }
        Err(e) => {
            eprintln!("svdwbc: {e}");
            exit_code(e.kind())
        }
    }
}
