use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use drbem::verification::presets::Reproduction;
use drbem_cli::{cmd_check, cmd_reproduce, cmd_solve, config, CliError, EXIT_OK, EXIT_USAGE};

/// Dual reciprocity boundary element solver for 1D nonlinear parabolic PDEs.
///
/// Log verbosity is read from DRBEM_LOG (error, warn, info, debug, trace).
#[derive(Debug, Parser)]
#[command(name = "drbem", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the problem described by a configuration file.
    Solve {
        /// Configuration file (`key = value` lines).
        config: PathBuf,
    },
    /// Rerun a published error study and write it as CSV.
    Reproduce {
        /// table1, table2, table3 or fig5.
        #[arg(value_parser = parse_target)]
        target: Reproduction,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run the invariant self-test suite.
    Check,
}

fn parse_target(s: &str) -> Result<Reproduction, String> {
    s.parse().map_err(|e: drbem::Error| e.to_string())
}

/// Report lines go to stdout; a closed pipe (`drbem ... | head`) is not an
/// error worth failing the run for.
macro_rules! say {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Solve { config } => {
            let cfg = config::load_config(&config)?;
            let summary = cmd_solve(&cfg)?;
            for s in &summary.snapshots {
                match s.errors {
                    Some(e) => say!(
                        "t = {:<10} L_inf = {:.4e}  RMS = {:.4e}  {}",
                        s.t,
                        e.l_inf,
                        e.rms,
                        s.profile.display()
                    ),
                    None => say!("t = {:<10} {}", s.t, s.profile.display()),
                }
            }
            if let Some((path, distance)) = &summary.oracle {
                say!("oracle distance {distance:.4e}  {}", path.display());
            }
            say!("summary: {}", summary.summary_path.display());
        }
        Command::Reproduce { target, out } => {
            let summary = cmd_reproduce(target, &out)?;
            say!(
                "{target}: {} rows -> {}",
                summary.report.rows.len(),
                summary.path.display()
            );
        }
        Command::Check => {
            for c in cmd_check()? {
                say!(
                    "{} {:<48} {:.3e} <= {:.1e}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.threshold
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DRBEM_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("drbem: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
