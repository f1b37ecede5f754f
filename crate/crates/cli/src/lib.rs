//! `phasenet` command-line front end.
//!
//! Reports go to standard output as `key: value` lines and diagnostics to
//! standard error. Exit status is 0 on success, 1 when a check fails and 2
//! for unusable input.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

mod commands;
pub mod format;
pub mod report;

pub use commands::CliError;

#[derive(Debug, Parser)]
#[command(name = "phasenet", version, about = "Compile and check programmable phase-shift networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct BackendArg {
    /// recursive-cnot, recursive-cns, gray or optimized
    #[arg(long, default_value = "recursive-cnot")]
    pub backend: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Program a template with a phase file and write the circuit.
    Compile {
        phases: PathBuf,
        #[command(flatten)]
        backend: BackendArg,
        /// path, ring or full; defaults to the backend's own coupling
        #[arg(long)]
        coupling: Option<String>,
        /// Use a template file instead of a built-in backend.
        #[arg(long, conflicts_with = "backend")]
        template: Option<PathBuf>,
        /// Expected qubit count; checked against the phase file.
        #[arg(short = 'n', long)]
        qubits: Option<usize>,
        #[arg(long)]
        include_global_phase: bool,
        /// Reduce rotation angles into (-pi, pi].
        #[arg(long)]
        normalize_angles: bool,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Check a circuit against a phase file up to global phase.
    Verify {
        circuit: PathBuf,
        phases: PathBuf,
        #[arg(long, default_value_t = phasenet::DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Run Deutsch-Jozsa on a truth table.
    Dj {
        truth: PathBuf,
        #[command(flatten)]
        backend: BackendArg,
        /// Accept functions that are neither constant nor balanced.
        #[arg(long)]
        lenient: bool,
    },
    /// Run Grover search for the marked basis states.
    Grover {
        #[arg(short = 'n', long)]
        qubits: usize,
        /// Comma-separated basis indices.
        #[arg(long, value_delimiter = ',', required = true)]
        marked: Vec<u32>,
        #[command(flatten)]
        backend: BackendArg,
        #[arg(long)]
        iterations: Option<usize>,
    },
    /// Build the controlled-NOT `|c, b> -> |c, b ^ h(c)>` for a truth table `h`.
    Gcx {
        truth: PathBuf,
        #[command(flatten)]
        backend: BackendArg,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Search for a template with few two-qubit blocks.
    Optimize {
        #[arg(short = 'n', long)]
        qubits: usize,
        #[arg(long, default_value = "path")]
        coupling: String,
        /// cnot or cns
        #[arg(long, default_value = "cnot")]
        gate_set: String,
        /// Limit on expanded search nodes.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Optional wall-clock limit in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Largest accepted register size (at most 6).
        #[arg(long, default_value_t = phasenet::optimize::DEFAULT_SEARCH_CAP)]
        cap: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Layer a circuit and report depth and two-qubit blocks.
    Schedule {
        circuit: PathBuf,
        #[arg(long, default_value = "full")]
        coupling: String,
        /// Write the layered circuit in layer order.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Phase error caused by rotation-angle errors.
    Sensitivity {
        #[arg(short = 'n', long)]
        qubits: usize,
        #[arg(long)]
        epsilon: f64,
        /// adversarial or random
        #[arg(long, default_value = "adversarial")]
        mode: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match commands::dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
