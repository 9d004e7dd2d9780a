use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ellipdiff::cli::{render, run_document, Command, Overrides};

/// Exact difference-equation toolkit over elliptic function fields.
///
/// Reads one JSON request `{"command": ..., "payload": ...}` (or, with a
/// COMMAND argument, a bare payload) and writes one JSON response.
/// Exit codes: 0 ok, 1 domain error, 2 schema error.
#[derive(Parser)]
#[command(name = "ellipdiff", version)]
struct Args {
    /// Treat the input as the payload of this command.
    command: Option<Command>,
    /// Input file (default: stdin).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Absolute tolerance (numeval only).
    #[arg(long)]
    tol: Option<f64>,
    /// Lattice rows summed on each side (numeval only).
    #[arg(long)]
    cutoff: Option<u32>,
    /// Truncation order, where the command has one.
    #[arg(long)]
    order: Option<i64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match &args.input {
        Some(p) => std::fs::read_to_string(p),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map(|_| s)
        }
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("ellipdiff: cannot read input: {e}");
            return ExitCode::from(2);
        }
    };
    let ov = Overrides {
        order: args.order,
        tol: args.tol,
        cutoff: args.cutoff,
    };
    let (resp, code) = run_document(&text, args.command, &ov);
    let out = render(&resp);
    let written = match &args.out {
        Some(p) => std::fs::write(p, out),
        None => {
            print!("{out}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("ellipdiff: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code as u8)
}
