use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use nca_cli::{emit_report, exit, parse_pairs, parse_times, run_command, Command, Flags, Format, ProblemSpec};

/// Verify noncommutative resistance network problems.
#[derive(Parser, Debug)]
#[command(name = "nca", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Problem file, or `-` for standard input.
    spec: PathBuf,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol_pos: Option<f64>,
    #[arg(long)]
    tol_rank: Option<f64>,
    #[arg(long)]
    tol_eq: Option<f64>,
    /// Comma-separated times, e.g. `0,0.1,1`.
    #[arg(long = "t", value_parser = parse_times)]
    times: Option<::std::vec::Vec<f64>>,
    /// Comma-separated index pairs, e.g. `0:1,1:2`.
    #[arg(long, value_parser = parse_pairs)]
    pairs: Option<::std::vec::Vec<(usize, usize)>>,
}

fn read_spec(path: &PathBuf) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match read_spec(&cli.spec) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.spec.display());
            return ExitCode::from(exit::INPUT_ERROR);
        }
    };
    let spec = match ProblemSpec::parse(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: invalid problem spec\n{e}");
            return ExitCode::from(exit::INPUT_ERROR);
        }
    };
    for w in &spec.warnings {
        eprintln!("warning: {w}");
    }
    for (name, tol) in [("--tol-pos", cli.tol_pos), ("--tol-rank", cli.tol_rank), ("--tol-eq", cli.tol_eq)] {
        if tol.is_some_and(|t| !(t.is_finite() && t >= 0.0)) {
            eprintln!("error: {name} must be a nonnegative number");
            return ExitCode::from(exit::INPUT_ERROR);
        }
    }
    let flags = Flags {
        seed: cli.seed,
        tol_pos: cli.tol_pos,
        tol_rank: cli.tol_rank,
        tol_eq: cli.tol_eq,
        times: cli.times.clone(),
        pairs: cli.pairs.clone(),
    };
    let report = match run_command(cli.command, &spec, &flags) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit::INPUT_ERROR);
        }
    };
    let format = if cli.json { Format::Json } else { Format::Human };
    print!("{}", emit_report(&report, format));
    ExitCode::from(if report.passed() { exit::PASS } else { exit::VIOLATED })
}
