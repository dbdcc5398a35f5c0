use std::io::Write;
use std::process::ExitCode;

use cellint_cli::{
    cmd_oracle, cmd_verify, cmd_xi, env_budget, parse_count, CliError, OracleArgs, OracleMethod, RunReport,
    Suite, VerifyOptions, XiFormat, DEFAULT_CUTOFF, DEFAULT_SAMPLES, QUICK_CUTOFF, QUICK_SAMPLES,
};
use clap::{Args, Parser, Subcommand};

/// Cellular integrals xi_l: exact values, numerical oracles and verification suites.
#[derive(Parser)]
#[command(name = "cellint", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Print the report as JSON.
    #[arg(long, global = true, conflicts_with = "tsv")]
    json: bool,
    /// Print the checks as tab-separated values.
    #[arg(long, global = true)]
    tsv: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute xi_l as a psi-polynomial, an MZV combination or a number.
    Xi {
        #[arg(long)]
        l: usize,
        #[arg(long, value_enum, default_value = "psi")]
        format: XiFormat,
        /// Absolute tolerance for the numeric format.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Override the largest accepted l.
        #[arg(long)]
        max_l: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Run verification suites; exits 1 if any gating check fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long)]
        lmax: Option<usize>,
        /// Smaller budgets and fewer cases.
        #[arg(long)]
        quick: bool,
        /// Monte Carlo samples (default CELLINT_MC_SAMPLES or 1e7, 1e6 with --quick).
        #[arg(long, value_parser = parse_count)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Series cutoff (default CELLINT_SERIES_CUTOFF or 20000, 5000 with --quick).
        #[arg(long, value_parser = parse_count)]
        cutoff: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Evaluate xi_l or the Zlobin integral with an independent oracle.
    Oracle {
        #[arg(long)]
        l: usize,
        #[arg(long, value_enum, default_value = "series")]
        method: OracleMethod,
        /// Integrate x_l^(l-2) / prod(1 - x_j x_l) instead of xi_l.
        #[arg(long)]
        zlobin: bool,
        #[arg(long, value_parser = parse_count)]
        cutoff: Option<u64>,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long, value_parser = parse_count)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

fn emit(r: &RunReport, out: &Output) {
    let text = if out.json {
        r.to_json() + "\n"
    } else if out.tsv {
        r.to_tsv()
    } else {
        r.to_table()
    };
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn run(cli: Cli) -> Result<(RunReport, Output), CliError> {
    match cli.command {
        Command::Xi { l, format, tol, max_l, out } => Ok((cmd_xi(l, format, tol, max_l)?, out)),
        Command::Verify { suite, lmax, quick, samples, seed, cutoff, out } => {
            let (s0, c0) =
                if quick { (QUICK_SAMPLES, QUICK_CUTOFF) } else { (DEFAULT_SAMPLES, DEFAULT_CUTOFF) };
            let samples = match samples {
                Some(s) => s,
                None => env_budget("CELLINT_MC_SAMPLES", s0)?,
            };
            let cutoff = match cutoff {
                Some(c) => c,
                None => env_budget("CELLINT_SERIES_CUTOFF", c0 as u64)?,
            };
            if samples < 10_000 {
                return Err(CliError::Usage(format!("{samples} samples is below the minimum of 10000")));
            }
            if cutoff < 16 {
                return Err(CliError::Usage(format!("cutoff {cutoff} is below the minimum of 16")));
            }
            let o = VerifyOptions { lmax, quick, samples, seed, cutoff: cutoff as usize };
            Ok((cmd_verify(suite, &o), out))
        }
        Command::Oracle { l, method, zlobin, cutoff, levels, samples, seed, out } => {
            let cutoff = match cutoff {
                Some(c) => c,
                None => env_budget("CELLINT_SERIES_CUTOFF", DEFAULT_CUTOFF as u64)?,
            };
            let samples = match samples {
                Some(s) => s,
                None => env_budget("CELLINT_MC_SAMPLES", DEFAULT_SAMPLES)?,
            };
            let args = OracleArgs { l, method, zlobin, cutoff: cutoff as usize, levels, samples, seed };
            Ok((cmd_oracle(&args)?, out))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok((report, out)) => {
            emit(&report, &out);
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
