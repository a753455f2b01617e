//! `symdist`: command-line access to bounds, code analysis, certificates,
//! sweeps, prime gaps, constructions and verification suites.
//!
//! Exit status: 0 computed, 2 usage, 3 resource guard, 4 bad input.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use symdist::ErrorKind;

#[derive(Parser)]
#[command(name = "symdist", version, about = "Exact tools for symmetric-distance codes")]
struct Cli {
    /// Emit the canonical JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Space {
    Johnson,
    Hamming,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum MetricArg {
    Auto,
    Hamming,
    Johnson,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Rule {
    Case1,
    Case21,
    Explicit,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Family {
    Ekr,
    Sylvester,
    HadamardCode,
    CodeHadamard,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Suite {
    Prop41,
    Rank2,
    Identities,
}

#[derive(Subcommand)]
enum Command {
    /// Size bound for a degree-s symmetric code and its multiplicity terms.
    Bound {
        #[arg(long, value_enum)]
        space: Space,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        s: u64,
    },
    /// Distance set, symmetry, bound and tightness of a code file.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        metric: MetricArg,
    },
    /// Certificate polynomial, its integral zeros and the verdict for (n, s).
    Certify {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        s: u64,
    },
    /// Integrality sweep over (s, r).
    Sweep {
        #[arg(long)]
        s_min: u64,
        #[arg(long)]
        s_max: u64,
        #[arg(long, value_enum, default_value = "case1")]
        rule: Rule,
        #[arg(long, required_if_eq("rule", "explicit"))]
        r_min: Option<u64>,
        #[arg(long, required_if_eq("rule", "explicit"))]
        r_max: Option<u64>,
        #[arg(long)]
        no_prefilter: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        ack_long_run: bool,
    },
    /// Smallest n with no prime in (n, n + s - 1], scanning up to --limit.
    Rho {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        limit: u64,
        /// Permit a limit above the default sieve ceiling.
        #[arg(long)]
        allow_above_ceiling: bool,
    },
    /// Emit a code or Hadamard matrix file.
    Construct {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, default_value_t = 1)]
        anchor: u64,
        #[arg(long)]
        k: Option<u32>,
        /// Input file for the conversions.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Write the file here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        max_n: Option<u64>,
    },
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Usage => 2,
        ErrorKind::Resource => 3,
        ErrorKind::Corruption => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Bound { space, n, s } => commands::bound(space, n, s),
        Command::Analyze { file, metric } => commands::analyze(&file, metric),
        Command::Certify { n, s } => commands::certify(n, s),
        Command::Sweep {
            s_min,
            s_max,
            rule,
            r_min,
            r_max,
            no_prefilter,
            jobs,
            checkpoint,
            ack_long_run,
        } => commands::sweep(commands::SweepArgs {
            s_min,
            s_max,
            rule,
            r_min,
            r_max,
            prefilter: !no_prefilter,
            jobs,
            checkpoint,
            ack_long_run,
        }),
        Command::Rho {
            s,
            limit,
            allow_above_ceiling,
        } => commands::rho(s, limit, allow_above_ceiling),
        Command::Construct {
            family,
            n,
            anchor,
            k,
            input,
            out,
        } => commands::construct(family, n, anchor, k, input.as_deref(), out.as_deref(), cli.json),
        Command::Verify { suite, max_n } => commands::verify(suite, max_n),
    };
    match outcome {
        Ok(commands::Output::Report(r)) => {
            print!("{}", if cli.json { r.to_json() } else { r.to_text() });
            ExitCode::SUCCESS
        }
        Ok(commands::Output::Raw(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, symdist::Error::LongRunNotAcknowledged { .. }) {
                eprintln!("hint: rerun with --ack-long-run to accept the runtime");
            }
            ExitCode::from(exit_code(e.kind()))
        }
    }
}
