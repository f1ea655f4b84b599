//! `cuapn`: differential analysis of C_u from the command line.
//!
//! Every subcommand prints one JSON document to standard output (or
//! `--out`). Diagnostics and progress go to standard error.
//!
//! Exit codes: 0 when a verdict was computed, 2 on usage errors, 3 when a
//! verification fails.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cuapn", version, about = "Differential analysis of C_u over GF(2^m)^3")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the JSON document here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Suppress progress and summaries on standard error.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Extension degree of GF(2^m).
    #[arg(long)]
    pub m: u32,
    /// Defining polynomial in hex, leading bit included (default: smallest irreducible).
    #[arg(long)]
    pub modulus: Option<String>,
    /// Parameter u in hex, or "auto" for the smallest non-seventh-power.
    #[arg(long, default_value = "auto")]
    pub u: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    None,
    SkipHFilter,
    SkipCurveFilter,
    PrintedA2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Field parameters and the resolved u.
    FieldInfo(FieldArgs),
    /// APN verdict from the exhaustive spectrum.
    ApnCheck(FieldArgs),
    /// Exhaustive kernel-dimension histogram.
    Spectrum(FieldArgs),
    /// Whether C_u is a bijection.
    Permutation(FieldArgs),
    /// Search for a difference with at least four solutions.
    Witness {
        #[command(flatten)]
        field: FieldArgs,
        /// Draw differences at random instead of scanning all of them.
        #[arg(long)]
        sampled: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        max_draws: u64,
    },
    /// Re-verify a certificate from a JSON file.
    VerifyCert {
        /// A certificate, or any output document that contains one.
        file: PathBuf,
    },
    /// Exact checks of the symbolic elimination chain.
    VerifyIdentities {
        /// Run only these checks (repeatable).
        #[arg(long = "check")]
        checks: Vec<String>,
        /// Also check the conditions on u for this field.
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        modulus: Option<String>,
        #[arg(long, default_value = "auto")]
        u: String,
    },
    /// Rational points of the surface with gamma = 1.
    Surface {
        #[command(flatten)]
        field: FieldArgs,
        /// Keep only points off the excluded lines and curve.
        #[arg(long)]
        filtered: bool,
        /// Include every kept point in the output.
        #[arg(long)]
        points: bool,
        /// Build a certificate from the first kept point.
        #[arg(long)]
        emit_witness: bool,
        /// Compare the point count with the Lang-Weil type band (m <= 6).
        #[arg(long)]
        band: bool,
        #[arg(long, default_value_t = 16)]
        delta: u32,
    },
    /// Compare the surface pipeline with the kernel pipeline.
    CrossValidate {
        #[command(flatten)]
        field: FieldArgs,
        /// Plant a defect to exercise the comparison.
        #[arg(long, value_enum, default_value = "none")]
        fault: FaultArg,
    },
    /// Exact evaluation of the point-count lower bound.
    Bound {
        #[arg(long, default_value_t = 16)]
        delta: u32,
        #[arg(long, default_value_t = 3)]
        m_from: u32,
        #[arg(long, default_value_t = 40)]
        m_to: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.exit_code())
        }
    }
}
