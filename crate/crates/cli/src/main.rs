//! `lotto`: exact lottery probabilities, design verification and construction.
//!
//! Exit codes: 0 success, 1 invalid input or domain error (including a
//! design that fails verification), 2 usage error, 3 resource cap exceeded.
//! Errors go to standard error as `error[<kind>]: <message>`.

mod commands;
mod render;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lotto_core::{Error, Scheme};

use crate::render::Format;

#[derive(Parser, Debug)]
#[command(name = "lotto", version, about = "Exact lottery probabilities and covering/lottery designs")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Decimal places for percentages.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(0..=12), global = true)]
    pub decimals: u32,
    /// Worker threads for verification, construction and simulation; 0 = all cores.
    #[arg(long, default_value_t = 0, global = true)]
    pub workers: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Hit probabilities for single tickets and portfolios.
    #[command(subcommand)]
    Prob(ProbCommand),
    /// Covering and lottery designs.
    #[command(subcommand)]
    Design(DesignCommand),
    /// The cost of restricting picks to a pool of favourite numbers.
    #[command(subcommand)]
    Myth(MythCommand),
    /// Monte Carlo estimate of a portfolio event, with its closed form.
    Simulate(SimulateArgs),
    /// Designs against the same number of random tickets.
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Subcommand, Debug)]
pub enum ProbCommand {
    /// Tickets and probability for every hit count.
    Spectrum {
        #[arg(long, default_value = "49,6,6,5")]
        scheme: Scheme,
    },
    /// Portfolio of v tickets: at least one high hit, jackpot, and optional extras.
    Portfolio(PortfolioArgs),
    /// Exact no-high-hit probability against the two power approximations.
    ApproxCompare {
        #[arg(long, default_value = "49,6,6,5")]
        scheme: Scheme,
        /// Ticket counts to compare.
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000,142361,325205")]
        tickets: Vec<u64>,
    },
}

#[derive(Args, Debug)]
pub struct PortfolioArgs {
    #[arg(long, default_value = "49,6,6,5")]
    pub scheme: Scheme,
    /// Number of tickets v.
    #[arg(long, short = 'v')]
    pub tickets: u64,
    /// Pairwise distinct tickets (default).
    #[arg(long, conflicts_with = "doubles")]
    pub unique: bool,
    /// Independently drawn tickets, doubles allowed.
    #[arg(long)]
    pub doubles: bool,
    /// Also report at least this many high-hit tickets.
    #[arg(long)]
    pub at_least: Option<u64>,
    /// Also report exactly `--count` tickets with this many hits.
    #[arg(long, requires = "count")]
    pub exact_hits: Option<u32>,
    #[arg(long, requires = "exact_hits")]
    pub count: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Covering,
    Lottery,
}

#[derive(Subcommand, Debug)]
pub enum DesignCommand {
    /// Check that a design file covers every target.
    Verify(VerifyArgs),
    /// Schonheim lower bound on the size of an (n, k, t) covering.
    Schonheim {
        #[arg(short)]
        n: u32,
        #[arg(short)]
        k: u32,
        #[arg(short)]
        t: u32,
    },
    /// Build an (n, k, t) covering greedily.
    Greedy(GreedyArgs),
    /// Write all k-subsets of 1..n in colex order.
    Enumerate {
        #[arg(short)]
        n: u32,
        #[arg(short)]
        k: u32,
        /// Refuse to build more blocks than this.
        #[arg(long, default_value_t = lotto_core::design::DEFAULT_ENUMERATION_CAP)]
        cap: u64,
        /// Write the design here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Design file; `-` reads standard input.
    pub file: PathBuf,
    /// Expected design kind; the header must match.
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Header for files without one: `n,k,t` or `n,k,p,t`.
    #[arg(long, value_delimiter = ',')]
    pub header: Option<Vec<u32>>,
    /// Uncovered targets to list.
    #[arg(long, default_value_t = 10)]
    pub witnesses: usize,
    /// Largest bit array to allocate.
    #[arg(long, default_value_t = 1 << 31)]
    pub memory_cap_bits: u64,
    /// Largest subset-by-block product for the brute-force lottery path.
    #[arg(long, default_value_t = 1 << 36)]
    pub work_cap: u64,
}

#[derive(Args, Debug)]
pub struct GreedyArgs {
    #[arg(short)]
    pub n: u32,
    #[arg(short)]
    pub k: u32,
    #[arg(short)]
    pub t: u32,
    /// Draw this many random candidates per round instead of trying all C(n, k).
    #[arg(long)]
    pub sampled: Option<u32>,
    /// Seed for sampled candidates.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Give up after this many blocks (default C(n, t)).
    #[arg(long)]
    pub max_blocks: Option<u64>,
    /// Write the design here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// No progress lines on standard error.
    #[arg(long, short)]
    pub quiet: bool,
}

#[derive(Subcommand, Debug)]
pub enum MythCommand {
    /// Buying every ticket inside a pool of n* numbers against the same budget over the field.
    Pool {
        #[arg(long, default_value = "49,6,6,5")]
        scheme: Scheme,
        #[arg(long = "nstar")]
        n_star: u32,
    },
    /// A covering design of the pool against the same number of tickets over the field.
    Compare {
        #[arg(long, default_value = "49,6,6,5")]
        scheme: Scheme,
        #[arg(long = "nstar")]
        n_star: u32,
        /// Blocks in the pool's covering design (defaults: 50 for n* = 10, 9,321 for n* = 25).
        #[arg(long)]
        cover_size: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TargetKind {
    AtLeastOne,
    Jackpot,
    AtLeast,
    ExactHits,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, default_value = "49,6,6,5")]
    pub scheme: Scheme,
    #[arg(long, short = 'v')]
    pub tickets: u64,
    #[arg(long)]
    pub doubles: bool,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = TargetKind::AtLeastOne)]
    pub target: TargetKind,
    /// s for `--target at-least`.
    #[arg(long, default_value_t = 1)]
    pub s: u64,
    /// Hit count for `--target exact-hits`.
    #[arg(long, default_value_t = 0)]
    pub hits: u32,
    /// Ticket count m for `--target exact-hits`.
    #[arg(long, default_value_t = 1)]
    pub m: u64,
}

#[derive(Subcommand, Debug)]
pub enum BenchCommand {
    /// Reference designs, or the given ones, against random distinct tickets.
    DesignVsRandom {
        /// Design files to verify and benchmark; without any, the reference table is printed.
        designs: Vec<PathBuf>,
        #[arg(long, default_value = "49,6,6,5")]
        scheme: Scheme,
        /// Benchmark a block count without a file.
        #[arg(long, conflicts_with = "designs")]
        blocks: Option<u64>,
        #[arg(long, value_enum, default_value_t = KindArg::Lottery, requires = "blocks")]
        kind: KindArg,
    },
}

/// Command failure with its exit code.
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Invalid(_) => (1, "invalid"),
            Error::Domain(_) => (1, "domain"),
            Error::Unsupported(_) => (1, "unsupported"),
            Error::Parse(_) => (1, "parse"),
            Error::Construction { .. } => (1, "construction"),
            Error::Io(_) => (1, "io"),
            Error::Resource(_) => (3, "resource"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::from(Error::Io(e))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match commands::run(&cli, &mut out).and_then(|()| out.flush().map_err(Failure::from)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = out.flush();
            eprintln!("error[{}]: {}", f.kind, f.message);
            ExitCode::from(f.code)
        }
    }
}
