use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use maeda::certify::{SearchMode, DEFAULT_PRIME_BOUND};
use maeda::cli::{cmd_check, cmd_density, cmd_stats, cmd_verify, RunConfig};

#[derive(Parser)]
#[command(
    name = "maeda",
    version,
    about = "Multimodular verification of Maeda's conjecture for T_2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Random,
    Consecutive,
}

#[derive(Subcommand)]
enum Command {
    /// Search for witness primes for every even weight in a range.
    Verify {
        #[arg(long = "from")]
        from: u32,
        #[arg(long = "to")]
        to: u32,
        #[arg(long, value_enum, default_value = "random")]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Primes are drawn below this bound (at most 2^20).
        #[arg(long, default_value_t = DEFAULT_PRIME_BOUND)]
        bound: u64,
        /// Worker threads; weights are distributed across them.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, env = "MAEDA_OUT")]
        out: PathBuf,
        /// Keep existing certificates produced with the same settings.
        #[arg(long)]
        resume: bool,
        /// Write duration_ms = 0 so reruns are byte-identical.
        #[arg(long)]
        no_timing: bool,
        /// Cap on primes drawn per weight (default 100·d).
        #[arg(long)]
        max_trials: Option<u64>,
        /// Also evaluate batches of primes concurrently within one weight.
        #[arg(long)]
        parallel_primes: bool,
    },
    /// Re-verify every certificate in a directory.
    Check { dir: PathBuf },
    /// Compute N/E statistics and histograms from certificates.
    Stats {
        dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate the witness-type densities for a range of dimensions.
    Density {
        #[arg(long = "from")]
        from: usize,
        #[arg(long = "to")]
        to: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    let code = match cli.command {
        Command::Verify {
            from,
            to,
            mode,
            seed,
            bound,
            jobs,
            out,
            resume,
            no_timing,
            max_trials,
            parallel_primes,
        } => {
            let mut cfg = RunConfig::new(from, to, out);
            cfg.mode = match mode {
                Mode::Random => SearchMode::Random,
                Mode::Consecutive => SearchMode::Consecutive,
            };
            cfg.seed = seed;
            cfg.bound = bound;
            cfg.jobs =
                jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            cfg.resume = resume;
            cfg.record_timing = !no_timing;
            cfg.max_trials = max_trials;
            cfg.parallel_primes = parallel_primes;
            cmd_verify(&cfg, &mut stdout)
        }
        Command::Check { dir } => cmd_check(&dir, &mut stdout),
        Command::Stats { dir, out } => cmd_stats(&dir, &out, &mut stdout),
        Command::Density { from, to } => cmd_density(from, to, &mut stdout),
    };
    ExitCode::from(code as u8)
}
