use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use shiftbribery::cli;

/// Workbench for multiwinner voting rules and shift-bribery campaigns.
#[derive(Parser)]
#[command(name = "shiftbribery", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Winner membership for every candidate under a committee rule
    Winners {
        /// Election file
        #[arg(long)]
        election: PathBuf,
        /// Rule: sntv | bloc | kborda | approval-cc:<t> | borda-cc |
        /// greedy-approval-cc:<t> | ptas-cc | greedy-borda-cc
        #[arg(long)]
        rule: String,
        /// Committee size
        #[arg(long)]
        k: usize,
    },
    /// Solve a shift-bribery instance; prints one JSON record
    Bribe {
        /// Instance file
        #[arg(long)]
        instance: PathBuf,
        /// auto | oracle | poly | subset | fptas | xp-voters | xp-shifts |
        /// ilp | kborda-unit
        #[arg(long, default_value = "auto")]
        strategy: String,
        /// Approximation parameter for fptas (e.g. 0.25 or 1/4)
        #[arg(long)]
        epsilon: Option<String>,
        /// Unit-shift bound for xp-shifts
        #[arg(long)]
        smax: Option<u64>,
    },
    /// Cross-validate every applicable solver against the oracle on seeded
    /// random instances
    Crosscheck {
        /// Comma-separated rule filter (default: all eight rules)
        #[arg(long)]
        rules: Option<String>,
        #[arg(long, default_value_t = 5)]
        m_max: usize,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value_t = 500)]
        trials: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Worker threads; output is identical for any value
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Generate a bribery instance from a graph or set-cover input
    Generate {
        /// mis | clique | setcover
        #[arg(long)]
        source: String,
        /// Graph file (`v/e/c` lines) or set-cover file (`u/s` lines)
        #[arg(long)]
        input: PathBuf,
        /// Solution size of the source problem
        #[arg(long)]
        h: usize,
        /// Approval threshold for setcover instances (>= 3)
        #[arg(long, default_value_t = 3)]
        t: usize,
    },
    /// Timing and node-count benchmarks
    Bench {
        /// minimal | default
        #[arg(long, default_value = "minimal")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        /// Emit JSON lines instead of the plain table
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let parsed = Cli::parse();
    let code = match parsed.command {
        Command::Winners { election, rule, k } => cli::cmd_winners(&election, &rule, k),
        Command::Bribe {
            instance,
            strategy,
            epsilon,
            smax,
        } => cli::cmd_bribe(&instance, &strategy, epsilon.as_deref(), smax),
        Command::Crosscheck {
            rules,
            m_max,
            n_max,
            trials,
            seed,
            jobs,
        } => cli::cmd_crosscheck(rules.as_deref(), m_max, n_max, trials, seed, jobs),
        Command::Generate {
            source,
            input,
            h,
            t,
        } => cli::cmd_generate(&source, &input, h, t),
        Command::Bench {
            suite,
            repeat,
            json,
        } => cli::cmd_bench(&suite, repeat, json),
    };
    ExitCode::from(code as u8)
}
