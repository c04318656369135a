use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use carmichael_core::carmichael::{GroverScope, Mode, QPolicy};
use carmichael_core::Error;
use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod output;

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "carmichael", version, about = "Carmichael certification and counting by exact simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    output: Format,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Sample,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScopeArg {
    CoprimeBranch,
    FullRegister,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factorisation, totient, Fermat and Rabin counts, classification.
    Facts { k: u64 },
    /// Repeated certification runs of a composite with a majority verdict.
    Certify {
        k: u64,
        #[arg(long = "P", default_value_t = 16)]
        p: usize,
        #[arg(long = "R", default_value_t = 2)]
        r: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = ScopeArg::CoprimeBranch)]
        scope: ScopeArg,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        reps: usize,
    },
    /// Counting estimates of the coprime bases failing Fermat's test.
    CountBases {
        k: u64,
        #[arg(long = "P", default_value_t = 16)]
        p: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        reps: usize,
    },
    /// Counting estimates of the Carmichael numbers below N.
    CountCarmichael {
        n: u64,
        #[arg(long = "Q", default_value_t = 128)]
        q: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        reps: usize,
    },
    /// Counting run with Q from the density exponent, set against the density bounds.
    Psw {
        n: u64,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        /// Fixed count-register size; by default Q = ceil(l(N)^(1 + eps/2 + delta + 0.05)).
        #[arg(long = "Q")]
        q: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        reps: usize,
    },
    /// Leakage factors and the aggregate correction norm below N.
    Bounds {
        n: u64,
        #[arg(long = "P", default_value_t = 16)]
        p: usize,
    },
    /// Carmichael numbers below N.
    Enumerate { n: u64 },
}

fn exit_code(e: &Error) -> u8 {
    if e.is_capacity() {
        3
    } else {
        2
    }
}

fn run(cli: &Cli) -> Result<output::Output, Error> {
    match cli.command {
        Command::Facts { k } => commands::facts(k),
        Command::Certify {
            k,
            p,
            r,
            mode,
            scope,
            seed,
            reps,
        } => {
            let mode = match mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Sample => Mode::Sample,
            };
            let scope = match scope {
                ScopeArg::CoprimeBranch => GroverScope::CoprimeBranch,
                ScopeArg::FullRegister => GroverScope::FullRegister,
            };
            commands::certify(k, p, r, mode, scope, seed, reps)
        }
        Command::CountBases { k, p, seed, reps } => commands::count_bases(k, p, seed, reps),
        Command::CountCarmichael { n, q, seed, reps } => commands::count_carmichael(n, q, seed, reps),
        Command::Psw {
            n,
            epsilon,
            delta,
            q,
            seed,
            reps,
        } => {
            let policy = q.map_or_else(QPolicy::default, QPolicy::Fixed);
            commands::psw(n, epsilon, delta, policy, seed, reps)
        }
        Command::Bounds { n, p } => commands::bounds(n, p),
        Command::Enumerate { n } => commands::enumerate(n),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let bytes = match out.render(cli.output) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &bytes),
        None => std::io::stdout().lock().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
