mod commands;
mod input;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use knotink::{MoveKind, DEFAULT_DEPTH};

use commands::{Format, Report, Settings};

#[derive(Parser)]
#[command(name = "knotink", version, about = "Invariants of virtual, flat and free knots given by Gauss codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Writhe, α, β, γ and their polynomials for virtual codes.
    Invariants(Common),
    /// The η invariant (or its iterate η^j) of flat or free codes and long links.
    Eta {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        j: usize,
    },
    /// Canonical key after reduction.
    Canon(Common),
    /// Random Reidemeister walks, checking that invariants are unchanged.
    Fuzz {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Walks per input line; walk k uses seed + k.
        #[arg(long, default_value_t = 1)]
        walks: usize,
        /// Comma-separated move kinds, e.g. R1-insert,R3.
        #[arg(long, value_delimiter = ',', default_value = "R1-insert,R1-delete,R2-insert,R2-delete,R3")]
        kinds: Vec<MoveKind>,
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Invariants of many virtual codes with a distinguishing summary.
    Batch(Common),
}

#[derive(Args)]
struct Common {
    /// File with one code per line, or - for standard input.
    input: Option<String>,
    /// A single code given inline.
    #[arg(long, conflicts_with = "input")]
    code: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Search depth of the reduction used for canonical keys.
    #[arg(long, env = "KNOTINK_DEPTH", default_value_t = DEFAULT_DEPTH)]
    depth: usize,
}

impl Common {
    fn source(&self) -> Result<String> {
        match (&self.code, &self.input) {
            (Some(c), _) => Ok(c.clone()),
            (None, Some(path)) => input::read_source(path),
            (None, None) => bail!("give an input file, - for standard input, or --code"),
        }
    }

    fn settings(&self) -> Settings {
        Settings {
            format: self.format,
            depth: self.depth,
            seed: 0,
            steps: 0,
            j: 1,
            kinds: MoveKind::ALL.to_vec(),
            walks: 1,
            corrupt: false,
        }
    }
}

fn run(cli: Cli) -> Result<Report> {
    let (common, settings, command): (&Common, Settings, fn(&[input::Line], &Settings) -> Report) = match &cli.command {
        Command::Invariants(c) => (c, c.settings(), commands::invariants),
        Command::Eta { common, j } => {
            if *j == 0 {
                bail!("--j must be at least 1");
            }
            (common, Settings { j: *j, ..common.settings() }, commands::eta)
        }
        Command::Canon(c) => (c, c.settings(), commands::canon),
        Command::Fuzz { common, seed, steps, walks, kinds, corrupt } => {
            let s = Settings {
                seed: *seed,
                steps: *steps,
                walks: *walks,
                kinds: kinds.clone(),
                corrupt: *corrupt,
                ..common.settings()
            };
            (common, s, commands::fuzz)
        }
        Command::Batch(c) => (c, c.settings(), commands::batch),
    };
    let source = common.source()?;
    Ok(command(&input::lines(&source), &settings))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(report.out.as_bytes());
    let _ = out.flush();
    for msg in report.notes.iter().chain(&report.errors) {
        eprintln!("{msg}");
    }
    if !report.errors.is_empty() {
        ExitCode::from(2)
    } else if report.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
