use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use lockdown_core::commands::{execute, Command};
use lockdown_core::config::RunConfig;
use lockdown_core::epidemic::Testing;
use lockdown_core::ethics::parse_criteria;
use lockdown_core::Error;

const EXIT_CONFIG: u8 = 1;
const EXIT_SOLVER: u8 = 2;

#[derive(Parser)]
#[command(
    name = "lockdown",
    version,
    about = "Optimal epidemic lockdown planner and welfare-criterion checks"
)]
struct Cli {
    /// key=value config file; omitted keys take their defaults
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (overrides `out_dir`)
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// RNG seed (overrides `seed`)
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Solve the planner's Bellman equation and export the value and policy fields
    Solve,
    /// Closed-loop trajectory from the initial state
    Simulate {
        /// 1: recovered people may work during lockdown, 0: no testing
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        tau: Option<u8>,
        /// Run without lockdown
        #[arg(long)]
        no_control: bool,
    },
    /// Axiom suite, property matrix and witness searches
    Ethics {
        /// Criteria separated by `|`, e.g. `clu:c=1|rdclu:beta=0.9,c=1`
        #[arg(long)]
        criterion: Option<String>,
        /// Random samples per axiom
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Re-solve the planner with a death cost derived from each criterion
    Sensitivity,
}

fn load(cli: &Cli) -> Result<RunConfig, Error> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    match &cli.command {
        Sub::Simulate { tau: Some(t), .. } => {
            cfg.params.testing = Testing::from_tau(*t).expect("clap restricts tau to 0..=1");
        }
        Sub::Ethics { criterion, samples } => {
            if let Some(spec) = criterion {
                cfg.criteria = parse_criteria(spec)?;
            }
            if let Some(n) = samples {
                cfg.samples = *n;
            }
        }
        _ => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NonConvergence { .. } | Error::NonFinite { .. } | Error::Integration { .. } => {
            EXIT_SOLVER
        }
        _ => EXIT_CONFIG,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let cfg = match load(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let cmd = match cli.command {
        Sub::Solve => Command::Solve,
        Sub::Simulate { no_control, .. } => Command::Simulate { no_control },
        Sub::Ethics { .. } => Command::Ethics,
        Sub::Sensitivity => Command::Sensitivity,
    };
    let started = Instant::now();
    match execute(&cfg, cmd) {
        Ok(outcome) => {
            for path in &outcome.files {
                println!("{}", path.display());
            }
            eprintln!("{} finished in {:.2?}", cmd.name(), started.elapsed());
            if outcome.row_failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                for f in &outcome.row_failures {
                    eprintln!("row failed: {f}");
                }
                ExitCode::from(EXIT_SOLVER)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
