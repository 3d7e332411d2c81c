use std::fs;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use spatial_game::io::{
    cmd_boundary_drift, cmd_classify, cmd_ctable, cmd_replicator, cmd_simulate, cmd_sweep,
    parse_config, CommandError, RunConfig,
};

/// Environment variable holding the number of worker threads. Unset means
/// one worker per logical core.
const THREADS_VAR: &str = "SPATIAL_GAME_THREADS";

#[derive(Parser)]
#[command(name = "spatial-game", version, about = "Spatial evolutionary games on the torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration (`key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Overrides `sim.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the spatial game and write observables over time.
    Simulate,
    /// Integrate the replicator equation.
    Replicator,
    /// Sweep a grid of (a11, a22) and classify every cell.
    Sweep,
    /// Print predicates, regimes and the game class of one matrix.
    Classify,
    /// Print the coexistence-triangle slope for a range of M and d.
    Ctable {
        /// Largest range; defaults to `ctable.M_max` or 9.
        #[arg(long)]
        max_range: Option<usize>,
        /// Largest dimension; defaults to `ctable.d_max` or 9.
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Estimate the drift of a half-space interface.
    BoundaryDrift,
}

fn load(path: Option<&PathBuf>, seed: Option<u64>) -> Result<RunConfig, (u8, String)> {
    let path = path.ok_or((2, "this command needs --config <path>".to_string()))?;
    let text = fs::read_to_string(path)
        .map_err(|e| (3, format!("cannot read {}: {e}", path.display())))?;
    let mut cfg = parse_config(&text).map_err(|e| (2, format!("{}: {e}", path.display())))?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn configure_threads() -> Result<(), (u8, String)> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or((2, format!("{THREADS_VAR} must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| (3, e.to_string()))
}

fn run(cli: Cli) -> Result<(), (u8, String)> {
    configure_threads()?;
    let mut stdout = io::stdout().lock();
    let fail = |e: CommandError| (e.exit_code() as u8, e.to_string());
    match cli.command {
        Command::Ctable { max_range, max_dim } => {
            let (default_range, default_dim) = match &cli.config {
                Some(_) => {
                    let cfg = load(cli.config.as_ref(), cli.seed)?;
                    (cfg.ctable_range, cfg.ctable_dim)
                }
                None => (9, 9),
            };
            let (range, dim) = (max_range.unwrap_or(default_range), max_dim.unwrap_or(default_dim));
            if range == 0 || dim == 0 {
                return Err((2, "--max-range and --max-dim must be at least 1".into()));
            }
            cmd_ctable(range, dim, Some(&cli.out), &mut stdout).map_err(fail)
        }
        command => {
            let cfg = load(cli.config.as_ref(), cli.seed)?;
            match command {
                Command::Simulate => cmd_simulate(&cfg, &cli.out, &mut stdout),
                Command::Replicator => cmd_replicator(&cfg, &cli.out, &mut stdout),
                Command::Sweep => cmd_sweep(&cfg, &cli.out, &mut stdout),
                Command::Classify => cmd_classify(&cfg, &mut stdout),
                Command::BoundaryDrift => cmd_boundary_drift(&cfg, &cli.out, &mut stdout),
                Command::Ctable { .. } => unreachable!(),
            }
            .map_err(fail)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
