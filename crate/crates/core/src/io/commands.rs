//! The work behind each command-line subcommand.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::analysis::{
    c_factor, classify_game, generic_payoffs, in_coexistence_triangle, nearest_neighbor_win,
    nearest_neighbor_win_swapped, sweep_phase_diagram, voter_bound_win, voter_bound_win_swapped,
    SweepSpec,
};
use crate::boundary::{
    drift_closed_form, estimate_leftmost_drift, interface_drift_rate, BoundaryError, DriftEstimate,
    GapClass,
};
use crate::dynamics::{mu_bounds, run_ensemble, InitialCondition, SimError, SimParams, SnapshotPolicy};
use crate::meanfield::{
    integrate_replicator, interior_fixed_point, predicted_limit, replicator_regime,
    InteriorFixedPoint, ReplicatorError,
};

use super::config::{ConfigError, RunConfig};
use super::output::{ode_csv, spacetime_pgm, trajectory_csv, write_file, Csv, OutputError};

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Output(#[from] OutputError),
    #[error("replicate {replicate}: {source}")]
    Simulation { replicate: usize, source: SimError },
    #[error(transparent)]
    Boundary(BoundaryError),
    #[error(transparent)]
    Replicator(#[from] ReplicatorError),
    #[error("cannot write to standard output: {0}")]
    Stdout(#[from] std::io::Error),
}

impl CommandError {
    /// 2 for configuration problems, 3 for failures while running or writing.
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Config(_) => 2,
            CommandError::Boundary(
                BoundaryError::Dimension(_) | BoundaryError::Range(_) | BoundaryError::InitialCondition,
            ) => 2,
            _ => 3,
        }
    }
}

impl From<BoundaryError> for CommandError {
    fn from(e: BoundaryError) -> Self {
        match e {
            BoundaryError::Simulation { replicate, source } => {
                CommandError::Simulation { replicate, source }
            }
            other => CommandError::Boundary(other),
        }
    }
}

fn prepare_dir(out: &Path) -> Result<(), CommandError> {
    fs::create_dir_all(out).map_err(|source| {
        CommandError::Output(OutputError::Io {
            path: out.display().to_string(),
            source,
        })
    })
}

/// `name` itself for a single replicate, `stem-r<k>.ext` otherwise.
fn replicate_path(out: &Path, name: &str, replicate: usize, replicates: usize) -> PathBuf {
    if replicates == 1 {
        return out.join(name);
    }
    let path = Path::new(name);
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(name);
    let file = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}-r{replicate}.{ext}"),
        None => format!("{stem}-r{replicate}"),
    };
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => out.join(dir).join(file),
        _ => out.join(file),
    }
}

fn sim_params(cfg: &RunConfig) -> SimParams {
    SimParams::new(cfg.horizon, cfg.seed)
        .with_init(cfg.init.clone())
        .with_samples(cfg.sample_times())
        .with_snapshots(cfg.effective_snapshots())
}

/// Runs the configured ensemble and writes one time-series CSV per
/// replicate, an optional space-time image per replicate and
/// `fixation.csv` with the absorption record of every replicate.
pub fn cmd_simulate(cfg: &RunConfig, out: &Path, stdout: &mut impl Write) -> Result<(), CommandError> {
    prepare_dir(out)?;
    let spec = cfg.lattice();
    let params = sim_params(cfg);
    let results = run_ensemble(&spec, &cfg.payoff, &params, cfg.method, cfg.replicates);
    let csv_name = cfg.csv.as_deref().unwrap_or("timeseries.csv");
    let mut summary = Csv::new(&["replicate", "fixation_strategy", "fixation_time", "flips"]);
    for (r, result) in results.into_iter().enumerate() {
        let traj = result.map_err(|source| CommandError::Simulation { replicate: r, source })?;
        write_file(
            &replicate_path(out, csv_name, r, cfg.replicates),
            &trajectory_csv(&traj),
        )?;
        if let Some(pgm) = &cfg.pgm {
            write_file(
                &replicate_path(out, pgm, r, cfg.replicates),
                &spacetime_pgm(&traj)?,
            )?;
        }
        let (strategy, time) = match traj.fixation {
            Some(f) => (f.strategy.to_string(), f.time.to_string()),
            None => ("none".to_string(), String::new()),
        };
        writeln!(
            stdout,
            "replicate {r}: fixation {strategy}{} flips {} final density1 {}",
            if time.is_empty() { String::new() } else { format!(" at {time}") },
            traj.flips,
            traj.final_observables().density1
        )?;
        summary.row([r.to_string(), strategy, time, traj.flips.to_string()]);
    }
    write_file(&out.join("fixation.csv"), &summary.into_string())?;
    Ok(())
}

/// Integrates the replicator equation and reports its regime.
pub fn cmd_replicator(cfg: &RunConfig, out: &Path, stdout: &mut impl Write) -> Result<(), CommandError> {
    prepare_dir(out)?;
    let a = &cfg.payoff;
    let horizon = cfg.ode_horizon.unwrap_or(cfg.horizon);
    let traj = integrate_replicator(a, cfg.u0, horizon, cfg.ode_step)?;
    write_file(
        &out.join(cfg.csv.as_deref().unwrap_or("replicator.csv")),
        &ode_csv(&traj),
    )?;
    writeln!(stdout, "regime {}", replicator_regime(a).as_str())?;
    match interior_fixed_point(a) {
        InteriorFixedPoint::Inside(e) => writeln!(stdout, "interior fixed point {e}")?,
        InteriorFixedPoint::Outside(e) => writeln!(stdout, "interior fixed point {e} (outside (0, 1))")?,
        InteriorFixedPoint::Undefined => writeln!(stdout, "interior fixed point none")?,
    }
    if let Some(limit) = predicted_limit(a, cfg.u0) {
        writeln!(stdout, "predicted limit {limit}")?;
    }
    writeln!(stdout, "u1({horizon}) = {}", traj.final_value())?;
    Ok(())
}

fn flag(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

/// Evaluates the configured phase-diagram grid and writes `sweep.csv`.
pub fn cmd_sweep(cfg: &RunConfig, out: &Path, stdout: &mut impl Write) -> Result<(), CommandError> {
    let options = cfg.sweep.as_ref().ok_or(ConfigError::Missing("sweep.a11.min"))?;
    prepare_dir(out)?;
    let spec = SweepSpec {
        a12: cfg.payoff.a12(),
        a21: cfg.payoff.a21(),
        a11_values: options.a11.values(),
        a22_values: options.a22.values(),
        lattice: cfg.lattice(),
        params: SimParams::new(cfg.horizon, cfg.seed)
            .with_init(cfg.init.clone())
            .with_snapshots(SnapshotPolicy::None),
        replicates: cfg.replicates,
        method: cfg.method,
        m: options.m,
        thresholds: cfg.thresholds,
    };
    let rows = sweep_phase_diagram(&spec);
    let mut csv = Csv::new(&[
        "a11",
        "a22",
        "voter_win1",
        "voter_win2",
        "nearest_win1",
        "nearest_win2",
        "generic",
        "triangle",
        "replicator_regime",
        "outcome",
        "runs",
        "fixed1",
        "fixed2",
        "coexisting",
        "clustering",
        "error",
        "annotations",
    ]);
    let mut failures = 0;
    for row in &rows {
        let f = row.flags;
        let (outcome, counts) = match &row.outcome {
            Some(s) => (
                s.outcome.as_str().to_string(),
                [s.runs, s.fixed1, s.fixed2, s.coexisting, s.clustering].map(|c| c.to_string()),
            ),
            None => (String::new(), Default::default()),
        };
        if row.error.is_some() {
            failures += 1;
        }
        let mut cells = vec![
            row.a11.to_string(),
            row.a22.to_string(),
            flag(f.voter_win1),
            flag(f.voter_win2),
            flag(f.nearest_win1),
            flag(f.nearest_win2),
            flag(f.generic),
            flag(f.triangle),
            row.regime.as_str().to_string(),
            outcome,
        ];
        cells.extend(counts);
        cells.push(row.error.clone().unwrap_or_default());
        cells.push(row.annotations.join(";"));
        csv.row(cells);
    }
    write_file(&out.join(cfg.csv.as_deref().unwrap_or("sweep.csv")), &csv.into_string())?;
    writeln!(stdout, "{} cells, {failures} with errors", rows.len())?;
    Ok(())
}

/// Prints every predicate, the replicator regime and the game class of the
/// configured matrix.
pub fn cmd_classify(cfg: &RunConfig, stdout: &mut impl Write) -> Result<(), CommandError> {
    let a = &cfg.payoff;
    let (range, dim) = (cfg.range, cfg.dim);
    let nature = a.nature();
    let m = cfg.sweep.as_ref().map_or(1.0, |s| s.m);
    let (mu1, mu2) = mu_bounds(a, range, dim);
    writeln!(stdout, "payoff {a}")?;
    writeln!(stdout, "game {}", classify_game(a))?;
    writeln!(stdout, "strategy1 {}", nature.first)?;
    writeln!(stdout, "strategy2 {}", nature.second)?;
    writeln!(stdout, "replicator_regime {}", replicator_regime(a).as_str())?;
    match interior_fixed_point(a) {
        InteriorFixedPoint::Inside(e) | InteriorFixedPoint::Outside(e) => {
            writeln!(stdout, "interior_fixed_point {e}")?
        }
        InteriorFixedPoint::Undefined => writeln!(stdout, "interior_fixed_point none")?,
    }
    writeln!(stdout, "range {range} dimension {dim}")?;
    writeln!(stdout, "voter_win1 {}", voter_bound_win(a, range, dim))?;
    writeln!(stdout, "voter_win2 {}", voter_bound_win_swapped(a, range, dim))?;
    writeln!(stdout, "voter_rates {mu1} {mu2}")?;
    writeln!(stdout, "nearest_win1 {}", nearest_neighbor_win(a))?;
    writeln!(stdout, "nearest_win2 {}", nearest_neighbor_win_swapped(a))?;
    writeln!(stdout, "generic_payoffs {}", generic_payoffs(a))?;
    writeln!(stdout, "c_factor {}", c_factor(range, dim))?;
    writeln!(stdout, "triangle(m={m}) {}", in_coexistence_triangle(a, range, dim, m))?;
    Ok(())
}

/// Prints the triangle slopes for `M <= max_range`, `d <= max_dim` to four
/// decimals and writes them at full precision to `ctable.csv`.
pub fn cmd_ctable(
    max_range: usize,
    max_dim: usize,
    out: Option<&Path>,
    stdout: &mut impl Write,
) -> Result<(), CommandError> {
    let header: Vec<String> = (1..=max_dim).map(|d| format!("d={d}")).collect();
    writeln!(stdout, "M\\d {}", header.join(" "))?;
    let mut csv = Csv::new(&["M", "d", "c"]);
    for range in 1..=max_range {
        let cells: Vec<String> = (1..=max_dim)
            .map(|dim| format!("{:.4}", c_factor(range, dim)))
            .collect();
        writeln!(stdout, "M={range} {}", cells.join(" "))?;
        for dim in 1..=max_dim {
            csv.row([range.to_string(), dim.to_string(), c_factor(range, dim).to_string()]);
        }
    }
    if let Some(out) = out {
        prepare_dir(out)?;
        write_file(&out.join("ctable.csv"), &csv.into_string())?;
    }
    Ok(())
}

fn drift_row(est: &DriftEstimate, reference: f64, rate: Option<f64>, cfg: &RunConfig) -> Vec<String> {
    vec![
        est.gap.as_str().to_string(),
        est.estimate.to_string(),
        est.standard_error.to_string(),
        est.samples.to_string(),
        est.jumps.to_string(),
        reference.to_string(),
        rate.map(|r| r.to_string()).unwrap_or_default(),
        cfg.replicates.to_string(),
    ]
}

/// Estimates the drift of the interface of a half-space start and writes it
/// next to the reference values to `drift.csv`. The configured initial
/// condition is replaced by the half-space start.
pub fn cmd_boundary_drift(
    cfg: &RunConfig,
    out: &Path,
    stdout: &mut impl Write,
) -> Result<(), CommandError> {
    let spec = cfg.lattice();
    let params = SimParams::new(cfg.horizon, cfg.seed).with_init(InitialCondition::HalfSpace);
    let report = estimate_leftmost_drift(&cfg.payoff, &spec, &params, cfg.replicates)?;
    prepare_dir(out)?;
    let a = &cfg.payoff;
    let mut csv = Csv::new(&[
        "gap_class",
        "estimate",
        "standard_error",
        "samples",
        "jumps",
        "closed_form",
        "interface_rate",
        "replicates",
    ]);
    let wide = &report.gap_at_least_two;
    let reference = drift_closed_form(a, GapClass::AtLeastTwo);
    let rate = interface_drift_rate(a);
    csv.row(drift_row(wide, reference, Some(rate), cfg));
    writeln!(
        stdout,
        "{}: estimate {} (se {}), closed form {reference}, interface rate {rate}",
        wide.gap.as_str(),
        wide.estimate,
        wide.standard_error
    )?;
    if let Some(narrow) = &report.gap_one {
        let bound = drift_closed_form(a, GapClass::One);
        csv.row(drift_row(narrow, bound, None, cfg));
        writeln!(
            stdout,
            "{}: estimate {} (se {}), lower bound {bound}",
            narrow.gap.as_str(),
            narrow.estimate,
            narrow.standard_error
        )?;
    }
    writeln!(stdout, "truncated replicates {}", report.truncated)?;
    write_file(&out.join(cfg.csv.as_deref().unwrap_or("drift.csv")), &csv.into_string())?;
    Ok(())
}
