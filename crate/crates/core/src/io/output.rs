//! Plain-text output formats.
//!
//! Reals are written with the shortest decimal that reads back to the same
//! `f64`, so identical runs give byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::dynamics::Trajectory;
use crate::lattice::Strategy;
use crate::meanfield::OdeTrajectory;

/// Largest width or height of a space-time image.
pub const MAX_PGM_SIDE: usize = 10_000;

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("space-time images need a one-dimensional run, got d = {0}")]
    Dimension(usize),
    #[error("space-time images need full configuration snapshots")]
    MissingSnapshots,
    #[error("image of {width} x {height} exceeds {MAX_PGM_SIDE} pixels per side")]
    TooLarge { width: usize, height: usize },
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Writes `contents` to `path`, naming the path on failure.
pub fn write_file(path: &Path, contents: &str) -> Result<(), OutputError> {
    let fail = |source| OutputError::Io {
        path: path.display().to_string(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(fail)?;
    }
    fs::write(path, contents).map_err(fail)
}

/// Comma-separated table with a header row, built in memory.
pub struct Csv {
    writer: csv::Writer<Vec<u8>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut csv = Self {
            writer: csv::Writer::from_writer(Vec::new()),
        };
        csv.row(header.iter().map(|h| h.to_string()));
        csv
    }

    pub fn row(&mut self, cells: impl IntoIterator<Item = String>) {
        let cells: Vec<String> = cells.into_iter().collect();
        self.writer
            .write_record(&cells)
            .expect("writing to memory cannot fail");
    }

    pub fn into_string(self) -> String {
        let bytes = self.writer.into_inner().expect("writing to memory cannot fail");
        String::from_utf8(bytes).expect("cells are UTF-8")
    }
}

/// Sampled observables of a run: `time,density1,interfaces,heterozygosity`.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut csv = Csv::new(&["time", "density1", "interfaces", "heterozygosity"]);
    for s in &traj.samples {
        let o = s.observables;
        csv.row([
            s.time.to_string(),
            o.density1.to_string(),
            o.interfaces.to_string(),
            o.heterozygosity.to_string(),
        ]);
    }
    csv.into_string()
}

/// Replicator trajectory: `time,u1`.
pub fn ode_csv(traj: &OdeTrajectory) -> String {
    let mut csv = Csv::new(&["time", "u1"]);
    for (t, u) in traj.times.iter().zip(&traj.u1) {
        csv.row([t.to_string(), u.to_string()]);
    }
    csv.into_string()
}

/// Space-time diagram as a plain PGM: one row per sample time, top row
/// first, one column per site, 255 for strategy 1 and 0 for strategy 2.
pub fn spacetime_pgm(traj: &Trajectory) -> Result<String, OutputError> {
    let spec = traj.spec();
    if spec.dim() != 1 {
        return Err(OutputError::Dimension(spec.dim()));
    }
    if traj.snapshots.is_empty() {
        return Err(OutputError::MissingSnapshots);
    }
    let width = spec.sites();
    let height = traj.snapshots.len();
    if width > MAX_PGM_SIDE || height > MAX_PGM_SIDE {
        return Err(OutputError::TooLarge { width, height });
    }
    let mut out = String::with_capacity(16 + 4 * width * height);
    let _ = write!(out, "P2\n{width} {height}\n255\n");
    for cfg in &traj.snapshots {
        let row: Vec<&str> = cfg
            .strategies()
            .iter()
            .map(|s| match s {
                Strategy::One => "255",
                Strategy::Two => "0",
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    Ok(out)
}

/// Writes [`spacetime_pgm`] to `path`.
pub fn write_spacetime_pgm(traj: &Trajectory, path: &Path) -> Result<(), OutputError> {
    write_file(path, &spacetime_pgm(traj)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{run_direct, SimParams, SnapshotPolicy};
    use crate::lattice::{Configuration, LatticeSpec};
    use crate::payoff::PayoffMatrix;

    fn run(values: &[u8], policy: SnapshotPolicy) -> Trajectory {
        let spec = LatticeSpec::compact(1, 1, vec![values.len()]).unwrap();
        let cfg = Configuration::from_values(&spec, values).unwrap();
        let a = PayoffMatrix::new(-8.0, 3.0, 4.0, -8.0).unwrap();
        let params = SimParams::new(1.0, 0).with_snapshots(policy);
        run_direct(cfg, &a, &params).unwrap()
    }

    #[test]
    fn absorbed_run_image() {
        let t = run(&[1, 1, 1, 1], SnapshotPolicy::Full);
        assert_eq!(
            spacetime_pgm(&t).unwrap(),
            "P2\n4 2\n255\n255 255 255 255\n255 255 255 255\n"
        );
    }

    #[test]
    fn first_row_is_the_initial_configuration() {
        let t = run(&[1, 2, 1, 2, 1, 2], SnapshotPolicy::Full);
        let pgm = spacetime_pgm(&t).unwrap();
        assert_eq!(pgm.lines().nth(3), Some("255 0 255 0 255 0"));
    }

    #[test]
    fn image_needs_snapshots() {
        let t = run(&[1, 2, 1, 2, 1, 2], SnapshotPolicy::ObservablesOnly);
        assert!(matches!(spacetime_pgm(&t), Err(OutputError::MissingSnapshots)));
    }

    #[test]
    fn csv_layout() {
        let t = run(&[1, 1, 1, 1], SnapshotPolicy::ObservablesOnly);
        assert_eq!(
            trajectory_csv(&t),
            "time,density1,interfaces,heterozygosity\n0,1,0,0\n1,1,0,0\n"
        );
        let mut csv = Csv::new(&["time", "x"]);
        csv.row([0.1f64.to_string(), (1.0f64 / 3.0).to_string()]);
        let text = csv.into_string();
        let back: f64 = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(back, 1.0 / 3.0);
    }
}
