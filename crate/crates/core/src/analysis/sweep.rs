use rayon::prelude::*;

use crate::dynamics::{run_ensemble, Method, SimParams};
use crate::lattice::LatticeSpec;
use crate::meanfield::{replicator_regime, ReplicatorRegime};
use crate::payoff::PayoffMatrix;

use super::outcome::{empirical_outcome, OutcomeSummary, Thresholds};
use super::{
    generic_payoffs, in_coexistence_triangle, nearest_neighbor_win, nearest_neighbor_win_swapped,
    voter_bound_win, voter_bound_win_swapped,
};

/// Every rigorous region test evaluated at one payoff matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PredicateFlags {
    pub voter_win1: bool,
    pub voter_win2: bool,
    pub nearest_win1: bool,
    pub nearest_win2: bool,
    pub generic: bool,
    pub triangle: bool,
}

impl PredicateFlags {
    pub fn evaluate(a: &PayoffMatrix, range: usize, dim: usize, m: f64) -> Self {
        Self {
            voter_win1: voter_bound_win(a, range, dim),
            voter_win2: voter_bound_win_swapped(a, range, dim),
            nearest_win1: nearest_neighbor_win(a),
            nearest_win2: nearest_neighbor_win_swapped(a),
            generic: generic_payoffs(a),
            triangle: in_coexistence_triangle(a, range, dim, m),
        }
    }
}

/// One cell of a phase diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionReport {
    pub a11: f64,
    pub a22: f64,
    pub flags: PredicateFlags,
    pub regime: ReplicatorRegime,
    /// Absent when no replicates were requested or the simulations failed.
    pub outcome: Option<OutcomeSummary>,
    /// First simulation error of the cell, with its replicate index.
    pub error: Option<String>,
    /// Results known to hold only beyond thresholds that cannot be computed,
    /// and the conjectured winner where one applies. Never used as flags.
    pub annotations: Vec<&'static str>,
}

/// A grid over `(a11, a22)` with `a12` and `a21` held fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub a12: f64,
    pub a21: f64,
    pub a11_values: Vec<f64>,
    pub a22_values: Vec<f64>,
    pub lattice: LatticeSpec,
    pub params: SimParams,
    pub replicates: usize,
    pub method: Method,
    /// Depth of the coexistence triangle.
    pub m: f64,
    pub thresholds: Thresholds,
}

fn annotations(a: &PayoffMatrix, range: usize, dim: usize) -> Vec<&'static str> {
    let mut out = vec!["win1-for-large-a11", "win2-for-large-a22"];
    if a.a12() < 0.0 {
        out.push("win2-for-very-negative-a11");
    }
    if a.a21() < 0.0 {
        out.push("win1-for-very-negative-a22");
    }
    if range == 1 && dim == 1 && generic_payoffs(a) {
        // Least altruistic strategy: the larger of a1 = a11 - a21 and
        // a2 = a22 - a12.
        if a.a1() > a.a2() {
            out.push("conjecture-win1");
        } else if a.a2() > a.a1() {
            out.push("conjecture-win2");
        }
    }
    out
}

fn evaluate_cell(sweep: &SweepSpec, a11: f64, a22: f64) -> RegionReport {
    let a = match PayoffMatrix::new(a11, sweep.a12, sweep.a21, a22) {
        Ok(a) => a,
        Err(e) => {
            return RegionReport {
                a11,
                a22,
                flags: PredicateFlags {
                    voter_win1: false,
                    voter_win2: false,
                    nearest_win1: false,
                    nearest_win2: false,
                    generic: false,
                    triangle: false,
                },
                regime: ReplicatorRegime::Degenerate,
                outcome: None,
                error: Some(e.to_string()),
                annotations: vec![],
            }
        }
    };
    let (range, dim) = (sweep.lattice.range(), sweep.lattice.dim());
    let mut report = RegionReport {
        a11,
        a22,
        flags: PredicateFlags::evaluate(&a, range, dim, sweep.m),
        regime: replicator_regime(&a),
        outcome: None,
        error: None,
        annotations: annotations(&a, range, dim),
    };
    if sweep.replicates == 0 {
        return report;
    }
    let results = run_ensemble(&sweep.lattice, &a, &sweep.params, sweep.method, sweep.replicates);
    let mut runs = Vec::with_capacity(results.len());
    for (r, result) in results.into_iter().enumerate() {
        match result {
            Ok(t) => runs.push(t),
            Err(e) => {
                report.error = Some(format!("replicate {r}: {e}"));
                return report;
            }
        }
    }
    report.outcome = Some(empirical_outcome(&runs, &sweep.thresholds));
    report
}

/// Evaluates every cell of the grid, `a11` varying slowest. Each cell draws
/// its replicates from the same streams, so neighboring cells are compared
/// under common random numbers. A failing cell records its error and the
/// sweep continues.
pub fn sweep_phase_diagram(sweep: &SweepSpec) -> Vec<RegionReport> {
    let cells: Vec<(f64, f64)> = sweep
        .a11_values
        .iter()
        .flat_map(|&a11| sweep.a22_values.iter().map(move |&a22| (a11, a22)))
        .collect();
    cells
        .into_par_iter()
        .map(|(a11, a22)| evaluate_cell(sweep, a11, a22))
        .collect()
}
