use std::fmt;

use crate::dynamics::Trajectory;
use crate::lattice::{Configuration, Strategy};

/// Estimate of `P(eta(x) != eta(x + r e_1))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeterozygosityEstimate {
    pub distance: isize,
    pub estimate: f64,
    pub standard_error: f64,
    pub time: f64,
}

fn disagreement_fraction(cfg: &Configuration, r: isize) -> f64 {
    let spec = cfg.spec();
    let differing = (0..cfg.len())
        .filter(|&x| cfg.get(x) != cfg.get(spec.step(x, 0, r)))
        .count();
    differing as f64 / cfg.len() as f64
}

/// Averages the indicator `eta(x) != eta(x + r e_1)` over all sites and all
/// members of `snapshots`, which are taken at `time`.
///
/// With two or more members the standard error comes from the spread of the
/// per-member averages. A single member gets the binomial error over its
/// sites, which ignores spatial correlation.
///
/// # Panics
///
/// Panics if `snapshots` is empty.
pub fn heterozygosity(snapshots: &[Configuration], r: isize, time: f64) -> HeterozygosityEstimate {
    assert!(!snapshots.is_empty(), "heterozygosity needs at least one configuration");
    let per: Vec<f64> = snapshots.iter().map(|c| disagreement_fraction(c, r)).collect();
    let n = per.len() as f64;
    let estimate = per.iter().sum::<f64>() / n;
    let standard_error = if per.len() > 1 {
        let var = per.iter().map(|p| (p - estimate).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        (estimate * (1.0 - estimate) / snapshots[0].len() as f64).sqrt()
    };
    HeterozygosityEstimate {
        distance: r,
        estimate,
        standard_error,
        time,
    }
}

/// Whether no two sites following `focal` lie within interaction range of
/// each other.
pub fn is_sparse(cfg: &Configuration, focal: Strategy) -> bool {
    let spec = cfg.spec();
    (0..cfg.len())
        .filter(|&x| cfg.get(x) == focal)
        .all(|x| spec.neighbors(x).into_iter().all(|y| cfg.get(y) != focal))
}

/// Cutoffs turning an ensemble into a regime label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Fraction of runs that must agree for any label other than undecided.
    pub fixation: f64,
    /// Final nearest-pair heterozygosity at or above which a run with both
    /// strategies present counts as coexisting.
    pub coexistence: f64,
    /// Factor by which heterozygosity must drop for a run with both
    /// strategies present to count as clustering.
    pub clustering: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            fixation: 0.95,
            coexistence: 0.05,
            clustering: 5.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Fix1,
    Fix2,
    Coexisting,
    Clustering,
    Undecided,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Fix1 => "fix1",
            Outcome::Fix2 => "fix2",
            Outcome::Coexisting => "coexisting",
            Outcome::Clustering => "clustering",
            Outcome::Undecided => "undecided",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Regime label of an ensemble together with the per-run counts behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeSummary {
    pub outcome: Outcome,
    pub runs: usize,
    pub fixed1: usize,
    pub fixed2: usize,
    pub coexisting: usize,
    pub clustering: usize,
}

/// Labels an ensemble by the terminal state of its runs. Labels are tried in
/// the order fix1, fix2, coexisting, clustering; the first one backed by at
/// least `thresholds.fixation` of the runs wins.
pub fn empirical_outcome(runs: &[Trajectory], thresholds: &Thresholds) -> OutcomeSummary {
    let mut summary = OutcomeSummary {
        outcome: Outcome::Undecided,
        runs: runs.len(),
        fixed1: 0,
        fixed2: 0,
        coexisting: 0,
        clustering: 0,
    };
    for run in runs {
        match run.terminal.uniform_strategy() {
            Some(Strategy::One) => summary.fixed1 += 1,
            Some(Strategy::Two) => summary.fixed2 += 1,
            None => {
                let h = run.final_observables().heterozygosity;
                if h >= thresholds.coexistence {
                    summary.coexisting += 1;
                }
                if h * thresholds.clustering <= run.initial.heterozygosity {
                    summary.clustering += 1;
                }
            }
        }
    }
    if runs.is_empty() {
        return summary;
    }
    let enough = |count: usize| count as f64 >= thresholds.fixation * runs.len() as f64;
    summary.outcome = if enough(summary.fixed1) {
        Outcome::Fix1
    } else if enough(summary.fixed2) {
        Outcome::Fix2
    } else if enough(summary.coexisting) {
        Outcome::Coexisting
    } else if enough(summary.clustering) {
        Outcome::Clustering
    } else {
        Outcome::Undecided
    };
    summary
}
