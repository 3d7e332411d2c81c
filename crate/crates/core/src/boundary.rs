//! Interfaces of one-dimensional configurations.
//!
//! Edge `e` of a ring of length `L` joins sites `e` and `e + 1 (mod L)`. It
//! carries a particle when the two strategies differ, with sign
//! `eta(e + 1) - eta(e)`: `+1` for a `1 | 2` edge and `-1` for `2 | 1`.
//! Under nearest-neighbor interactions particles move by one edge at a time,
//! are never created and annihilate in pairs.

use rayon::prelude::*;
use thiserror::Error;

use crate::dynamics::{DirectEngine, Engine, InitialCondition, SimError, SimParams, Trajectory};
use crate::dynamics::flip_rate;
use crate::lattice::{Configuration, LatticeSpec};
use crate::payoff::PayoffMatrix;
use crate::rng;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundaryError {
    #[error("interfaces are only defined in one dimension, got d = {0}")]
    Dimension(usize),
    #[error("drift estimation needs nearest-neighbor interactions, got M = {0}")]
    Range(usize),
    #[error("drift estimation needs the half-space initial condition")]
    InitialCondition,
    #[error("trajectory has no recorded samples")]
    NoSamples,
    #[error("only {survived} of the required {required} replicates contributed drift samples")]
    TooFewSamples { survived: usize, required: usize },
    #[error("replicate {replicate}: {source}")]
    Simulation { replicate: usize, source: SimError },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Particle {
    /// Edge index: the particle sits between sites `edge` and `edge + 1`.
    pub edge: usize,
    /// `+1` or `-1`.
    pub sign: i8,
}

/// Particles of a one-dimensional configuration, sorted by edge.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryState {
    pub particles: Vec<Particle>,
    pub time: f64,
}

impl BoundaryState {
    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    /// Whether consecutive particles, including the pair across the wrap,
    /// have opposite signs.
    pub fn signs_alternate(&self) -> bool {
        let p = &self.particles;
        (0..p.len()).all(|k| p[k].sign != p[(k + 1) % p.len()].sign)
    }

    pub fn negated(&self) -> Self {
        Self {
            particles: self
                .particles
                .iter()
                .map(|p| Particle {
                    edge: p.edge,
                    sign: -p.sign,
                })
                .collect(),
            time: self.time,
        }
    }
}

fn require_line(spec: &LatticeSpec) -> Result<(), BoundaryError> {
    match spec.dim() {
        1 => Ok(()),
        d => Err(BoundaryError::Dimension(d)),
    }
}

/// Particles of `cfg` with time stamp 0.
pub fn extract_boundaries(cfg: &Configuration) -> Result<BoundaryState, BoundaryError> {
    require_line(cfg.spec())?;
    let l = cfg.len();
    let particles = (0..l)
        .filter_map(|e| {
            let left = cfg.get(e).as_u8() as i8;
            let right = cfg.get((e + 1) % l).as_u8() as i8;
            (left != right).then_some(Particle {
                edge: e,
                sign: right - left,
            })
        })
        .collect();
    Ok(BoundaryState {
        particles,
        time: 0.0,
    })
}

/// Particle counts at the sample times of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceSeries {
    pub times: Vec<f64>,
    pub counts: Vec<usize>,
    /// True for nearest-neighbor runs, where the count cannot increase.
    /// With longer ranges new interfaces can appear and the monotonicity
    /// checks below carry no guarantee.
    pub monotone_safe: bool,
}

impl InterfaceSeries {
    pub fn is_non_increasing(&self) -> bool {
        self.counts.windows(2).all(|w| w[1] <= w[0])
    }

    /// Whether every change between consecutive samples is even.
    pub fn changes_are_even(&self) -> bool {
        self.counts.windows(2).all(|w| w[0].abs_diff(w[1]) % 2 == 0)
    }
}

/// Interface counts at the sample times recorded in `traj`.
pub fn interface_count_series(traj: &Trajectory) -> Result<InterfaceSeries, BoundaryError> {
    let spec = traj.spec();
    require_line(spec)?;
    if traj.samples.is_empty() {
        return Err(BoundaryError::NoSamples);
    }
    Ok(InterfaceSeries {
        times: traj.samples.iter().map(|s| s.time).collect(),
        counts: traj.samples.iter().map(|s| s.observables.interfaces).collect(),
        monotone_safe: spec.range() == 1,
    })
}

/// Distance from the tracked particle to the next particle on its right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GapClass {
    AtLeastTwo,
    One,
}

impl GapClass {
    pub fn of(gap: usize) -> Self {
        if gap >= 2 {
            GapClass::AtLeastTwo
        } else {
            GapClass::One
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            GapClass::AtLeastTwo => "gap>=2",
            GapClass::One => "gap=1",
        }
    }
}

/// Reference drift of the leftmost particle of a half-space start:
/// `(a11 + a12) - (a22 + a21)` when the gap is at least two, and the lower
/// bound `a11 + a12 - 2 a21` when the gap is one.
pub fn drift_closed_form(a: &PayoffMatrix, gap: GapClass) -> f64 {
    match gap {
        GapClass::AtLeastTwo => (a.a11() + a.a12()) - (a.a22() + a.a21()),
        GapClass::One => a.a11() + a.a12() - 2.0 * a.a21(),
    }
}

/// Drift of an isolated `1 | 2` interface under the nearest-neighbor flip
/// rates: the rate at which the site on its right turns to 1 minus the rate
/// at which the site on its left turns to 2.
pub fn interface_drift_rate(a: &PayoffMatrix) -> f64 {
    let spec = LatticeSpec::new(1, 1, vec![12]).expect("valid ring");
    let values: Vec<u8> = (0..12).map(|x| if x < 6 { 1 } else { 2 }).collect();
    let cfg = Configuration::from_values(&spec, &values).expect("valid configuration");
    flip_rate(6, &cfg, a) - flip_rate(5, &cfg, a)
}

/// Ratio estimate of a drift from independent replicates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftEstimate {
    /// Sites per unit time.
    pub estimate: f64,
    pub standard_error: f64,
    /// Replicates that spent positive time in the gap class.
    pub samples: usize,
    /// Jumps of the tracked particle observed in the gap class.
    pub jumps: u64,
    pub gap: GapClass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriftReport {
    pub gap_at_least_two: DriftEstimate,
    /// Absent when the tracked particle never had a neighbor at distance one.
    pub gap_one: Option<DriftEstimate>,
    pub replicates: usize,
    /// Replicates cut short because the two interfaces came within the
    /// margin of each other.
    pub truncated: usize,
}

/// Replicates below this count make [`estimate_leftmost_drift`] fail.
pub const MIN_DRIFT_SAMPLES: usize = 10;

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    displacement: [i64; 2],
    time: [f64; 2],
    jumps: [u64; 2],
    truncated: bool,
}

fn class_slot(gap: usize) -> usize {
    match GapClass::of(gap) {
        GapClass::AtLeastTwo => 0,
        GapClass::One => 1,
    }
}

fn track_replicate(spec: &LatticeSpec, a: &PayoffMatrix, params: &SimParams) -> Tally {
    let l = spec.sites();
    let margin = 4 * spec.range();
    let cfg = InitialCondition::HalfSpace
        .build(spec, &mut rng::initial_stream(params.seed, params.replicate))
        .expect("half-space start fits the lattice");
    let mut engine = DirectEngine::game(
        cfg,
        *a,
        rng::dynamics_stream(params.seed, params.replicate),
    );
    // `x` tracks the 1 | 2 edge, `y` the 2 | 1 edge.
    let mut x = l / 2 - 1;
    let mut y = l - 1;
    let mut tally = Tally::default();
    let mut last = 0.0;
    loop {
        let gap = (y + l - x) % l;
        let slot = class_slot(gap);
        let Some(event) = engine.step(params.horizon) else {
            tally.time[slot] += params.horizon - last;
            break;
        };
        tally.time[slot] += event.time - last;
        last = event.time;
        let s = event.site;
        if s == x {
            x = (x + l - 1) % l;
            tally.displacement[slot] -= 1;
            tally.jumps[slot] += 1;
        } else if s == (x + 1) % l {
            x = (x + 1) % l;
            tally.displacement[slot] += 1;
            tally.jumps[slot] += 1;
        } else if s == y {
            y = (y + l - 1) % l;
        } else if s == (y + 1) % l {
            y = (y + 1) % l;
        } else {
            unreachable!("nearest-neighbor flips happen next to an interface");
        }
        let apart = (y + l - x) % l;
        if apart.min(l - apart) <= margin {
            tally.truncated = true;
            break;
        }
    }
    tally
}

fn ratio_estimate(tallies: &[Tally], slot: usize, gap: GapClass) -> Option<DriftEstimate> {
    let used: Vec<&Tally> = tallies.iter().filter(|t| t.time[slot] > 0.0).collect();
    let n = used.len();
    if n == 0 {
        return None;
    }
    let total_d: f64 = used.iter().map(|t| t.displacement[slot] as f64).sum();
    let total_t: f64 = used.iter().map(|t| t.time[slot]).sum();
    let estimate = total_d / total_t;
    let standard_error = if n > 1 {
        let mean_t = total_t / n as f64;
        let s2 = used
            .iter()
            .map(|t| (t.displacement[slot] as f64 - estimate * t.time[slot]).powi(2))
            .sum::<f64>()
            / (n - 1) as f64;
        (s2 / n as f64).sqrt() / mean_t
    } else {
        f64::INFINITY
    };
    Some(DriftEstimate {
        estimate,
        standard_error,
        samples: n,
        jumps: used.iter().map(|t| t.jumps[slot]).sum(),
        gap,
    })
}

/// Estimates the drift of the `1 | 2` interface of a half-space start on the
/// ring `spec`, separately for each gap class. Each replicate stops
/// contributing once the two interfaces come within `4M` of each other.
pub fn estimate_leftmost_drift(
    a: &PayoffMatrix,
    spec: &LatticeSpec,
    params: &SimParams,
    replicates: usize,
) -> Result<DriftReport, BoundaryError> {
    require_line(spec)?;
    if spec.range() != 1 {
        return Err(BoundaryError::Range(spec.range()));
    }
    if params.init != InitialCondition::HalfSpace {
        return Err(BoundaryError::InitialCondition);
    }
    params
        .validate()
        .map_err(|source| BoundaryError::Simulation { replicate: 0, source })?;
    let tallies: Vec<Tally> = (0..replicates as u64)
        .into_par_iter()
        .map(|r| track_replicate(spec, a, &params.clone().with_replicate(r)))
        .collect();
    let survived = tallies.iter().filter(|t| t.time[0] > 0.0).count();
    if survived < MIN_DRIFT_SAMPLES {
        return Err(BoundaryError::TooFewSamples {
            survived,
            required: MIN_DRIFT_SAMPLES,
        });
    }
    Ok(DriftReport {
        gap_at_least_two: ratio_estimate(&tallies, 0, GapClass::AtLeastTwo)
            .expect("enough samples"),
        gap_one: ratio_estimate(&tallies, 1, GapClass::One),
        replicates,
        truncated: tallies.iter().filter(|t| t.truncated).count(),
    })
}
