//! Exact continuous-time simulation of the spatial game.
//!
//! Three constructions produce the same Markov chain:
//!
//! * [`run_direct`]: event-driven simulation from the per-site flip rates,
//!   with a binary indexed tree for rate-weighted site selection.
//! * [`run_graphical`]: Poisson clocks of rate `max |a_ij|` at every site,
//!   thinned by the current payoff.
//! * [`run_graphical_negative`]: four clock families per site with rates
//!   `-a_ij`, available when every payoff is negative.
//!
//! [`run_biased_voter`] simulates the biased voter model used to bound the
//! game from below and above.

mod direct;
mod fenwick;
mod graphical;
pub mod rates;
mod state;

use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::{Configuration, LatticeError, LatticeSpec, Strategy};
use crate::payoff::PayoffMatrix;
use crate::rng;

pub use direct::{run_biased_voter, run_direct, DirectEngine};
pub use graphical::{
    run_graphical, run_graphical_negative, EventStream, GraphicalEngine, Mark, NegativeGraphicalEngine,
};
pub use rates::{biased_voter_rate, flip_rate, mu_bounds, GameRates, SpinRates, VoterRates};
pub use state::{LatticeState, Observables};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("time horizon must be positive and finite, got {0}")]
    Horizon(f64),
    #[error("sample schedule is empty")]
    EmptySchedule,
    #[error("sample time {time} is outside [0, {horizon}]")]
    SampleOutOfRange { time: f64, horizon: f64 },
    #[error("sample times must be sorted")]
    UnsortedSchedule,
    #[error("Bernoulli density {0} is outside [0, 1]")]
    Density(f64),
    #[error("all four payoffs must be strictly negative, got {0}")]
    NotAllNegative(PayoffMatrix),
    #[error("biased voter rates must be non-negative, got ({mu1}, {mu2})")]
    VoterRates { mu1: f64, mu2: f64 },
    #[error("single-site position {0:?} does not match the lattice")]
    Position(Vec<usize>),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// How the initial configuration is drawn.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// Independent sites, strategy 1 with probability `p`.
    Bernoulli(f64),
    /// Strategy 1 on `0 <= x_1 < L_1 / 2`, strategy 2 elsewhere.
    HalfSpace,
    /// One site with `strategy`, every other site with the other strategy.
    SingleSite {
        strategy: Strategy,
        position: Vec<usize>,
    },
    /// Strategy values (1 or 2) in site order.
    Explicit(Vec<u8>),
}

impl InitialCondition {
    pub fn build<R: Rng + ?Sized>(
        &self,
        spec: &LatticeSpec,
        rng: &mut R,
    ) -> Result<Configuration, SimError> {
        match self {
            InitialCondition::Bernoulli(p) => {
                if !(0.0..=1.0).contains(p) {
                    return Err(SimError::Density(*p));
                }
                let sites = (0..spec.sites())
                    .map(|_| {
                        if rng.random::<f64>() < *p {
                            Strategy::One
                        } else {
                            Strategy::Two
                        }
                    })
                    .collect();
                Ok(Configuration::from_strategies(spec, sites)?)
            }
            InitialCondition::HalfSpace => {
                let half = spec.sides()[0] / 2;
                let sites = (0..spec.sites())
                    .map(|x| {
                        if spec.coords(x)[0] < half {
                            Strategy::One
                        } else {
                            Strategy::Two
                        }
                    })
                    .collect();
                Ok(Configuration::from_strategies(spec, sites)?)
            }
            InitialCondition::SingleSite { strategy, position } => {
                if position.len() != spec.dim()
                    || position.iter().zip(spec.sides()).any(|(&c, &s)| c >= s)
                {
                    return Err(SimError::Position(position.clone()));
                }
                let mut cfg = Configuration::uniform(spec, strategy.other());
                cfg.set(spec.index(position), *strategy);
                Ok(cfg)
            }
            InitialCondition::Explicit(values) => Ok(Configuration::from_values(spec, values)?),
        }
    }

    fn validate(&self) -> Result<(), SimError> {
        match self {
            InitialCondition::Bernoulli(p) if !(0.0..=1.0).contains(p) => Err(SimError::Density(*p)),
            _ => Ok(()),
        }
    }
}

/// What a run records at each sample time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SnapshotPolicy {
    /// Terminal configuration and fixation record only.
    None,
    #[default]
    ObservablesOnly,
    /// Observables plus a copy of the configuration.
    Full,
}

impl SnapshotPolicy {
    pub fn as_str(&self) -> &'static str {
        match self {
            SnapshotPolicy::None => "none",
            SnapshotPolicy::ObservablesOnly => "observables",
            SnapshotPolicy::Full => "full",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimParams {
    pub horizon: f64,
    pub seed: u64,
    /// Index of the random stream used for the dynamics.
    pub replicate: u64,
    pub init: InitialCondition,
    /// Sorted observation times in `[0, horizon]`.
    pub sample_times: Vec<f64>,
    pub snapshots: SnapshotPolicy,
}

impl SimParams {
    /// Bernoulli(1/2) start, observed at `0` and `horizon`.
    pub fn new(horizon: f64, seed: u64) -> Self {
        Self {
            horizon,
            seed,
            replicate: 0,
            init: InitialCondition::Bernoulli(0.5),
            sample_times: vec![0.0, horizon],
            snapshots: SnapshotPolicy::ObservablesOnly,
        }
    }

    pub fn with_init(mut self, init: InitialCondition) -> Self {
        self.init = init;
        self
    }

    pub fn with_samples(mut self, times: Vec<f64>) -> Self {
        self.sample_times = times;
        self
    }

    /// Samples at `0, dt, 2 dt, ...` up to and including the horizon.
    pub fn with_sample_step(mut self, dt: f64) -> Self {
        self.sample_times = uniform_schedule(self.horizon, dt);
        self
    }

    pub fn with_snapshots(mut self, policy: SnapshotPolicy) -> Self {
        self.snapshots = policy;
        self
    }

    pub fn with_replicate(mut self, replicate: u64) -> Self {
        self.replicate = replicate;
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(SimError::Horizon(self.horizon));
        }
        if self.sample_times.is_empty() {
            return Err(SimError::EmptySchedule);
        }
        for &t in &self.sample_times {
            if !(0.0..=self.horizon).contains(&t) {
                return Err(SimError::SampleOutOfRange {
                    time: t,
                    horizon: self.horizon,
                });
            }
        }
        if self.sample_times.windows(2).any(|w| w[1] < w[0]) {
            return Err(SimError::UnsortedSchedule);
        }
        self.init.validate()
    }
}

/// `0, dt, 2 dt, ...` up to the horizon, with the horizon always included.
pub fn uniform_schedule(horizon: f64, dt: f64) -> Vec<f64> {
    if dt.is_nan() || dt <= 0.0 || horizon.is_nan() || horizon < 0.0 {
        return vec![];
    }
    let steps = (horizon / dt).floor() as usize;
    let mut out: Vec<f64> = (0..=steps).map(|k| k as f64 * dt).filter(|&t| t <= horizon).collect();
    if out.last().is_none_or(|&t| t < horizon) {
        out.push(horizon);
    }
    out
}

/// The uniform state a run was absorbed into.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixation {
    pub strategy: Strategy,
    pub time: f64,
}

/// One strategy change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub site: usize,
    /// Strategy at `site` after the event.
    pub strategy: Strategy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub time: f64,
    pub observables: Observables,
}

/// Record of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub initial: Observables,
    pub samples: Vec<Sample>,
    /// Configurations at the sample times under [`SnapshotPolicy::Full`].
    pub snapshots: Vec<Configuration>,
    pub terminal: Configuration,
    pub fixation: Option<Fixation>,
    pub flips: u64,
    pub horizon: f64,
}

impl Trajectory {
    pub fn spec(&self) -> &LatticeSpec {
        self.terminal.spec()
    }

    pub fn final_observables(&self) -> Observables {
        LatticeState::new(self.terminal.clone()).observables()
    }
}

/// Event-by-event interface shared by the simulators.
pub trait Engine {
    fn state(&self) -> &LatticeState;

    fn time(&self) -> f64;

    fn fixation(&self) -> Option<Fixation>;

    fn flips(&self) -> u64;

    /// Applies the next strategy change if it happens no later than
    /// `horizon`. Otherwise moves the clock to `horizon` and returns `None`.
    fn step(&mut self, horizon: f64) -> Option<Event>;

    fn advance_to(&mut self, horizon: f64) {
        while self.step(horizon).is_some() {}
    }
}

pub(crate) fn record<E: Engine>(engine: &mut E, params: &SimParams) -> Trajectory {
    let initial = engine.state().observables();
    let mut samples = Vec::new();
    let mut snapshots = Vec::new();
    if params.snapshots != SnapshotPolicy::None {
        samples.reserve(params.sample_times.len());
        for &t in &params.sample_times {
            engine.advance_to(t);
            samples.push(Sample {
                time: t,
                observables: engine.state().observables(),
            });
            if params.snapshots == SnapshotPolicy::Full {
                snapshots.push(engine.state().config().clone());
            }
        }
    }
    engine.advance_to(params.horizon);
    Trajectory {
        initial,
        samples,
        snapshots,
        terminal: engine.state().config().clone(),
        fixation: engine.fixation(),
        flips: engine.flips(),
        horizon: params.horizon,
    }
}

/// Which exact construction to simulate with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Method {
    #[default]
    Direct,
    Graphical,
    GraphicalNegative,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Graphical => "graphical",
            Method::GraphicalNegative => "graphical-negative",
        }
    }

    pub fn run(
        &self,
        cfg0: Configuration,
        a: &PayoffMatrix,
        params: &SimParams,
    ) -> Result<Trajectory, SimError> {
        match self {
            Method::Direct => run_direct(cfg0, a, params),
            Method::Graphical => run_graphical(cfg0, a, params),
            Method::GraphicalNegative => run_graphical_negative(cfg0, a, params),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Runs `replicates` independent realizations in parallel. Replicate `r`
/// draws its initial configuration and its dynamics from streams keyed by
/// `(params.seed, r)`; results come back in replicate order.
pub fn run_ensemble(
    spec: &LatticeSpec,
    a: &PayoffMatrix,
    params: &SimParams,
    method: Method,
    replicates: usize,
) -> Vec<Result<Trajectory, SimError>> {
    (0..replicates as u64)
        .into_par_iter()
        .map(|r| {
            let params = params.clone().with_replicate(r);
            let cfg0 = params
                .init
                .build(spec, &mut rng::initial_stream(params.seed, r))?;
            method.run(cfg0, a, &params)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules() {
        assert_eq!(uniform_schedule(1.0, 0.25), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(uniform_schedule(1.0, 0.3), vec![0.0, 0.3, 0.6, 0.8999999999999999, 1.0]);
        let p = SimParams::new(10.0, 1).with_samples(vec![]);
        assert_eq!(p.validate(), Err(SimError::EmptySchedule));
        let p = SimParams::new(10.0, 1).with_samples(vec![2.0, 1.0]);
        assert_eq!(p.validate(), Err(SimError::UnsortedSchedule));
        let p = SimParams::new(10.0, 1).with_samples(vec![11.0]);
        assert!(matches!(p.validate(), Err(SimError::SampleOutOfRange { .. })));
    }

    #[test]
    fn initial_conditions() {
        let spec = LatticeSpec::new(1, 1, vec![8]).unwrap();
        let mut r = rng::stream(1, 0);
        let half = InitialCondition::HalfSpace.build(&spec, &mut r).unwrap();
        assert_eq!(
            half.strategies().iter().map(|s| s.as_u8()).collect::<Vec<_>>(),
            vec![1, 1, 1, 1, 2, 2, 2, 2]
        );
        let single = InitialCondition::SingleSite {
            strategy: Strategy::One,
            position: vec![3],
        }
        .build(&spec, &mut r)
        .unwrap();
        assert_eq!(single.count(Strategy::One), 1);
        assert_eq!(single.get(3), Strategy::One);
        assert!(InitialCondition::Bernoulli(1.5).build(&spec, &mut r).is_err());
        let all = InitialCondition::Bernoulli(1.0).build(&spec, &mut r).unwrap();
        assert_eq!(all.uniform_strategy(), Some(Strategy::One));
    }
}
