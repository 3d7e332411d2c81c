use rand::Rng;

use crate::lattice::{chebyshev_offsets, Configuration};
use crate::payoff::PayoffMatrix;
use crate::rng::{self, SimRng};

use super::fenwick::RateTree;
use super::rates::{GameRates, SpinRates, VoterRates};
use super::state::LatticeState;
use super::{record, Engine, Event, Fixation, SimError, SimParams, Trajectory};

/// Rate-driven simulation of a spin system.
///
/// Holding times are exponential with the total rate; the flipping site is
/// drawn proportionally to its rate from a binary indexed tree. After a flip
/// only the rates within the model's influence radius are recomputed.
pub struct DirectEngine<R: SpinRates> {
    state: LatticeState,
    model: R,
    tree: RateTree,
    influence: Vec<Vec<isize>>,
    rng: SimRng,
    time: f64,
    pending: Option<f64>,
    fixation: Option<Fixation>,
    flips: u64,
}

impl<R: SpinRates> DirectEngine<R> {
    pub fn new(cfg: Configuration, model: R, rng: SimRng) -> Self {
        let state = LatticeState::new(cfg);
        let rates = (0..state.config().len())
            .map(|x| model.rate(&state, x))
            .collect();
        let spec = state.spec();
        let radius = model.influence_radius(spec.range()) as isize;
        let influence = chebyshev_offsets(spec.dim(), radius);
        let fixation = state
            .uniform_strategy()
            .map(|strategy| Fixation { strategy, time: 0.0 });
        Self {
            state,
            model,
            tree: RateTree::new(rates),
            influence,
            rng,
            time: 0.0,
            pending: None,
            fixation,
            flips: 0,
        }
    }

    /// Current flip rate of `site`.
    pub fn rate(&self, site: usize) -> f64 {
        self.tree.get(site)
    }

    pub fn total_rate(&self) -> f64 {
        self.tree.total()
    }

    fn refresh_around(&mut self, site: usize) {
        let spec = self.state.spec();
        for offset in &self.influence {
            let y = spec.shift(site, offset);
            let r = self.model.rate(&self.state, y);
            self.tree.set(y, r);
        }
    }
}

impl DirectEngine<GameRates> {
    pub fn game(cfg: Configuration, payoff: PayoffMatrix, rng: SimRng) -> Self {
        Self::new(cfg, GameRates { payoff }, rng)
    }
}

impl<R: SpinRates> Engine for DirectEngine<R> {
    fn state(&self) -> &LatticeState {
        &self.state
    }

    fn time(&self) -> f64 {
        self.time
    }

    fn fixation(&self) -> Option<Fixation> {
        self.fixation
    }

    fn flips(&self) -> u64 {
        self.flips
    }

    fn step(&mut self, horizon: f64) -> Option<Event> {
        if self.fixation.is_some() || self.tree.positive() == 0 {
            self.time = self.time.max(horizon);
            return None;
        }
        let next = match self.pending {
            Some(t) => t,
            None => {
                let total = self.tree.total();
                let u: f64 = self.rng.random();
                let t = self.time - (1.0 - u).ln() / total;
                self.pending = Some(t);
                t
            }
        };
        if next > horizon {
            self.time = self.time.max(horizon);
            return None;
        }
        self.pending = None;
        self.time = next;
        let target = self.rng.random::<f64>() * self.tree.total();
        let site = self.tree.find(target);
        let strategy = self.state.flip(site);
        self.refresh_around(site);
        self.flips += 1;
        if let Some(s) = self.state.uniform_strategy() {
            self.fixation = Some(Fixation {
                strategy: s,
                time: next,
            });
        }
        Some(Event {
            time: next,
            site,
            strategy,
        })
    }
}

/// Simulates the spatial game directly from its flip rates.
pub fn run_direct(
    cfg0: Configuration,
    a: &PayoffMatrix,
    params: &SimParams,
) -> Result<Trajectory, SimError> {
    params.validate()?;
    let rng = rng::dynamics_stream(params.seed, params.replicate);
    let mut engine = DirectEngine::game(cfg0, *a, rng);
    Ok(record(&mut engine, params))
}

/// Simulates the biased voter model with flip rates `mu1 f1` at type-2
/// sites and `mu2 f2` at type-1 sites.
pub fn run_biased_voter(
    cfg0: Configuration,
    mu1: f64,
    mu2: f64,
    params: &SimParams,
) -> Result<Trajectory, SimError> {
    params.validate()?;
    if !(mu1 >= 0.0 && mu2 >= 0.0 && mu1.is_finite() && mu2.is_finite()) {
        return Err(SimError::VoterRates { mu1, mu2 });
    }
    let rng = rng::dynamics_stream(params.seed, params.replicate);
    let mut engine = DirectEngine::new(cfg0, VoterRates { mu1, mu2 }, rng);
    Ok(record(&mut engine, params))
}
