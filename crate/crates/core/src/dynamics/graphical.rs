//! Constructions of the spatial game from Poisson clocks.
//!
//! Both engines keep the next arrival of every clock in a priority queue and
//! draw arrival labels only when the arrival is processed, so memory stays
//! proportional to the number of clocks rather than the number of events.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;

use rand::distr::Open01;
use rand::Rng;

use crate::lattice::{Configuration, NeighborTable, Strategy};
use crate::payoff::PayoffMatrix;
use crate::rng::{self, SimRng};

use super::state::LatticeState;
use super::{record, Engine, Event, Fixation, SimError, SimParams, Trajectory};

#[derive(Debug, Clone, Copy)]
struct Arrival {
    time: f64,
    site: u32,
    /// Clock family; always 0 for the single-clock construction.
    family: u8,
}

impl PartialEq for Arrival {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Arrival {}

impl PartialOrd for Arrival {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Arrival {
    /// Reversed so that `BinaryHeap` pops the earliest arrival.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.site.cmp(&self.site))
            .then_with(|| other.family.cmp(&self.family))
    }
}

#[inline]
fn exponential(rng: &mut SimRng, rate: f64) -> f64 {
    let u: f64 = rng.random();
    -(1.0 - u).ln() / rate
}

fn initial_fixation(state: &LatticeState) -> Option<Fixation> {
    state
        .uniform_strategy()
        .map(|strategy| Fixation { strategy, time: 0.0 })
}

/// One arrival of the single-clock construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mark {
    pub time: f64,
    pub site: usize,
    /// Uniform on `(0, rate)`.
    pub label: f64,
    /// Uniform on the neighborhood of `site`.
    pub neighbor: usize,
}

/// Superposition of independent rate-`rate` Poisson processes, one per site,
/// delivered in global time order. Arrival times are drawn one ahead per
/// site; labels and neighbor draws are drawn when the arrival is delivered.
pub struct EventStream {
    rate: f64,
    neighbors: Arc<NeighborTable>,
    queue: BinaryHeap<Arrival>,
    rng: SimRng,
}

impl EventStream {
    pub fn new(rate: f64, neighbors: Arc<NeighborTable>, sites: usize, mut rng: SimRng) -> Self {
        let mut queue = BinaryHeap::new();
        if rate > 0.0 {
            queue.reserve(sites);
            for x in 0..sites {
                queue.push(Arrival {
                    time: exponential(&mut rng, rate),
                    site: x as u32,
                    family: 0,
                });
            }
        }
        Self {
            rate,
            neighbors,
            queue,
            rng,
        }
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Time of the next arrival, if any clock is running.
    pub fn peek_time(&self) -> Option<f64> {
        self.queue.peek().map(|a| a.time)
    }
}

impl Iterator for EventStream {
    type Item = Mark;

    fn next(&mut self) -> Option<Mark> {
        let head = self.queue.pop()?;
        self.queue.push(Arrival {
            time: head.time + exponential(&mut self.rng, self.rate),
            ..head
        });
        let site = head.site as usize;
        let u: f64 = self.rng.sample(Open01);
        let nbrs = self.neighbors.of(site);
        let neighbor = nbrs[self.rng.random_range(0..nbrs.len())] as usize;
        Some(Mark {
            time: head.time,
            site,
            label: u * self.rate,
            neighbor,
        })
    }
}

/// Every site carries a clock of rate `m = max |a_ij|`. At an arrival at `x`
/// with label `U` uniform on `(0, m)` and neighbor `V` uniform on `N_x`, the
/// arrow `V -> x` is active iff `U < |phi(x)|`. An active arrow makes `V`
/// adopt the strategy of `x` when `phi(x) > 0` and makes `x` adopt the
/// strategy of `V` when `phi(x) < 0`.
pub struct GraphicalEngine {
    state: LatticeState,
    payoff: PayoffMatrix,
    stream: EventStream,
    time: f64,
    fixation: Option<Fixation>,
    flips: u64,
}

impl GraphicalEngine {
    pub fn new(cfg: Configuration, payoff: PayoffMatrix, rng: SimRng) -> Self {
        let state = LatticeState::new(cfg);
        let stream = EventStream::new(
            payoff.max_abs(),
            state.shared_neighbors(),
            state.config().len(),
            rng,
        );
        Self {
            fixation: initial_fixation(&state),
            state,
            payoff,
            stream,
            time: 0.0,
            flips: 0,
        }
    }

    /// The per-site clock rate `max |a_ij|`.
    pub fn clock_rate(&self) -> f64 {
        self.stream.rate()
    }
}

impl Engine for GraphicalEngine {
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
        loop {
            match self.stream.peek_time() {
                Some(t) if self.fixation.is_none() && t <= horizon => {}
                _ => {
                    self.time = self.time.max(horizon);
                    return None;
                }
            }
            let mark = self.stream.next()?;
            self.time = mark.time;
            let x = mark.site;
            let phi = self.state.payoff(&self.payoff, x);
            if mark.label >= phi.abs() {
                continue;
            }
            let (target, strategy) = if phi > 0.0 {
                (mark.neighbor, self.state.get(x))
            } else {
                (x, self.state.get(mark.neighbor))
            };
            if self.state.set(target, strategy) {
                self.flips += 1;
                if let Some(s) = self.state.uniform_strategy() {
                    self.fixation = Some(Fixation {
                        strategy: s,
                        time: mark.time,
                    });
                }
                return Some(Event {
                    time: mark.time,
                    site: target,
                    strategy,
                });
            }
        }
    }
}

/// Construction for games with all four payoffs negative. Each site carries
/// four clocks, one per pair `(i, j)`, of rate `-a_ij`, with two uniform
/// neighbor labels `U` and `V`. An arrival is active iff `eta(x) = i` and
/// `eta(U) = j`, in which case `x` adopts the strategy of `V`.
pub struct NegativeGraphicalEngine {
    state: LatticeState,
    rates: [f64; 4],
    queue: BinaryHeap<Arrival>,
    rng: SimRng,
    time: f64,
    fixation: Option<Fixation>,
    flips: u64,
}

const FAMILIES: [(Strategy, Strategy); 4] = [
    (Strategy::One, Strategy::One),
    (Strategy::One, Strategy::Two),
    (Strategy::Two, Strategy::One),
    (Strategy::Two, Strategy::Two),
];

impl NegativeGraphicalEngine {
    pub fn new(cfg: Configuration, payoff: PayoffMatrix, mut rng: SimRng) -> Result<Self, SimError> {
        if !payoff.all_negative() {
            return Err(SimError::NotAllNegative(payoff));
        }
        let rates = FAMILIES.map(|(i, j)| -payoff.entry(i, j));
        let state = LatticeState::new(cfg);
        let mut queue = BinaryHeap::with_capacity(4 * state.config().len());
        for x in 0..state.config().len() {
            for (family, &rate) in rates.iter().enumerate() {
                queue.push(Arrival {
                    time: exponential(&mut rng, rate),
                    site: x as u32,
                    family: family as u8,
                });
            }
        }
        Ok(Self {
            fixation: initial_fixation(&state),
            state,
            rates,
            queue,
            rng,
            time: 0.0,
            flips: 0,
        })
    }
}

impl Engine for NegativeGraphicalEngine {
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
        let n = self.state.neighbors().size();
        loop {
            let head = match self.queue.peek() {
                Some(&head) if self.fixation.is_none() && head.time <= horizon => head,
                _ => {
                    self.time = self.time.max(horizon);
                    return None;
                }
            };
            self.queue.pop();
            self.time = head.time;
            let family = head.family as usize;
            self.queue.push(Arrival {
                time: head.time + exponential(&mut self.rng, self.rates[family]),
                ..head
            });

            let x = head.site as usize;
            let nbrs = self.state.neighbors().of(x);
            let u = nbrs[self.rng.random_range(0..n)] as usize;
            let v = nbrs[self.rng.random_range(0..n)] as usize;
            let (i, j) = FAMILIES[family];
            if self.state.get(x) != i || self.state.get(u) != j {
                continue;
            }
            let strategy = self.state.get(v);
            if self.state.set(x, strategy) {
                self.flips += 1;
                if let Some(s) = self.state.uniform_strategy() {
                    self.fixation = Some(Fixation {
                        strategy: s,
                        time: head.time,
                    });
                }
                return Some(Event {
                    time: head.time,
                    site: x,
                    strategy,
                });
            }
        }
    }
}

/// Simulates the spatial game from the single-clock graphical construction.
pub fn run_graphical(
    cfg0: Configuration,
    a: &PayoffMatrix,
    params: &SimParams,
) -> Result<Trajectory, SimError> {
    params.validate()?;
    let rng = rng::dynamics_stream(params.seed, params.replicate);
    let mut engine = GraphicalEngine::new(cfg0, *a, rng);
    Ok(record(&mut engine, params))
}

/// Simulates a game with all payoffs negative from the four-clock construction.
pub fn run_graphical_negative(
    cfg0: Configuration,
    a: &PayoffMatrix,
    params: &SimParams,
) -> Result<Trajectory, SimError> {
    params.validate()?;
    let rng = rng::dynamics_stream(params.seed, params.replicate);
    let mut engine = NegativeGraphicalEngine::new(cfg0, *a, rng)?;
    Ok(record(&mut engine, params))
}
