//! The replicator equation, the well-mixed limit of the spatial game.
//!
//! For the strategy-1 frequency `u` it reads
//!
//! ```text
//! u' = u (1 - u) ((a1 + a2) u - a2)
//! ```
//!
//! with fixed points `e2 = 0`, `e1 = 1` and, when `a1 + a2 != 0`,
//! `e12 = a2 / (a1 + a2)`. The long-run behavior depends only on the signs
//! of `a1` and `a2`.

use std::fmt;

use thiserror::Error;

use crate::payoff::{Nature, PayoffMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReplicatorError {
    #[error("initial frequency {0} is outside [0, 1]")]
    InitialFrequency(f64),
    #[error("horizon must be positive and finite, got {0}")]
    Horizon(f64),
    #[error("step {dt} must be positive and smaller than the horizon {horizon}")]
    Step { dt: f64, horizon: f64 },
}

/// Long-run behavior of the replicator equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReplicatorRegime {
    Strategy1Wins,
    Strategy2Wins,
    Coexistence,
    Bistable,
    /// `a1 = 0` or `a2 = 0`.
    Degenerate,
}

impl ReplicatorRegime {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReplicatorRegime::Strategy1Wins => "strategy1_wins",
            ReplicatorRegime::Strategy2Wins => "strategy2_wins",
            ReplicatorRegime::Coexistence => "coexistence",
            ReplicatorRegime::Bistable => "bistable",
            ReplicatorRegime::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for ReplicatorRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The interior rest point `e12`, when there is one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InteriorFixedPoint {
    Inside(f64),
    /// `e12` exists but is not in `(0, 1)`.
    Outside(f64),
    /// `a1 + a2 = 0`.
    Undefined,
}

impl InteriorFixedPoint {
    pub fn inside(&self) -> Option<f64> {
        match *self {
            InteriorFixedPoint::Inside(e) => Some(e),
            _ => None,
        }
    }
}

pub fn replicator_rhs(u1: f64, a: &PayoffMatrix) -> f64 {
    let (a1, a2) = (a.a1(), a.a2());
    u1 * (1.0 - u1) * ((a1 + a2) * u1 - a2)
}

pub fn interior_fixed_point(a: &PayoffMatrix) -> InteriorFixedPoint {
    let sum = a.a1() + a.a2();
    if sum == 0.0 {
        return InteriorFixedPoint::Undefined;
    }
    let e = a.a2() / sum;
    if e > 0.0 && e < 1.0 {
        InteriorFixedPoint::Inside(e)
    } else {
        InteriorFixedPoint::Outside(e)
    }
}

pub fn replicator_regime(a: &PayoffMatrix) -> ReplicatorRegime {
    let nature = a.nature();
    match (nature.first, nature.second) {
        (Nature::Selfish, Nature::Altruistic) => ReplicatorRegime::Strategy1Wins,
        (Nature::Altruistic, Nature::Selfish) => ReplicatorRegime::Strategy2Wins,
        (Nature::Altruistic, Nature::Altruistic) => ReplicatorRegime::Coexistence,
        (Nature::Selfish, Nature::Selfish) => ReplicatorRegime::Bistable,
        _ => ReplicatorRegime::Degenerate,
    }
}

/// Predicted limit of `u1` started from `u0`, if the regime determines one.
pub fn predicted_limit(a: &PayoffMatrix, u0: f64) -> Option<f64> {
    if u0 <= 0.0 {
        return Some(0.0);
    }
    if u0 >= 1.0 {
        return Some(1.0);
    }
    match replicator_regime(a) {
        ReplicatorRegime::Strategy1Wins => Some(1.0),
        ReplicatorRegime::Strategy2Wins => Some(0.0),
        ReplicatorRegime::Coexistence => interior_fixed_point(a).inside(),
        ReplicatorRegime::Bistable => {
            let e = interior_fixed_point(a).inside()?;
            if u0 > e {
                Some(1.0)
            } else if u0 < e {
                Some(0.0)
            } else {
                Some(e)
            }
        }
        ReplicatorRegime::Degenerate => None,
    }
}

/// Fixed-step solution of the replicator equation.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeTrajectory {
    pub times: Vec<f64>,
    pub u1: Vec<f64>,
}

impl OdeTrajectory {
    pub fn final_value(&self) -> f64 {
        *self.u1.last().expect("trajectory holds at least the initial point")
    }

    /// The final value if `u1` moved by at most `tol` over the last tenth of
    /// the horizon.
    pub fn settled_value(&self, tol: f64) -> Option<f64> {
        let end = *self.times.last()?;
        let start = self.times[0];
        let cutoff = end - 0.1 * (end - start);
        let tail = self
            .times
            .iter()
            .zip(&self.u1)
            .filter(|(&t, _)| t >= cutoff)
            .map(|(_, &u)| u);
        let (lo, hi) = tail.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), u| {
            (lo.min(u), hi.max(u))
        });
        (hi - lo <= tol).then(|| self.final_value())
    }
}

pub const DEFAULT_STEP: f64 = 0.01;
pub const SETTLE_TOLERANCE: f64 = 1e-4;

/// Classical fourth-order Runge-Kutta with step `dt` up to `horizon`; the
/// last step is shortened to land on the horizon exactly.
pub fn integrate_replicator(
    a: &PayoffMatrix,
    u0: f64,
    horizon: f64,
    dt: f64,
) -> Result<OdeTrajectory, ReplicatorError> {
    if !(0.0..=1.0).contains(&u0) {
        return Err(ReplicatorError::InitialFrequency(u0));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(ReplicatorError::Horizon(horizon));
    }
    if !(dt > 0.0 && dt < horizon) {
        return Err(ReplicatorError::Step { dt, horizon });
    }

    let steps = (horizon / dt).ceil() as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut values = Vec::with_capacity(steps + 1);
    times.push(0.0);
    values.push(u0);

    let f = |u: f64| replicator_rhs(u, a);
    let mut u = u0;
    for k in 1..=steps {
        let t_prev = (k - 1) as f64 * dt;
        let t = if k == steps { horizon } else { k as f64 * dt };
        let h = t - t_prev;
        if h <= 0.0 {
            continue;
        }
        let k1 = f(u);
        let k2 = f(u + 0.5 * h * k1);
        let k3 = f(u + 0.5 * h * k2);
        let k4 = f(u + h * k3);
        u = (u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).clamp(0.0, 1.0);
        times.push(t);
        values.push(u);
    }
    Ok(OdeTrajectory {
        times,
        u1: values,
    })
}
