//! Flip rates of the spatial game and of the biased voter model.
//!
//! In the spatial game a player with positive payoff `phi` gives birth at
//! rate `phi` onto a uniformly chosen neighbor, and a player with negative
//! payoff dies at rate `-phi` and is replaced by a copy of a uniformly chosen
//! neighbor. The total rate at which site `x` changes strategy is
//!
//! ```text
//! c(x) = max(0, -phi(x)) f_other(x) + (1/N) sum_{y ~ x, eta(y) != eta(x)} max(0, phi(y))
//! ```
//!
//! A zero payoff produces neither births nor deaths.

use crate::lattice::{neighborhood_size, payoff_from_count, Configuration, Strategy};
use crate::payoff::PayoffMatrix;

use super::state::LatticeState;

/// Total rate at which the player at `site` changes strategy.
pub fn flip_rate(site: usize, cfg: &Configuration, a: &PayoffMatrix) -> f64 {
    let spec = cfg.spec();
    let n = spec.neighborhood_size();
    let own = cfg.get(site);
    let phi = payoff_from_count(a, own, cfg.ones_around(site), n);
    let mut disagreeing = 0usize;
    let mut births = 0.0;
    for offset in spec.offsets() {
        let y = spec.shift(site, offset);
        if cfg.get(y) != own {
            disagreeing += 1;
            let phi_y = payoff_from_count(a, cfg.get(y), cfg.ones_around(y), n);
            if phi_y > 0.0 {
                births += phi_y;
            }
        }
    }
    combine(phi, disagreeing, births, n)
}

#[inline]
fn combine(phi: f64, disagreeing: usize, births: f64, n: usize) -> f64 {
    let death = if phi < 0.0 {
        -phi * (disagreeing as f64 / n as f64)
    } else {
        0.0
    };
    death + births / n as f64
}

/// Biased voter flip rate: a type-2 site flips at `mu1 f1`, a type-1 site at `mu2 f2`.
pub fn biased_voter_rate(site: usize, cfg: &Configuration, mu1: f64, mu2: f64) -> f64 {
    let n = cfg.spec().neighborhood_size();
    let ones = cfg.ones_around(site);
    voter_rate(cfg.get(site), ones, n, mu1, mu2)
}

#[inline]
fn voter_rate(own: Strategy, ones: usize, n: usize, mu1: f64, mu2: f64) -> f64 {
    match own {
        Strategy::Two => mu1 * (ones as f64 / n as f64),
        Strategy::One => mu2 * ((n - ones) as f64 / n as f64),
    }
}

/// Bounds `(mu1, mu2)` of the biased voter models sandwiching the game.
///
/// With `phi1(z) = (a12 - a11) z/N + a11` and `phi2(z) = (a22 - a21) z/N + a21`
/// the payoffs of a type-1 and type-2 player with `z` type-2 neighbors,
///
/// ```text
/// mu1 = min_{z != N} max(0, -phi2(z)) + min_{z != 0} max(0, phi1(z))
/// mu2 = max_{z != 0} max(0, -phi1(z)) + max_{z != N} max(0, phi2(z))
/// ```
pub fn mu_bounds(a: &PayoffMatrix, range: usize, dim: usize) -> (f64, f64) {
    let n = neighborhood_size(range, dim);
    let phi1 = |z: usize| (a.a12() - a.a11()) * (z as f64 / n as f64) + a.a11();
    let phi2 = |z: usize| (a.a22() - a.a21()) * (z as f64 / n as f64) + a.a21();
    let min = |it: &mut dyn Iterator<Item = f64>| it.fold(f64::INFINITY, f64::min);
    let max = |it: &mut dyn Iterator<Item = f64>| it.fold(f64::NEG_INFINITY, f64::max);
    let mu1 = min(&mut (0..n).map(|z| (-phi2(z)).max(0.0))) + min(&mut (1..=n).map(|z| phi1(z).max(0.0)));
    let mu2 = max(&mut (1..=n).map(|z| (-phi1(z)).max(0.0))) + max(&mut (0..n).map(|z| phi2(z).max(0.0)));
    (mu1, mu2)
}

/// Local flip rates of a two-type spin system, evaluated against the cached
/// neighbor counts of a [`LatticeState`].
pub trait SpinRates {
    /// Largest Chebyshev distance at which a flip can change a rate.
    fn influence_radius(&self, range: usize) -> usize;

    fn rate(&self, state: &LatticeState, site: usize) -> f64;
}

#[derive(Debug, Clone, Copy)]
pub struct GameRates {
    pub payoff: PayoffMatrix,
}

impl SpinRates for GameRates {
    /// A flip at `x` changes payoffs within distance `M`, hence rates within `2M`.
    fn influence_radius(&self, range: usize) -> usize {
        2 * range
    }

    #[inline]
    fn rate(&self, state: &LatticeState, site: usize) -> f64 {
        let n = state.neighbors().size();
        let own = state.get(site);
        let phi = state.payoff(&self.payoff, site);
        let mut disagreeing = 0usize;
        let mut births = 0.0;
        for &y in state.neighbors().of(site) {
            let y = y as usize;
            if state.get(y) != own {
                disagreeing += 1;
                let phi_y = state.payoff(&self.payoff, y);
                if phi_y > 0.0 {
                    births += phi_y;
                }
            }
        }
        combine(phi, disagreeing, births, n)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VoterRates {
    pub mu1: f64,
    pub mu2: f64,
}

impl SpinRates for VoterRates {
    fn influence_radius(&self, range: usize) -> usize {
        range
    }

    #[inline]
    fn rate(&self, state: &LatticeState, site: usize) -> f64 {
        voter_rate(
            state.get(site),
            state.ones(site),
            state.neighbors().size(),
            self.mu1,
            self.mu2,
        )
    }
}
