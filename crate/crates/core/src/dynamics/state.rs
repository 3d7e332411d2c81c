use std::sync::Arc;

use crate::lattice::{payoff_from_count, Configuration, LatticeSpec, NeighborTable, Strategy};
use crate::payoff::PayoffMatrix;

/// Summary statistics of a configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    /// Fraction of sites following strategy 1.
    pub density1: f64,
    /// Number of sites `x` with `eta(x) != eta(x + e_1)`. In one dimension
    /// this is the number of interfaces (boundary particles).
    pub interfaces: usize,
    /// `interfaces / sites`: the fraction of disagreeing nearest pairs along
    /// the first axis.
    pub heterozygosity: f64,
}

/// A configuration together with the incremental bookkeeping every
/// simulator needs: strategy-1 neighbor counts, the global strategy-1 count
/// and the number of disagreeing pairs along the first axis.
#[derive(Debug, Clone)]
pub struct LatticeState {
    cfg: Configuration,
    neighbors: Arc<NeighborTable>,
    ones: Vec<u32>,
    count1: usize,
    axis_pairs: usize,
}

impl LatticeState {
    pub fn new(cfg: Configuration) -> Self {
        let neighbors = Arc::new(NeighborTable::new(cfg.spec()));
        Self::with_table(cfg, neighbors)
    }

    pub fn with_table(cfg: Configuration, neighbors: Arc<NeighborTable>) -> Self {
        let sites = cfg.len();
        let ones = (0..sites)
            .map(|x| {
                neighbors
                    .of(x)
                    .iter()
                    .filter(|&&y| cfg.get(y as usize) == Strategy::One)
                    .count() as u32
            })
            .collect();
        let count1 = cfg.count(Strategy::One);
        let spec = cfg.spec();
        let axis_pairs = (0..sites)
            .filter(|&x| cfg.get(x) != cfg.get(spec.step(x, 0, 1)))
            .count();
        Self {
            cfg,
            neighbors,
            ones,
            count1,
            axis_pairs,
        }
    }

    #[inline]
    pub fn spec(&self) -> &LatticeSpec {
        self.cfg.spec()
    }

    pub fn config(&self) -> &Configuration {
        &self.cfg
    }

    pub fn into_config(self) -> Configuration {
        self.cfg
    }

    #[inline]
    pub fn neighbors(&self) -> &NeighborTable {
        &self.neighbors
    }

    pub(crate) fn shared_neighbors(&self) -> Arc<NeighborTable> {
        Arc::clone(&self.neighbors)
    }

    #[inline]
    pub fn get(&self, site: usize) -> Strategy {
        self.cfg.get(site)
    }

    /// Strategy-1 players among the neighbors of `site`.
    #[inline]
    pub fn ones(&self, site: usize) -> usize {
        self.ones[site] as usize
    }

    #[inline]
    pub fn payoff(&self, a: &PayoffMatrix, site: usize) -> f64 {
        payoff_from_count(a, self.get(site), self.ones(site), self.neighbors.size())
    }

    pub fn count1(&self) -> usize {
        self.count1
    }

    pub fn interfaces(&self) -> usize {
        self.axis_pairs
    }

    pub fn uniform_strategy(&self) -> Option<Strategy> {
        if self.count1 == 0 {
            Some(Strategy::Two)
        } else if self.count1 == self.cfg.len() {
            Some(Strategy::One)
        } else {
            None
        }
    }

    pub fn observables(&self) -> Observables {
        let sites = self.cfg.len() as f64;
        Observables {
            density1: self.count1 as f64 / sites,
            interfaces: self.axis_pairs,
            heterozygosity: self.axis_pairs as f64 / sites,
        }
    }

    fn axis_disagreements_at(&self, site: usize) -> usize {
        let spec = self.cfg.spec();
        let own = self.cfg.get(site);
        let left = spec.step(site, 0, -1);
        let right = spec.step(site, 0, 1);
        (self.cfg.get(left) != own) as usize + (self.cfg.get(right) != own) as usize
    }

    /// Changes the strategy at `site` and returns the new strategy.
    pub fn flip(&mut self, site: usize) -> Strategy {
        let before = self.axis_disagreements_at(site);
        let new = self.cfg.get(site).other();
        self.cfg.set(site, new);
        let after = self.axis_disagreements_at(site);
        self.axis_pairs = self.axis_pairs + after - before;
        match new {
            Strategy::One => {
                self.count1 += 1;
                for &y in self.neighbors.of(site) {
                    self.ones[y as usize] += 1;
                }
            }
            Strategy::Two => {
                self.count1 -= 1;
                for &y in self.neighbors.of(site) {
                    self.ones[y as usize] -= 1;
                }
            }
        }
        new
    }

    /// Sets `site` to `strategy`, returning whether anything changed.
    pub fn set(&mut self, site: usize, strategy: Strategy) -> bool {
        if self.get(site) == strategy {
            return false;
        }
        self.flip(site);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn incremental_counts_match_recount(
            values in proptest::collection::vec(1u8..=2, 36),
            flips in proptest::collection::vec(0usize..36, 0..50),
        ) {
            let spec = LatticeSpec::cube(2, 1, 6).unwrap();
            let cfg = Configuration::from_values(&spec, &values).unwrap();
            let mut state = LatticeState::new(cfg);
            for x in flips {
                state.flip(x);
            }
            let fresh = LatticeState::new(state.config().clone());
            prop_assert_eq!(&state.ones, &fresh.ones);
            prop_assert_eq!(state.count1, fresh.count1);
            prop_assert_eq!(state.axis_pairs, fresh.axis_pairs);
            for x in 0..36 {
                prop_assert_eq!(state.ones(x), state.config().ones_around(x));
            }
        }
    }
}
