//! Periodic lattices, interaction neighborhoods and strategy configurations.
//!
//! Sites of a torus with side lengths `L_0, ..., L_{d-1}` are stored as flat
//! indices with the first coordinate varying fastest. The interaction
//! neighborhood of `x` is every other site within Chebyshev distance `M`
//! (the dispersal range), so it has `N = (2M + 1)^d - 1` members.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::payoff::PayoffMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("dispersal range M must be at least 1")]
    ZeroRange,
    #[error("expected {expected} side lengths for d = {expected}, got {got}")]
    SideCount { expected: usize, got: usize },
    #[error("side length L[{axis}] = {side} violates L >= 2(2M+1) = {min}")]
    SideTooShort { axis: usize, side: usize, min: usize },
    #[error("side length L[{axis}] = {side} must be even")]
    OddSide { axis: usize, side: usize },
    #[error("side length L[{axis}] = {side} is smaller than 2M+1 = {min}; neighborhoods would overlap themselves")]
    SelfWrapping { axis: usize, side: usize, min: usize },
    #[error("lattice has {sites} sites, more than the supported {max}")]
    TooLarge { sites: usize, max: usize },
    #[error("configuration has {got} sites but the lattice has {expected}")]
    SiteCount { expected: usize, got: usize },
    #[error("invalid strategy value {0}; expected 1 or 2")]
    BadStrategy(u8),
}

/// One of the two strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Strategy {
    One = 1,
    Two = 2,
}

impl Strategy {
    #[inline]
    pub fn other(self) -> Self {
        match self {
            Strategy::One => Strategy::Two,
            Strategy::Two => Strategy::One,
        }
    }

    #[inline]
    pub fn as_u8(self) -> u8 {
        self as u8
    }

    pub fn from_u8(value: u8) -> Result<Self, LatticeError> {
        match value {
            1 => Ok(Strategy::One),
            2 => Ok(Strategy::Two),
            v => Err(LatticeError::BadStrategy(v)),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// `N = (2M + 1)^d - 1`.
pub fn neighborhood_size(range: usize, dim: usize) -> usize {
    (2 * range + 1).pow(dim as u32) - 1
}

const MAX_SITES: usize = 1 << 31;

/// Dimension, dispersal range and torus side lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSpec {
    range: usize,
    sides: Vec<usize>,
    strides: Vec<usize>,
    sites: usize,
    /// Neighbor offsets in lexicographic order, first coordinate most significant.
    offsets: Vec<Vec<isize>>,
}

impl LatticeSpec {
    /// A torus with even sides of length at least `2(2M + 1)`.
    pub fn new(dim: usize, range: usize, sides: Vec<usize>) -> Result<Self, LatticeError> {
        Self::check_shape(dim, range, &sides)?;
        let min = 2 * (2 * range + 1);
        for (axis, &side) in sides.iter().enumerate() {
            if side < min {
                return Err(LatticeError::SideTooShort { axis, side, min });
            }
            if side % 2 != 0 {
                return Err(LatticeError::OddSide { axis, side });
            }
        }
        Ok(Self::build(range, sides))
    }

    /// Cube torus `L^d`.
    pub fn cube(dim: usize, range: usize, side: usize) -> Result<Self, LatticeError> {
        Self::new(dim, range, vec![side; dim])
    }

    /// A small torus for exhaustive checks: sides need only exceed `2M`, so
    /// every neighborhood still consists of `N` distinct sites, but a
    /// neighborhood may meet itself around the torus at distance `2M`.
    pub fn compact(dim: usize, range: usize, sides: Vec<usize>) -> Result<Self, LatticeError> {
        Self::check_shape(dim, range, &sides)?;
        let min = 2 * range + 1;
        for (axis, &side) in sides.iter().enumerate() {
            if side < min {
                return Err(LatticeError::SelfWrapping { axis, side, min });
            }
        }
        Ok(Self::build(range, sides))
    }

    fn check_shape(dim: usize, range: usize, sides: &[usize]) -> Result<(), LatticeError> {
        if dim == 0 {
            return Err(LatticeError::ZeroDimension);
        }
        if range == 0 {
            return Err(LatticeError::ZeroRange);
        }
        if sides.len() != dim {
            return Err(LatticeError::SideCount {
                expected: dim,
                got: sides.len(),
            });
        }
        let sites = sides
            .iter()
            .try_fold(1usize, |acc, &s| acc.checked_mul(s))
            .unwrap_or(usize::MAX);
        if sites > MAX_SITES {
            return Err(LatticeError::TooLarge {
                sites,
                max: MAX_SITES,
            });
        }
        Ok(())
    }

    fn build(range: usize, sides: Vec<usize>) -> Self {
        let mut strides = Vec::with_capacity(sides.len());
        let mut acc = 1;
        for &s in &sides {
            strides.push(acc);
            acc *= s;
        }
        let offsets = chebyshev_offsets(sides.len(), range as isize)
            .into_iter()
            .filter(|o| o.iter().any(|&c| c != 0))
            .collect();
        Self {
            range,
            sides,
            strides,
            sites: acc,
            offsets,
        }
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn sides(&self) -> &[usize] {
        &self.sides
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn neighborhood_size(&self) -> usize {
        self.offsets.len()
    }

    pub fn offsets(&self) -> &[Vec<isize>] {
        &self.offsets
    }

    pub fn coords(&self, site: usize) -> Vec<usize> {
        let mut rest = site;
        self.sides
            .iter()
            .map(|&s| {
                let c = rest % s;
                rest /= s;
                c
            })
            .collect()
    }

    pub fn index(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.sides)
            .zip(&self.strides)
            .map(|((&c, &s), &stride)| (c % s) * stride)
            .sum()
    }

    /// The site reached from `site` by moving `offset`, wrapping around.
    pub fn shift(&self, site: usize, offset: &[isize]) -> usize {
        let mut rest = site;
        let mut out = 0;
        for ((&side, &stride), &o) in self.sides.iter().zip(&self.strides).zip(offset) {
            let c = rest % side;
            rest /= side;
            let moved = (c as isize + o).rem_euclid(side as isize) as usize;
            out += moved * stride;
        }
        out
    }

    /// `x + step * e_axis`.
    pub fn step(&self, site: usize, axis: usize, step: isize) -> usize {
        let side = self.sides[axis];
        let stride = self.strides[axis];
        let c = (site / stride) % side;
        let moved = (c as isize + step).rem_euclid(side as isize) as usize;
        site - c * stride + moved * stride
    }

    /// The interaction neighborhood of `site` in lexicographic offset order.
    pub fn neighbors(&self, site: usize) -> Vec<usize> {
        self.offsets.iter().map(|o| self.shift(site, o)).collect()
    }

    /// Periodic Chebyshev distance.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        let ca = self.coords(a);
        let cb = self.coords(b);
        ca.iter()
            .zip(&cb)
            .zip(&self.sides)
            .map(|((&x, &y), &s)| {
                let d = x.abs_diff(y);
                d.min(s - d)
            })
            .max()
            .unwrap_or(0)
    }
}

/// Every offset vector with entries in `[-r, r]`, lexicographically sorted.
pub(crate) fn chebyshev_offsets(dim: usize, r: isize) -> Vec<Vec<isize>> {
    let mut out: Vec<Vec<isize>> = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (-r..=r).map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

/// Precomputed neighbor lists, `N` entries per site.
#[derive(Debug, Clone)]
pub struct NeighborTable {
    n: usize,
    table: Vec<u32>,
}

impl NeighborTable {
    pub fn new(spec: &LatticeSpec) -> Self {
        let n = spec.neighborhood_size();
        let mut table = Vec::with_capacity(n * spec.sites());
        for x in 0..spec.sites() {
            table.extend(spec.neighbors(x).into_iter().map(|y| y as u32));
        }
        Self { n, table }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn of(&self, site: usize) -> &[u32] {
        &self.table[site * self.n..(site + 1) * self.n]
    }
}

/// A strategy at every site of a torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    spec: Arc<LatticeSpec>,
    sites: Vec<Strategy>,
}

impl Configuration {
    pub fn uniform(spec: &LatticeSpec, strategy: Strategy) -> Self {
        Self {
            spec: Arc::new(spec.clone()),
            sites: vec![strategy; spec.sites()],
        }
    }

    pub fn from_strategies(spec: &LatticeSpec, sites: Vec<Strategy>) -> Result<Self, LatticeError> {
        if sites.len() != spec.sites() {
            return Err(LatticeError::SiteCount {
                expected: spec.sites(),
                got: sites.len(),
            });
        }
        Ok(Self {
            spec: Arc::new(spec.clone()),
            sites,
        })
    }

    /// Builds a configuration from values in `{1, 2}`.
    pub fn from_values(spec: &LatticeSpec, values: &[u8]) -> Result<Self, LatticeError> {
        let sites = values
            .iter()
            .map(|&v| Strategy::from_u8(v))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_strategies(spec, sites)
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    #[inline]
    pub fn get(&self, site: usize) -> Strategy {
        self.sites[site]
    }

    #[inline]
    pub fn set(&mut self, site: usize, strategy: Strategy) {
        self.sites[site] = strategy;
    }

    pub fn strategies(&self) -> &[Strategy] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn count(&self, strategy: Strategy) -> usize {
        self.sites.iter().filter(|&&s| s == strategy).count()
    }

    /// The strategy held by every site, if the configuration is uniform.
    pub fn uniform_strategy(&self) -> Option<Strategy> {
        let first = *self.sites.first()?;
        self.sites.iter().all(|&s| s == first).then_some(first)
    }

    /// Exchanges the two strategy labels at every site.
    pub fn relabeled(&self) -> Self {
        Self {
            spec: Arc::clone(&self.spec),
            sites: self.sites.iter().map(|s| s.other()).collect(),
        }
    }

    /// The configuration `y -> self(y - offset)`.
    pub fn translated(&self, offset: &[isize]) -> Self {
        let mut sites = self.sites.clone();
        for (x, &s) in self.sites.iter().enumerate() {
            sites[self.spec.shift(x, offset)] = s;
        }
        Self {
            spec: Arc::clone(&self.spec),
            sites,
        }
    }

    /// Number of strategy-1 sites in the interaction neighborhood of `site`.
    pub fn ones_around(&self, site: usize) -> usize {
        self.spec
            .offsets()
            .iter()
            .filter(|o| self.sites[self.spec.shift(site, o)] == Strategy::One)
            .count()
    }

    /// Neighbor fractions `(f1, f2)` around `site`.
    pub fn fractions(&self, site: usize) -> (f64, f64) {
        let n = self.spec.neighborhood_size();
        fractions_from_count(self.ones_around(site), n)
    }
}

/// `(f1, f2) = (k / N, (N - k) / N)`; the two fractions sum to exactly one.
#[inline]
pub fn fractions_from_count(ones: usize, n: usize) -> (f64, f64) {
    let n_f = n as f64;
    (ones as f64 / n_f, (n - ones) as f64 / n_f)
}

/// Payoff of a `focal` player with `ones` strategy-1 players among its `n`
/// neighbors: `a_{i1} f1 + a_{i2} f2`.
#[inline]
pub fn payoff_from_count(a: &PayoffMatrix, focal: Strategy, ones: usize, n: usize) -> f64 {
    let (f1, f2) = fractions_from_count(ones, n);
    a.entry(focal, Strategy::One) * f1 + a.entry(focal, Strategy::Two) * f2
}

/// Local payoff `phi(x, eta)` of the player at `site`.
pub fn local_payoff(site: usize, cfg: &Configuration, a: &PayoffMatrix) -> f64 {
    payoff_from_count(
        a,
        cfg.get(site),
        cfg.ones_around(site),
        cfg.spec().neighborhood_size(),
    )
}
