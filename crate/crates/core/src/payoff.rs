//! Two-strategy payoff matrices and the selfish/altruistic classification.

use std::fmt;

use thiserror::Error;

use crate::lattice::Strategy;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PayoffError {
    #[error("payoff a{row}{col} must be finite, got {value}")]
    NonFinite { row: u8, col: u8, value: f64 },
}

/// The 2×2 game matrix `A = (a_ij)`, where `a_ij` is the payoff a strategy-`i`
/// player receives from a strategy-`j` neighbor.
///
/// Entries are rates: a positive local payoff is a birth rate and the
/// magnitude of a negative one is a death rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffMatrix {
    a11: f64,
    a12: f64,
    a21: f64,
    a22: f64,
}

impl PayoffMatrix {
    pub fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Result<Self, PayoffError> {
        for (row, col, value) in [(1, 1, a11), (1, 2, a12), (2, 1, a21), (2, 2, a22)] {
            if !value.is_finite() {
                return Err(PayoffError::NonFinite { row, col, value });
            }
        }
        Ok(Self { a11, a12, a21, a22 })
    }

    /// Builds a matrix from rows `[[a11, a12], [a21, a22]]`.
    pub fn from_rows(rows: [[f64; 2]; 2]) -> Result<Self, PayoffError> {
        Self::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn a11(&self) -> f64 {
        self.a11
    }

    pub fn a12(&self) -> f64 {
        self.a12
    }

    pub fn a21(&self) -> f64 {
        self.a21
    }

    pub fn a22(&self) -> f64 {
        self.a22
    }

    /// Payoff of a `focal` player against an `opponent`.
    #[inline]
    pub fn entry(&self, focal: Strategy, opponent: Strategy) -> f64 {
        match (focal, opponent) {
            (Strategy::One, Strategy::One) => self.a11,
            (Strategy::One, Strategy::Two) => self.a12,
            (Strategy::Two, Strategy::One) => self.a21,
            (Strategy::Two, Strategy::Two) => self.a22,
        }
    }

    /// `a1 = a11 - a21`.
    pub fn a1(&self) -> f64 {
        self.a11 - self.a21
    }

    /// `a2 = a22 - a12`.
    pub fn a2(&self) -> f64 {
        self.a22 - self.a12
    }

    /// Largest payoff magnitude; the per-site clock rate of the graphical
    /// construction.
    pub fn max_abs(&self) -> f64 {
        self.a11
            .abs()
            .max(self.a12.abs())
            .max(self.a21.abs())
            .max(self.a22.abs())
    }

    /// The same game with strategy labels exchanged: `a11 <-> a22`, `a12 <-> a21`.
    pub fn label_swapped(&self) -> Self {
        Self {
            a11: self.a22,
            a12: self.a21,
            a21: self.a12,
            a22: self.a11,
        }
    }

    /// Multiplies every payoff by `factor`, which rescales time by `1 / factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self, PayoffError> {
        Self::new(
            self.a11 * factor,
            self.a12 * factor,
            self.a21 * factor,
            self.a22 * factor,
        )
    }

    pub fn all_negative(&self) -> bool {
        self.a11 < 0.0 && self.a12 < 0.0 && self.a21 < 0.0 && self.a22 < 0.0
    }

    pub fn nature(&self) -> StrategyNature {
        StrategyNature {
            first: Nature::from_sign(self.a1()),
            second: Nature::from_sign(self.a2()),
        }
    }
}

impl fmt::Display for PayoffMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(({}, {}), ({}, {}))",
            self.a11, self.a12, self.a21, self.a22
        )
    }
}

/// Whether a strategy favors its own kind (`a_i > 0`) or the other one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Nature {
    Selfish,
    Altruistic,
    /// `a_i = 0` exactly.
    Neutral,
}

impl Nature {
    fn from_sign(value: f64) -> Self {
        if value > 0.0 {
            Nature::Selfish
        } else if value < 0.0 {
            Nature::Altruistic
        } else {
            Nature::Neutral
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Nature::Selfish => "selfish",
            Nature::Altruistic => "altruistic",
            Nature::Neutral => "neutral-boundary",
        }
    }
}

impl fmt::Display for Nature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StrategyNature {
    pub first: Nature,
    pub second: Nature,
}

pub fn strategy_nature(a: &PayoffMatrix) -> StrategyNature {
    a.nature()
}
