//! Parameter-region predicates, the ordering taxonomy of symmetric 2x2
//! games, empirical regime classification and phase-diagram sweeps.

mod outcome;
mod sweep;

use std::fmt;

use crate::lattice::neighborhood_size;
use crate::payoff::PayoffMatrix;

pub use outcome::{
    empirical_outcome, heterozygosity, is_sparse, HeterozygosityEstimate, Outcome, OutcomeSummary,
    Thresholds,
};
pub use sweep::{sweep_phase_diagram, PredicateFlags, RegionReport, SweepSpec};

/// Slope of the coexistence triangle,
/// `2M ((2M+1)^d - 2) / ((M+1) (2M (2M+1)^(d-1) - 1))`.
pub fn c_factor(range: usize, dim: usize) -> f64 {
    let m = range as f64;
    let side = 2.0 * m + 1.0;
    let num = 2.0 * m * (side.powi(dim as i32) - 2.0);
    let den = (m + 1.0) * (2.0 * m * side.powi(dim as i32 - 1) - 1.0);
    num / den
}

/// Sufficient condition for strategy 1 to win obtained by comparison with a
/// biased voter model: `a12 > a21` and
/// `max(a22, a21) + a21/(N-1) < min(a11, a12) + a12/(N-1)`.
///
/// With `N = 1` the correction terms are undefined and the test is false.
pub fn voter_bound_win(a: &PayoffMatrix, range: usize, dim: usize) -> bool {
    let n = neighborhood_size(range, dim);
    if n < 2 {
        return false;
    }
    let k = (n - 1) as f64;
    a.a12() > a.a21() && a.a22().max(a.a21()) + a.a21() / k < a.a11().min(a.a12()) + a.a12() / k
}

/// [`voter_bound_win`] for strategy 2.
pub fn voter_bound_win_swapped(a: &PayoffMatrix, range: usize, dim: usize) -> bool {
    voter_bound_win(&a.label_swapped(), range, dim)
}

/// Win condition for strategy 1 under nearest-neighbor interactions on the
/// line: `a11 > max(a22, a21) + (a21 - a12)`.
pub fn nearest_neighbor_win(a: &PayoffMatrix) -> bool {
    a.a11() > a.a22().max(a.a21()) + (a.a21() - a.a12())
}

/// [`nearest_neighbor_win`] for strategy 2.
pub fn nearest_neighbor_win_swapped(a: &PayoffMatrix) -> bool {
    nearest_neighbor_win(&a.label_swapped())
}

/// Whether every payoff and both row sums are nonzero and the row sums
/// differ. On the line with nearest-neighbor interactions such games
/// cluster.
pub fn generic_payoffs(a: &PayoffMatrix) -> bool {
    let s1 = a.a11() + a.a12();
    let s2 = a.a22() + a.a21();
    a.a11() * a.a12() * a.a21() * a.a22() * s1 * s2 != 0.0 && s1 != s2
}

/// `c a22 < a11 < -m` and `c a11 < a22 < -m` with `c = c_factor(M, d)`.
pub fn in_coexistence_triangle(a: &PayoffMatrix, range: usize, dim: usize, m: f64) -> bool {
    let c = c_factor(range, dim);
    let (a11, a22) = (a.a11(), a.a22());
    c * a22 < a11 && a11 < -m && c * a11 < a22 && a22 < -m
}

/// One of the four payoffs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Entry {
    A11,
    A12,
    A21,
    A22,
}

impl Entry {
    pub fn as_str(&self) -> &'static str {
        match self {
            Entry::A11 => "a11",
            Entry::A12 => "a12",
            Entry::A21 => "a21",
            Entry::A22 => "a22",
        }
    }

    fn value(&self, a: &PayoffMatrix) -> f64 {
        match self {
            Entry::A11 => a.a11(),
            Entry::A12 => a.a12(),
            Entry::A21 => a.a21(),
            Entry::A22 => a.a22(),
        }
    }
}

/// Strict ordering class of a game with four distinct payoffs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GameClass {
    Ordered {
        /// Entries of the canonical matrix from largest to smallest. The
        /// canonical matrix has `a12 > a21`.
        ranking: [Entry; 4],
        /// Whether the strategies were relabeled to reach `a12 > a21`.
        swapped: bool,
    },
    /// Two or more payoffs coincide.
    Degenerate,
}

const NAMED: [([Entry; 4], &str); 4] = [
    ([Entry::A12, Entry::A22, Entry::A11, Entry::A21], "prisoner's dilemma"),
    ([Entry::A22, Entry::A12, Entry::A11, Entry::A21], "stag hunt"),
    ([Entry::A12, Entry::A22, Entry::A21, Entry::A11], "hawk-dove"),
    ([Entry::A12, Entry::A21, Entry::A11, Entry::A22], "battle of the sexes"),
];

impl GameClass {
    /// Popular name of the class, if it has one.
    pub fn name(&self) -> Option<&'static str> {
        match self {
            GameClass::Ordered { ranking, .. } => NAMED
                .iter()
                .find(|(r, _)| r == ranking)
                .map(|&(_, name)| name),
            GameClass::Degenerate => None,
        }
    }

    /// Ordering such as `a12>a22>a11>a21`, or `degenerate-ordering`.
    pub fn ordering(&self) -> String {
        match self {
            GameClass::Ordered { ranking, .. } => ranking
                .iter()
                .map(|e| e.as_str())
                .collect::<Vec<_>>()
                .join(">"),
            GameClass::Degenerate => "degenerate-ordering".to_string(),
        }
    }
}

impl fmt::Display for GameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name() {
            Some(name) => write!(f, "{} ({name})", self.ordering()),
            None => f.write_str(&self.ordering()),
        }
    }
}

/// Ordering class of `a` after relabeling so that `a12 > a21`.
pub fn classify_game(a: &PayoffMatrix) -> GameClass {
    let swapped = a.a12() < a.a21();
    let canonical = if swapped { a.label_swapped() } else { *a };
    let mut ranking = [Entry::A11, Entry::A12, Entry::A21, Entry::A22];
    ranking.sort_by(|x, y| y.value(&canonical).total_cmp(&x.value(&canonical)));
    let distinct = ranking
        .windows(2)
        .all(|w| w[0].value(&canonical) > w[1].value(&canonical));
    if !distinct {
        return GameClass::Degenerate;
    }
    GameClass::Ordered { ranking, swapped }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(a11: f64, a12: f64, a21: f64, a22: f64) -> PayoffMatrix {
        PayoffMatrix::new(a11, a12, a21, a22).unwrap()
    }

    #[test]
    fn c_factor_values() {
        assert_eq!(c_factor(1, 1), 1.0);
        assert!((c_factor(1, 2) - 1.4).abs() < 1e-15);
        assert_eq!(format!("{:.4}", c_factor(9, 9)), "1.9000");
    }

    /// The slope as an exact fraction, reduced by Euclid.
    fn c_fraction(range: u128, dim: u32) -> (u128, u128) {
        let side = 2 * range + 1;
        let num = 2 * range * (side.pow(dim) - 2);
        let den = (range + 1) * (2 * range * side.pow(dim - 1) - 1);
        let (mut x, mut y) = (num, den);
        while y != 0 {
            (x, y) = (y, x % y);
        }
        (num / x, den / x)
    }

    #[test]
    fn c_factor_matches_exact_fractions() {
        for range in 1..=9 {
            for dim in 1..=9 {
                let (p, q) = c_fraction(range as u128, dim as u32);
                let exact = p as f64 / q as f64;
                let got = c_factor(range, dim);
                assert!((got - exact).abs() <= 4.0 * f64::EPSILON * exact);
            }
        }
        assert_eq!(c_fraction(1, 2), (7, 5));
    }

    #[test]
    fn voter_bound_examples() {
        assert!(voter_bound_win(&m(5.0, 3.0, 1.0, 2.0), 1, 1));
        assert!(!voter_bound_win(&m(-8.0, 3.0, 4.0, -8.0), 1, 1));
        for (range, dim) in [(1, 1), (1, 2), (2, 1), (3, 3)] {
            assert!(voter_bound_win(&m(2.0, 2.0, 1.0, 1.0), range, dim));
        }
    }

    #[test]
    fn nearest_neighbor_examples() {
        assert!(nearest_neighbor_win(&m(6.0, 1.0, 0.0, 2.0)));
        assert!(!nearest_neighbor_win(&m(-8.0, 3.0, 4.0, -8.0)));
        // Threshold max(2, 0) + (0 - 1) = 1.
        assert!(!nearest_neighbor_win(&m(1.0, 1.0, 0.0, 2.0)));
    }

    #[test]
    fn generic_examples() {
        assert!(generic_payoffs(&m(-8.0, 3.0, 4.0, -8.0)));
        assert!(!generic_payoffs(&m(-8.0, 4.0, 4.0, -8.0)));
        assert!(!generic_payoffs(&m(1.0, 2.0, 0.0, 3.0)));
    }

    #[test]
    fn triangle_examples() {
        assert!(in_coexistence_triangle(&m(-3.0, 0.0, 0.0, -3.0), 1, 2, 1.0));
        assert!(!in_coexistence_triangle(&m(-5.0, 0.0, 0.0, -3.0), 1, 2, 1.0));
        assert!(!in_coexistence_triangle(&m(-3.0, 0.0, 0.0, -3.0), 1, 1, 1.0));
    }

    #[test]
    fn named_games() {
        let pd = classify_game(&m(1.0, 5.0, 0.0, 3.0));
        assert_eq!(pd.name(), Some("prisoner's dilemma"));
        assert_eq!(pd.ordering(), "a12>a22>a11>a21");
        assert_eq!(classify_game(&m(2.0, 3.0, 0.0, 5.0)).name(), Some("stag hunt"));
        assert_eq!(classify_game(&m(0.0, 5.0, 1.0, 3.0)).name(), Some("hawk-dove"));
        assert_eq!(classify_game(&m(1.0, 5.0, 3.0, 0.0)).name(), Some("battle of the sexes"));
        // Prisoner's dilemma with the labels exchanged.
        let swapped = classify_game(&m(3.0, 0.0, 5.0, 1.0));
        assert_eq!(swapped.name(), Some("prisoner's dilemma"));
        assert!(matches!(swapped, GameClass::Ordered { swapped: true, .. }));
        assert_eq!(classify_game(&m(1.0, 1.0, 0.0, 2.0)), GameClass::Degenerate);
    }

    #[test]
    fn twelve_classes() {
        let values = [1.0, 2.0, 3.0, 4.0];
        let mut seen = std::collections::HashSet::new();
        let mut perm = [0usize, 1, 2, 3];
        // All 24 assignments of four distinct values, via Heap's algorithm.
        let mut c = [0usize; 4];
        let mut classes = vec![classify_game(&m(values[0], values[1], values[2], values[3]))];
        let mut i = 0;
        while i < 4 {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                classes.push(classify_game(&m(
                    values[perm[0]],
                    values[perm[1]],
                    values[perm[2]],
                    values[perm[3]],
                )));
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        assert_eq!(classes.len(), 24);
        for class in &classes {
            assert_ne!(*class, GameClass::Degenerate);
            seen.insert(class.ordering());
        }
        assert_eq!(seen.len(), 12);
        let names: std::collections::HashSet<_> = classes.iter().filter_map(|c| c.name()).collect();
        assert_eq!(names.len(), 4);
    }

    fn payoffs() -> impl Strategy<Value = PayoffMatrix> {
        proptest::array::uniform4(-10.0f64..10.0).prop_map(|e| m(e[0], e[1], e[2], e[3]))
    }

    proptest! {
        #[test]
        fn predicates_commute_with_relabeling(a in payoffs(), range in 1usize..=3, dim in 1usize..=3) {
            let s = a.label_swapped();
            prop_assert_eq!(voter_bound_win(&a, range, dim), voter_bound_win_swapped(&s, range, dim));
            prop_assert_eq!(nearest_neighbor_win(&a), nearest_neighbor_win_swapped(&s));
            prop_assert_eq!(generic_payoffs(&a), generic_payoffs(&s));
            prop_assert_eq!(
                in_coexistence_triangle(&a, range, dim, 1.0),
                in_coexistence_triangle(&s, range, dim, 1.0)
            );
            prop_assert_eq!(classify_game(&a).ordering(), classify_game(&s).ordering());
        }

        #[test]
        fn constant_payoffs_reduce_to_a12_above_a21(
            hi in -10.0f64..10.0, lo in -10.0f64..10.0, range in 1usize..=3, dim in 1usize..=2,
        ) {
            let a = m(hi, hi, lo, lo);
            prop_assert_eq!(voter_bound_win(&a, range, dim), hi > lo);
        }

        #[test]
        fn zero_entries_are_not_generic(a in payoffs(), k in 0usize..4) {
            let mut e = [a.a11(), a.a12(), a.a21(), a.a22()];
            e[k] = 0.0;
            prop_assert!(!generic_payoffs(&m(e[0], e[1], e[2], e[3])));
            prop_assert!(!generic_payoffs(&m(a.a11(), -a.a11(), a.a21(), a.a22())));
        }
    }
}
