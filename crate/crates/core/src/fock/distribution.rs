use super::operator::Space;
use super::state::PureState;
use crate::{Error, Result};

/// Photon-counting probabilities over `n` (one mode) or `(n₁, n₂)` (two
/// modes), with the truncation tail carried along.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    space: Space,
    probs: Vec<f64>,
    tail_bound: f64,
}

impl OutcomeDistribution {
    /// Probabilities in the flat basis ordering of `space`.
    pub fn from_probabilities(space: Space, probs: Vec<f64>, tail_bound: f64) -> Result<Self> {
        if probs.len() != space.total() {
            return Err(Error::DimensionMismatch(format!(
                "{} probabilities for {} outcomes",
                probs.len(),
                space.total()
            )));
        }
        Ok(OutcomeDistribution { space, probs, tail_bound })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// `P(n)` for a single mode, or the `n₁ = n` marginal row for two.
    pub fn single(&self, n: usize) -> f64 {
        match self.space {
            Space::Single(d) if n < d => self.probs[n],
            Space::Single(_) => 0.0,
            Space::Pair(_, db) => (0..db).map(|m| self.pair(n, m)).sum(),
        }
    }

    /// `P(n₁, n₂)`; zero outside the table.
    pub fn pair(&self, n1: usize, n2: usize) -> f64 {
        if self.space.contains(n1, n2) {
            self.probs[self.space.index(n1, n2)]
        } else {
            0.0
        }
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `((n₁, n₂), p)` over the whole table; `n₂ = 0` for a single mode.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.probs.iter().enumerate().map(|(i, &p)| (self.space.basis(i), p))
    }

    /// Total probability on outcomes with `|n₁ - n₂| = delta`.
    pub fn mass_at_difference(&self, delta: usize) -> f64 {
        self.iter()
            .filter(|((a, b), _)| a.abs_diff(*b) == delta)
            .map(|(_, p)| p)
            .sum()
    }

    /// Largest single-outcome probability among outcomes matching `pred`.
    pub fn max_where(&self, pred: impl Fn(usize, usize) -> bool) -> f64 {
        self.iter()
            .filter(|((a, b), _)| pred(*a, *b))
            .map(|(_, p)| p)
            .fold(0.0, f64::max)
    }
}

/// Born-rule photon-number statistics of a pure state.
pub fn number_distribution<S: PureState + ?Sized>(state: &S) -> OutcomeDistribution {
    OutcomeDistribution {
        space: state.space(),
        probs: state.flat().iter().map(|a| a.norm_sqr()).collect(),
        tail_bound: state.tail_bound(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::DEFAULT_TRUNCATION_TOLERANCE as TOL;
    use crate::fock::{SingleModeState, TwoModeState};
    use crate::C64;

    #[test]
    fn vacuum_counts_zero() {
        let d = number_distribution(&SingleModeState::vacuum(3).unwrap());
        assert_eq!(d.single(0), 1.0);
        assert_eq!(d.single(1), 0.0);
    }

    #[test]
    fn tmsv_counts_are_correlated() {
        let d = number_distribution(&TwoModeState::tmsv(0.8, 0.0, 40, TOL).unwrap());
        assert_eq!(d.max_where(|a, b| a != b), 0.0);
        assert!((d.total() - 1.0).abs() <= d.tail_bound() + 1e-14);
    }

    #[test]
    fn coherent_counts_are_poisson() {
        let d = number_distribution(&SingleModeState::coherent(C64::new(2.0, 0.0), 40, TOL).unwrap());
        let p4 = (-4.0f64).exp() * 4f64.powi(4) / 24.0;
        assert!((d.single(4) - p4).abs() < 1e-10);
        assert!((d.total() - 1.0).abs() <= 1e-12);
    }
}
