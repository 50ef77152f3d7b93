//! Finite candidate forecast sets: the outcome distributions that
//! deterministic strategy profiles induce.

use serde::{Deserialize, Serialize};

use crate::analysis::nash::enumerate_strategies;
use crate::environments::{BayesianCongestionGame, FiniteCongestionGame, StrategyProfile};
use crate::error::Result;
use crate::types::{DiscreteDistribution, JointProfile, DISTRIBUTION_TOLERANCE};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateSet {
    pub candidates: Vec<DiscreteDistribution<JointProfile>>,
    /// First strategy profile found inducing each candidate.
    pub strategies: Vec<StrategyProfile>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    /// Index of a candidate equal to `dist` within `tol`, lowest index first.
    pub fn position(&self, dist: &DiscreteDistribution<JointProfile>, tol: f64) -> Option<usize> {
        self.candidates.iter().position(|c| c.approx_eq(dist, tol))
    }
}

/// Complete-information candidates: the `d^n` Dirac profiles, lexicographic.
pub fn candidate_set(game: &FiniteCongestionGame) -> Result<CandidateSet> {
    game.check_size()?;
    let (candidates, strategies) = JointProfile::enumerate(game.players(), game.slots())
        .map(|c| {
            let strategy = c.actions().iter().map(|&k| vec![k]).collect();
            (DiscreteDistribution::dirac(c), strategy)
        })
        .unzip();
    Ok(CandidateSet {
        candidates,
        strategies,
    })
}

/// Bayesian candidates: induced outcome distributions of every deterministic
/// strategy profile under the type prior, deduplicated within 1e-9.
pub fn bayesian_candidate_set(game: &BayesianCongestionGame) -> Result<CandidateSet> {
    let mut set = CandidateSet {
        candidates: Vec::new(),
        strategies: Vec::new(),
    };
    for strategy in enumerate_strategies(game)? {
        let dist = game.outcome_distribution(&strategy);
        if set.position(&dist, DISTRIBUTION_TOLERANCE).is_none() {
            set.candidates.push(dist);
            set.strategies.push(strategy);
        }
    }
    Ok(set)
}
