//! Equivalence between self-fulfilling forecasts and equilibria, checked by
//! brute force over the candidate set.
//!
//! Two directions are verified:
//! * a candidate whose induced outcome distribution equals itself induces an
//!   equilibrium strategy profile;
//! * the outcome distribution of a strict equilibrium is self-fulfilling.
//!
//! Non-strict equilibria need not be self-fulfilling under the lowest-slot
//! tie rule; they are reported separately and never count as violations.

use serde::{Deserialize, Serialize};

use crate::analysis::candidates::{bayesian_candidate_set, candidate_set};
use crate::analysis::nash::{enumerate_strategies, is_bne, is_nash};
use crate::environments::{play_profile, BayesianCongestionGame, FiniteCongestionGame, StrategyProfile};
use crate::error::Result;
use crate::loss::tv_distance;
use crate::types::{DiscreteDistribution, JointProfile};

/// True iff `tv(response(a), a) ≤ tol`.
pub fn is_self_fulfilling<F>(response: F, a: &DiscreteDistribution<JointProfile>, tol: f64) -> Result<bool>
where
    F: Fn(&DiscreteDistribution<JointProfile>) -> DiscreteDistribution<JointProfile>,
{
    Ok(tv_distance(&response(a), a)? <= tol)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    SelfFulfillingNotNash(JointProfile),
    StrictNashNotSelfFulfilling(JointProfile),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub candidates: usize,
    /// Weak equilibria, lexicographic.
    pub nash: Vec<JointProfile>,
    pub strict_nash: Vec<JointProfile>,
    /// Profiles whose Dirac forecast reproduces itself.
    pub self_fulfilling: Vec<JointProfile>,
    pub violations: Vec<Violation>,
}

impl CorrespondenceReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    /// The strict-equilibrium direction has nothing to check.
    pub fn converse_vacuous(&self) -> bool {
        self.strict_nash.is_empty()
    }
}

/// Checks both directions on a complete-information congestion game.
pub fn correspondence_check(game: &FiniteCongestionGame) -> Result<CorrespondenceReport> {
    let set = candidate_set(game)?;
    let mut report = CorrespondenceReport {
        candidates: set.len(),
        nash: Vec::new(),
        strict_nash: Vec::new(),
        self_fulfilling: Vec::new(),
        violations: Vec::new(),
    };
    for candidate in &set.candidates {
        let profile = candidate
            .as_dirac()
            .expect("complete-information candidates are Dirac")
            .clone();
        let response = |a: &DiscreteDistribution<JointProfile>| {
            DiscreteDistribution::dirac(play_profile(game, a))
        };
        let fulfilling = is_self_fulfilling(response, candidate, 0.0)?;
        let nash = is_nash(game, &profile, false);
        let strict = is_nash(game, &profile, true);
        if fulfilling {
            // the induced strategy profile is the outcome itself
            if !nash {
                report.violations.push(Violation::SelfFulfillingNotNash(profile.clone()));
            }
            report.self_fulfilling.push(profile.clone());
        }
        if strict && !fulfilling {
            report
                .violations
                .push(Violation::StrictNashNotSelfFulfilling(profile.clone()));
        }
        if nash {
            report.nash.push(profile.clone());
        }
        if strict {
            report.strict_nash.push(profile);
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BayesianCorrespondenceReport {
    pub candidates: usize,
    /// Indices into the Bayesian candidate set.
    pub self_fulfilling: Vec<usize>,
    pub bne: Vec<StrategyProfile>,
    pub strict_bne: Vec<StrategyProfile>,
    pub violations: Vec<String>,
}

impl BayesianCorrespondenceReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks both directions on a Bayesian congestion game, self-fulfilling
/// within `tol` in total variation.
pub fn bayesian_correspondence_check(game: &BayesianCongestionGame, tol: f64) -> Result<BayesianCorrespondenceReport> {
    let set = bayesian_candidate_set(game)?;
    let mut report = BayesianCorrespondenceReport {
        candidates: set.len(),
        self_fulfilling: Vec::new(),
        bne: Vec::new(),
        strict_bne: Vec::new(),
        violations: Vec::new(),
    };
    for (index, candidate) in set.candidates.iter().enumerate() {
        if is_self_fulfilling(|a| game.response_distribution(a), candidate, tol)? {
            report.self_fulfilling.push(index);
            let induced = game.respond(candidate);
            if !is_bne(game, &induced, false) {
                report.violations.push(format!(
                    "self-fulfilling candidate {index} induces non-equilibrium {induced:?}"
                ));
            }
        }
    }
    for strategy in enumerate_strategies(game)? {
        if !is_bne(game, &strategy, false) {
            continue;
        }
        if is_bne(game, &strategy, true) {
            let forecast = game.outcome_distribution(&strategy);
            if !is_self_fulfilling(|a| game.response_distribution(a), &forecast, tol)? {
                report.violations.push(format!(
                    "strict equilibrium {strategy:?} is not self-fulfilling"
                ));
            }
            report.strict_bne.push(strategy.clone());
        }
        report.bne.push(strategy);
    }
    Ok(report)
}
