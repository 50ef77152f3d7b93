//! Partpred: trial-and-update search over a finite set of candidate
//! forecasts.
//!
//! Each candidate is announced for a group of `r` stages while the outcomes
//! are tallied. At the end of a group the assistant finds the candidate
//! closest to the empirical outcome distribution, combines it with the
//! announced one through an [`UpdateRule`], and either
//!
//! * declares convergence when the update returns the announced candidate,
//! * forces convergence on the best-fitting candidate once every candidate
//!   has been tried,
//! * explores a random untried candidate when the update proposes one that
//!   was tried before, or
//! * moves to the proposed candidate.
//!
//! Distances are Euclidean on probability vectors; ties go to the lowest
//! candidate index.

use std::collections::BTreeMap;
use std::sync::Arc;

use log::debug;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::policies::update::{update_congestion, update_general, UpdateRule};
use crate::types::{Covariate, DiscreteDistribution, JointProfile, DISTRIBUTION_TOLERANCE};

/// What happened at the end of a group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Converged,
    ForcedConvergence,
    Exploration,
    Move,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartpredEvent {
    pub w: Covariate,
    pub from: usize,
    /// Candidate nearest to the group's empirical distribution.
    pub nearest: usize,
    /// Candidate returned by the update rule.
    pub proposed: usize,
    /// Candidate announced next.
    pub next: usize,
    pub branch: Branch,
}

#[derive(Clone, Debug, PartialEq)]
struct CovariateState {
    current: usize,
    trial_counts: Vec<usize>,
    empirical: Vec<BTreeMap<JointProfile, usize>>,
    converged: bool,
}

#[derive(Clone, Debug)]
pub struct PartpredState {
    candidates: Arc<Vec<DiscreteDistribution<JointProfile>>>,
    r: usize,
    update: UpdateRule,
    rng: ChaCha8Rng,
    per_covariate: BTreeMap<Covariate, CovariateState>,
    last_announced: Option<Covariate>,
    events: Vec<PartpredEvent>,
}

impl PartpredState {
    pub fn new(
        candidates: Arc<Vec<DiscreteDistribution<JointProfile>>>,
        r: usize,
        update: UpdateRule,
        rng_seed: u64,
    ) -> Result<Self> {
        if candidates.is_empty() {
            return Err(Error::config("policy.candidates", "candidate set is empty"));
        }
        if r == 0 {
            return Err(Error::config("policy.r", "group length must be at least 1"));
        }
        if update == UpdateRule::Congestion && candidates.iter().any(|c| c.as_dirac().is_none()) {
            return Err(Error::config(
                "policy.update",
                "the congestion rule needs Dirac candidates",
            ));
        }
        Ok(Self {
            candidates,
            r,
            update,
            rng: ChaCha8Rng::seed_from_u64(rng_seed),
            per_covariate: BTreeMap::new(),
            last_announced: None,
            events: Vec::new(),
        })
    }

    pub fn candidates(&self) -> &[DiscreteDistribution<JointProfile>] {
        &self.candidates
    }

    pub fn events(&self) -> &[PartpredEvent] {
        &self.events
    }

    pub fn converged(&self, w: Covariate) -> bool {
        self.per_covariate.get(&w).is_some_and(|s| s.converged)
    }

    pub fn current(&self, w: Covariate) -> Option<usize> {
        self.per_covariate.get(&w).map(|s| s.current)
    }

    pub fn trial_counts(&self, w: Covariate) -> Option<&[usize]> {
        self.per_covariate.get(&w).map(|s| s.trial_counts.as_slice())
    }

    /// Records the outcome of the stage last announced under `w`.
    pub fn observe(&mut self, w: Covariate, c: &JointProfile) -> Result<()> {
        let r = self.r;
        let state = self
            .per_covariate
            .get_mut(&w)
            .ok_or(Error::NeedsInitialForecast)?;
        if state.converged {
            return Ok(());
        }
        let tally = &mut state.empirical[state.current];
        if tally.values().sum::<usize>() < r {
            *tally.entry(c.clone()).or_insert(0) += 1;
        }
        Ok(())
    }

    /// Forecast for the next stage under `w`.
    pub fn announce(&mut self, w: Covariate) -> Result<DiscreteDistribution<JointProfile>> {
        let k = self.candidates.len();
        if !self.per_covariate.contains_key(&w) {
            let current = self.rng.random_range(0..k);
            self.per_covariate.insert(
                w,
                CovariateState {
                    current,
                    trial_counts: vec![0; k],
                    empirical: vec![BTreeMap::new(); k],
                    converged: false,
                },
            );
        }
        let r = self.r;
        let state = self.per_covariate.get(&w).expect("inserted above");
        if state.converged || state.trial_counts[state.current] < r {
            let current = state.current;
            self.bump(w, current);
            self.last_announced = Some(w);
            return Ok(self.candidates[current].clone());
        }
        let event = self.end_group(w)?;
        debug!("partpred w={w}: {event:?}");
        let next = event.next;
        self.events.push(event);
        self.bump(w, next);
        self.last_announced = Some(w);
        Ok(self.candidates[next].clone())
    }

    /// Feeds the previous outcome, if any, and announces the next forecast.
    pub fn step(
        &mut self,
        w: Covariate,
        c_observed: Option<&JointProfile>,
    ) -> Result<DiscreteDistribution<JointProfile>> {
        if let (Some(c), Some(last)) = (c_observed, self.last_announced) {
            self.observe(last, c)?;
        }
        self.announce(w)
    }

    fn bump(&mut self, w: Covariate, index: usize) {
        let r = self.r;
        let state = self.per_covariate.get_mut(&w).expect("known covariate");
        if state.trial_counts[index] < r {
            state.trial_counts[index] += 1;
        }
    }

    fn empirical(&self, state: &CovariateState, index: usize) -> Result<DiscreteDistribution<JointProfile>> {
        let tally = &state.empirical[index];
        if tally.values().sum::<usize>() < self.r {
            return Err(Error::InvalidParameter(format!(
                "group for candidate {index} is missing observations"
            )));
        }
        DiscreteDistribution::from_counts(tally)
    }

    fn nearest(&self, target: &DiscreteDistribution<JointProfile>) -> usize {
        argmin(self.candidates.iter().map(|c| c.euclidean_distance(target)))
    }

    fn locate(&self, dist: &DiscreteDistribution<JointProfile>) -> usize {
        self.candidates
            .iter()
            .position(|c| c.approx_eq(dist, DISTRIBUTION_TOLERANCE))
            .unwrap_or_else(|| self.nearest(dist))
    }

    fn end_group(&mut self, w: Covariate) -> Result<PartpredEvent> {
        let state = self.per_covariate.get(&w).expect("known covariate").clone();
        let from = state.current;
        let observed = self.empirical(&state, from)?;
        let nearest = self.nearest(&observed);
        let announced = &self.candidates[from];
        let proposed = match self.update {
            UpdateRule::Congestion => {
                let a = announced.as_dirac().expect("checked at construction");
                let b = self.candidates[nearest].as_dirac().expect("checked at construction");
                self.locate(&DiscreteDistribution::dirac(update_congestion(a, b)))
            }
            UpdateRule::General => self.locate(&update_general(announced, &self.candidates[nearest])),
        };

        let r = self.r;
        let all_tried = state.trial_counts.iter().all(|&n| n >= r);
        let (next, branch) = if proposed == from {
            (from, Branch::Converged)
        } else if all_tried {
            let fits = (0..self.candidates.len())
                .map(|j| {
                    self.empirical(&state, j)
                        .map(|p| self.candidates[j].euclidean_distance(&p))
                })
                .collect::<Result<Vec<_>>>()?;
            (argmin(fits.into_iter()), Branch::ForcedConvergence)
        } else if state.trial_counts[proposed] >= r {
            let unused: Vec<usize> = (0..self.candidates.len())
                .filter(|&j| state.trial_counts[j] == 0)
                .collect();
            let picked = *unused
                .choose(&mut self.rng)
                .expect("some candidate is untried when not all are");
            (picked, Branch::Exploration)
        } else {
            (proposed, Branch::Move)
        };

        let entry = self.per_covariate.get_mut(&w).expect("known covariate");
        entry.current = next;
        entry.converged = matches!(branch, Branch::Converged | Branch::ForcedConvergence);
        Ok(PartpredEvent {
            w,
            from,
            nearest,
            proposed,
            next,
            branch,
        })
    }
}

fn argmin(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::INFINITY);
    for (j, v) in values.enumerate() {
        if v < best.1 {
            best = (j, v);
        }
    }
    best.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::candidate_set;
    use crate::environments::{play_profile, FiniteCongestionGame};

    fn jp(a: &[usize]) -> JointProfile {
        JointProfile::from_actions(a.to_vec())
    }

    fn flapping_partpred(seed: u64) -> (FiniteCongestionGame, PartpredState) {
        let game = FiniteCongestionGame::flapping_example();
        let set = candidate_set(&game).unwrap();
        let state = PartpredState::new(Arc::new(set.candidates), 1, UpdateRule::Congestion, seed).unwrap();
        (game, state)
    }

    /// Forces the starting candidate regardless of the seed.
    fn start_at(state: &mut PartpredState, profile: &JointProfile) {
        let index = state
            .candidates
            .iter()
            .position(|c| c.as_dirac() == Some(profile))
            .unwrap();
        state.announce(0).unwrap();
        let s = state.per_covariate.get_mut(&0).unwrap();
        s.trial_counts = vec![0; s.trial_counts.len()];
        s.current = index;
        s.trial_counts[index] = 1;
    }

    #[test]
    fn flapping_start_moves_to_equilibrium() {
        let (game, mut state) = flapping_partpred(0);
        start_at(&mut state, &jp(&[0, 0]));
        let mut forecast = DiscreteDistribution::dirac(jp(&[0, 0]));
        for _ in 0..4 {
            let c = play_profile(&game, &forecast);
            state.observe(0, &c).unwrap();
            forecast = state.announce(0).unwrap();
        }
        assert_eq!(forecast, DiscreteDistribution::dirac(jp(&[1, 0])));
        assert!(state.converged(0));
        let branches: Vec<_> = state.events().iter().map(|e| e.branch).collect();
        assert_eq!(branches, vec![Branch::Move, Branch::Converged]);
        assert_eq!(state.events()[0].nearest, 3); // (1,1)
    }

    #[test]
    fn self_fulfilling_start_converges_immediately() {
        let (game, mut state) = flapping_partpred(0);
        start_at(&mut state, &jp(&[0, 1]));
        let a = DiscreteDistribution::dirac(jp(&[0, 1]));
        state.observe(0, &play_profile(&game, &a)).unwrap();
        assert_eq!(state.announce(0).unwrap(), a);
        assert!(state.converged(0));
        // converged output never changes
        for _ in 0..5 {
            state.observe(0, &jp(&[1, 1])).unwrap();
            assert_eq!(state.announce(0).unwrap(), a);
        }
    }

    #[test]
    fn exhaustion_forces_best_fit() {
        // an environment with no fixed point among the candidates: the
        // outcome is always the "next" Dirac in a cycle
        let candidates: Vec<_> = (0..3).map(|k| DiscreteDistribution::dirac(jp(&[k]))).collect();
        let mut state = PartpredState::new(Arc::new(candidates), 4, UpdateRule::General, 11).unwrap();
        let respond = |a: &DiscreteDistribution<JointProfile>, stage: usize| {
            let k = a.as_dirac().unwrap().slot(0);
            // candidate 1 is reproduced a quarter of the time, the others never
            if k == 1 && stage.is_multiple_of(4) { jp(&[1]) } else { jp(&[(k + 1) % 3]) }
        };
        let mut forecast = state.announce(0).unwrap();
        for stage in 0..40 {
            let c = respond(&forecast, stage);
            state.observe(0, &c).unwrap();
            forecast = state.announce(0).unwrap();
        }
        assert!(state.converged(0));
        let last = state.events().last().unwrap();
        assert_eq!(last.branch, Branch::ForcedConvergence);
        assert_eq!(last.next, 1);
        assert_eq!(forecast, DiscreteDistribution::dirac(jp(&[1])));
    }

    #[test]
    fn single_candidate_converges_after_one_group() {
        let candidates = vec![DiscreteDistribution::dirac(jp(&[0, 0]))];
        let mut state = PartpredState::new(Arc::new(candidates), 3, UpdateRule::General, 0).unwrap();
        for _ in 0..3 {
            state.announce(0).unwrap();
            state.observe(0, &jp(&[1, 1])).unwrap();
        }
        state.announce(0).unwrap();
        assert!(state.converged(0));
    }

    #[test]
    fn rejects_bad_config() {
        assert!(PartpredState::new(Arc::new(vec![]), 1, UpdateRule::General, 0).is_err());
        let c = vec![DiscreteDistribution::dirac(jp(&[0]))];
        assert!(PartpredState::new(Arc::new(c.clone()), 0, UpdateRule::General, 0).is_err());
        let mixed = vec![DiscreteDistribution::new([(jp(&[0]), 0.5), (jp(&[1]), 0.5)]).unwrap()];
        assert!(PartpredState::new(Arc::new(mixed), 1, UpdateRule::Congestion, 0).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let run = |seed| {
            let (game, mut state) = flapping_partpred(seed);
            let mut out = Vec::new();
            let mut f = state.announce(0).unwrap();
            for _ in 0..6 {
                state.observe(0, &play_profile(&game, &f)).unwrap();
                f = state.announce(0).unwrap();
                out.push(f.clone());
            }
            out
        };
        assert_eq!(run(5), run(5));
    }
}
