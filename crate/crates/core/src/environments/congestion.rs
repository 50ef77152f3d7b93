//! Finite congestion games played by assistant-trusting users.
//!
//! Every player best-responds to the announced forecast as if it were the
//! true distribution of the joint profile. A player evaluating slot `k`
//! counts the other players the forecast puts at `k` and adds itself; its
//! own entry in the forecast profile is ignored.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{DiscreteDistribution, JointProfile};

/// Two expected utilities closer than this are treated as tied.
pub const UTILITY_TIE_EPS: f64 = 1e-12;

/// Largest number of joint profiles brute-force routines will enumerate.
pub const PROFILE_LIMIT: u128 = 1_000_000;

/// Utility of choosing slot `k` when `m` players (including oneself) occupy it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UtilityTable {
    /// `values[k][m - 1]`.
    values: Vec<Vec<f64>>,
}

impl UtilityTable {
    pub fn new(values: Vec<Vec<f64>>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidParameter(
                "a congestion game needs at least two slots".into(),
            ));
        }
        let n = values[0].len();
        if n == 0 {
            return Err(Error::InvalidParameter(
                "a congestion game needs at least one player".into(),
            ));
        }
        for (k, row) in values.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "utility row for slot {k} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "utility {v} at slot {k} is not finite"
                )));
            }
        }
        Ok(Self { values })
    }

    /// The same utility `f(m)` at every slot.
    pub fn uniform(slots: usize, players: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::new(
            (0..slots)
                .map(|_| (1..=players).map(&f).collect())
                .collect(),
        )
    }

    pub fn slots(&self) -> usize {
        self.values.len()
    }

    pub fn max_count(&self) -> usize {
        self.values[0].len()
    }

    /// Utility at slot `k` with `m ≥ 1` occupants.
    pub fn get(&self, k: usize, m: usize) -> f64 {
        self.values[k][m - 1]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn is_nonincreasing_in_count(&self) -> bool {
        self.values
            .iter()
            .all(|row| row.windows(2).all(|w| w[1] <= w[0]))
    }
}

/// Complete-information congestion game: `n` players, `d` slots, one
/// anonymous utility table shared by all players.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteCongestionGame {
    players: usize,
    utility: UtilityTable,
}

impl FiniteCongestionGame {
    pub fn new(players: usize, utility: UtilityTable) -> Result<Self> {
        if players == 0 {
            return Err(Error::InvalidParameter("need at least one player".into()));
        }
        if utility.max_count() != players {
            return Err(Error::InvalidParameter(format!(
                "utility table covers counts 1..={}, game has {players} players",
                utility.max_count()
            )));
        }
        Ok(Self { players, utility })
    }

    /// Two players, two identical slots, utility `−m`. Its pure equilibria
    /// are `(0,1)` and `(1,0)`, and naive forecasting flaps between `(0,0)`
    /// and `(1,1)`.
    pub fn flapping_example() -> Self {
        let utility = UtilityTable::uniform(2, 2, |m| -(m as f64)).expect("static table");
        Self::new(2, utility).expect("static game")
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn slots(&self) -> usize {
        self.utility.slots()
    }

    pub fn utility(&self) -> &UtilityTable {
        &self.utility
    }

    pub fn profile_count(&self) -> u128 {
        (self.slots() as u128).pow(self.players as u32)
    }

    pub fn check_size(&self) -> Result<()> {
        let size = self.profile_count();
        if size > PROFILE_LIMIT {
            return Err(Error::TooLarge {
                size,
                limit: PROFILE_LIMIT,
            });
        }
        Ok(())
    }

    /// Utility player `i` receives under `profile`.
    pub fn payoff(&self, profile: &JointProfile, i: usize) -> f64 {
        let k = profile.slot(i);
        let m = profile.actions().iter().filter(|&&s| s == k).count();
        self.utility.get(k, m)
    }

    /// Utility player `i` would receive by moving to `k`, others fixed.
    pub fn deviation_payoff(&self, profile: &JointProfile, i: usize, k: usize) -> f64 {
        self.utility.get(k, others_at(profile, i, k) + 1)
    }

    /// View as a Bayesian game with a single sure type per player.
    pub fn to_bayesian(&self) -> BayesianCongestionGame {
        BayesianCongestionGame {
            players: self.players,
            slots: self.slots(),
            types: (0..self.players)
                .map(|_| {
                    vec![PlayerType {
                        prob: 1.0,
                        utility: self.utility.clone(),
                    }]
                })
                .collect(),
        }
    }
}

fn others_at(profile: &JointProfile, i: usize, k: usize) -> usize {
    profile
        .actions()
        .iter()
        .enumerate()
        .filter(|&(j, &s)| j != i && s == k)
        .count()
}

/// Slot maximizing expected utility, lowest slot on ties.
fn argmax_slot(expected: &[f64]) -> usize {
    let mut best = 0;
    for k in 1..expected.len() {
        if expected[k] > expected[best] + UTILITY_TIE_EPS {
            best = k;
        }
    }
    best
}

fn expected_utilities(
    utility: &UtilityTable,
    i: usize,
    belief: &DiscreteDistribution<JointProfile>,
) -> Vec<f64> {
    (0..utility.slots())
        .map(|k| {
            belief
                .iter()
                .map(|(c, p)| p * utility.get(k, others_at(c, i, k) + 1))
                .sum()
        })
        .collect()
}

/// Best response of player `i` to a forecast of the joint profile.
pub fn best_response(
    i: usize,
    game: &FiniteCongestionGame,
    belief: &DiscreteDistribution<JointProfile>,
) -> usize {
    argmax_slot(&expected_utilities(&game.utility, i, belief))
}

/// Outcome when every player best-responds to the same forecast.
pub fn play_profile(
    game: &FiniteCongestionGame,
    forecast: &DiscreteDistribution<JointProfile>,
) -> JointProfile {
    JointProfile::from_actions(
        (0..game.players())
            .map(|i| best_response(i, game, forecast))
            .collect(),
    )
}

/// A private type: its prior probability and its utility table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlayerType {
    pub prob: f64,
    pub utility: UtilityTable,
}

/// Slot chosen by each player for each of its types.
pub type StrategyProfile = Vec<Vec<usize>>;

/// Congestion game with independent private types.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BayesianCongestionGame {
    players: usize,
    slots: usize,
    types: Vec<Vec<PlayerType>>,
}

impl BayesianCongestionGame {
    pub fn new(types: Vec<Vec<PlayerType>>) -> Result<Self> {
        let players = types.len();
        if players == 0 {
            return Err(Error::InvalidParameter("need at least one player".into()));
        }
        let slots = types
            .first()
            .and_then(|t| t.first())
            .map(|t| t.utility.slots())
            .ok_or_else(|| Error::InvalidParameter("player 0 has no types".into()))?;
        for (i, player_types) in types.iter().enumerate() {
            if player_types.is_empty() {
                return Err(Error::InvalidParameter(format!("player {i} has no types")));
            }
            let total: f64 = player_types.iter().map(|t| t.prob).sum();
            if player_types.iter().any(|t| t.prob.is_nan() || t.prob < 0.0) || (total - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidDistribution(format!(
                    "type prior of player {i} sums to {total}"
                )));
            }
            for t in player_types {
                if t.utility.slots() != slots || t.utility.max_count() != players {
                    return Err(Error::InvalidParameter(format!(
                        "player {i} has a utility table of the wrong shape"
                    )));
                }
            }
        }
        Ok(Self {
            players,
            slots,
            types,
        })
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn types(&self, player: usize) -> &[PlayerType] {
        &self.types[player]
    }

    /// Best response of one type of player `i` to a forecast.
    pub fn best_response(
        &self,
        i: usize,
        type_index: usize,
        belief: &DiscreteDistribution<JointProfile>,
    ) -> usize {
        argmax_slot(&expected_utilities(
            &self.types[i][type_index].utility,
            i,
            belief,
        ))
    }

    /// Strategy profile induced by assistant-trusting players.
    pub fn respond(&self, forecast: &DiscreteDistribution<JointProfile>) -> StrategyProfile {
        (0..self.players)
            .map(|i| {
                (0..self.types[i].len())
                    .map(|t| self.best_response(i, t, forecast))
                    .collect()
            })
            .collect()
    }

    /// Marginal slot distribution of player `i` under strategy `s_i`.
    pub fn slot_marginal(&self, i: usize, strategy: &[usize]) -> Vec<f64> {
        let mut marginal = vec![0.0; self.slots];
        for (t, &k) in strategy.iter().enumerate() {
            marginal[k] += self.types[i][t].prob;
        }
        marginal
    }

    /// Distribution of the joint profile under a strategy profile.
    pub fn outcome_distribution(&self, strategy: &StrategyProfile) -> DiscreteDistribution<JointProfile> {
        let marginals: Vec<Vec<f64>> = (0..self.players)
            .map(|i| self.slot_marginal(i, &strategy[i]))
            .collect();
        product_distribution(&marginals)
    }

    /// Exact distribution of the outcome given an announced forecast.
    pub fn response_distribution(
        &self,
        forecast: &DiscreteDistribution<JointProfile>,
    ) -> DiscreteDistribution<JointProfile> {
        self.outcome_distribution(&self.respond(forecast))
    }

    /// Draws types from the prior and plays the strategy profile.
    pub fn sample<R: Rng + ?Sized>(&self, strategy: &StrategyProfile, rng: &mut R) -> JointProfile {
        JointProfile::from_actions(
            (0..self.players)
                .map(|i| {
                    let u: f64 = rng.random();
                    let mut acc = 0.0;
                    let mut chosen = self.types[i].len() - 1;
                    for (t, ty) in self.types[i].iter().enumerate() {
                        acc += ty.prob;
                        if u < acc {
                            chosen = t;
                            break;
                        }
                    }
                    strategy[i][chosen]
                })
                .collect(),
        )
    }

    /// Expected utility of type `t` of player `i` at slot `k` when the
    /// others follow `strategy`.
    pub fn interim_utility(&self, strategy: &StrategyProfile, i: usize, t: usize, k: usize) -> f64 {
        let mut others = strategy.clone();
        // player i's own entry is ignored by the count, pin it to one slot
        others[i] = vec![0; self.types[i].len()];
        let dist = self.outcome_distribution(&others);
        dist.iter()
            .map(|(c, p)| p * self.types[i][t].utility.get(k, others_at(c, i, k) + 1))
            .sum()
    }

    /// Number of deterministic strategy profiles.
    pub fn strategy_count(&self) -> u128 {
        self.types
            .iter()
            .map(|ts| (self.slots as u128).pow(ts.len() as u32))
            .product()
    }
}

/// Product distribution over joint profiles from per-player slot marginals.
pub fn product_distribution(marginals: &[Vec<f64>]) -> DiscreteDistribution<JointProfile> {
    let mut masses: BTreeMap<JointProfile, f64> = BTreeMap::new();
    masses.insert(JointProfile::from_actions(Vec::new()), 1.0);
    for marginal in marginals {
        let mut next = BTreeMap::new();
        for (prefix, p) in &masses {
            for (k, &q) in marginal.iter().enumerate() {
                if q > 0.0 {
                    let mut actions = prefix.actions().to_vec();
                    actions.push(k);
                    next.insert(JointProfile::from_actions(actions), p * q);
                }
            }
        }
        masses = next;
    }
    DiscreteDistribution::from_masses(masses)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jp(a: &[usize]) -> JointProfile {
        JointProfile::from_actions(a.to_vec())
    }

    #[test]
    fn best_response_avoids_crowd() {
        let game = FiniteCongestionGame::flapping_example();
        let other_at_0 = DiscreteDistribution::dirac(jp(&[0, 0]));
        assert_eq!(best_response(1, &game, &other_at_0), 1);
        let other_at_1 = DiscreteDistribution::dirac(jp(&[1, 1]));
        assert_eq!(best_response(1, &game, &other_at_1), 0);
        // own entry is ignored
        let mixed = DiscreteDistribution::dirac(jp(&[0, 1]));
        assert_eq!(best_response(1, &game, &mixed), 1);
    }

    #[test]
    fn ties_go_to_slot_zero() {
        let utility = UtilityTable::uniform(3, 2, |_| 1.0).unwrap();
        let game = FiniteCongestionGame::new(2, utility).unwrap();
        let belief = DiscreteDistribution::dirac(jp(&[2, 2]));
        assert_eq!(best_response(0, &game, &belief), 0);
    }

    #[test]
    fn flapping_outcomes() {
        let game = FiniteCongestionGame::flapping_example();
        assert_eq!(
            play_profile(&game, &DiscreteDistribution::dirac(jp(&[0, 0]))),
            jp(&[1, 1])
        );
        assert_eq!(
            play_profile(&game, &DiscreteDistribution::dirac(jp(&[1, 1]))),
            jp(&[0, 0])
        );
        assert_eq!(
            play_profile(&game, &DiscreteDistribution::dirac(jp(&[1, 0]))),
            jp(&[1, 0])
        );
    }

    #[test]
    fn table_validation() {
        assert!(UtilityTable::new(vec![vec![1.0]]).is_err());
        assert!(UtilityTable::new(vec![vec![1.0, 0.0], vec![1.0]]).is_err());
        assert!(UtilityTable::new(vec![vec![f64::INFINITY], vec![1.0]]).is_err());
        let table = UtilityTable::uniform(2, 3, |m| -(m as f64)).unwrap();
        assert!(FiniteCongestionGame::new(2, table).is_err());
    }

    #[test]
    fn product_of_marginals() {
        let d = product_distribution(&[vec![0.5, 0.5], vec![1.0, 0.0]]);
        assert_eq!(d.len(), 2);
        assert_eq!(d.prob(&jp(&[0, 0])), 0.5);
        assert_eq!(d.prob(&jp(&[1, 0])), 0.5);
        d.validate().unwrap();
    }

    #[test]
    fn complete_game_as_bayesian_matches() {
        let game = FiniteCongestionGame::flapping_example();
        let bayes = game.to_bayesian();
        let forecast = DiscreteDistribution::dirac(jp(&[0, 0]));
        assert_eq!(
            bayes.response_distribution(&forecast),
            DiscreteDistribution::dirac(play_profile(&game, &forecast))
        );
    }
}
