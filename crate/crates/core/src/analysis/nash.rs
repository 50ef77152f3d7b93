use crate::environments::{
    BayesianCongestionGame, FiniteCongestionGame, StrategyProfile, UTILITY_TIE_EPS,
};
use crate::error::Result;
use crate::types::JointProfile;

/// Pure Nash check of a complete-information profile.
///
/// Without `strict`, no player may have a strictly improving unilateral
/// deviation. With `strict`, every player's current slot must also be its
/// unique best reply.
pub fn is_nash(game: &FiniteCongestionGame, profile: &JointProfile, strict: bool) -> bool {
    (0..game.players()).all(|i| {
        let current = game.payoff(profile, i);
        (0..game.slots())
            .filter(|&k| k != profile.slot(i))
            .all(|k| {
                let deviation = game.deviation_payoff(profile, i, k);
                if strict {
                    deviation < current - UTILITY_TIE_EPS
                } else {
                    deviation <= current + UTILITY_TIE_EPS
                }
            })
    })
}

/// Equilibrium that also survives the lowest-slot tie rule: every player's
/// slot is the lowest among its best replies, so simultaneous best
/// responses to the profile reproduce it.
pub fn is_tie_stable_nash(game: &FiniteCongestionGame, profile: &JointProfile) -> bool {
    (0..game.players()).all(|i| {
        let current = game.payoff(profile, i);
        (0..game.slots()).filter(|&k| k != profile.slot(i)).all(|k| {
            let deviation = game.deviation_payoff(profile, i, k);
            if k < profile.slot(i) {
                deviation < current - UTILITY_TIE_EPS
            } else {
                deviation <= current + UTILITY_TIE_EPS
            }
        })
    })
}

/// All pure equilibria by brute force, lexicographic order.
pub fn enumerate_nash(game: &FiniteCongestionGame) -> Result<Vec<JointProfile>> {
    game.check_size()?;
    Ok(JointProfile::enumerate(game.players(), game.slots())
        .filter(|c| is_nash(game, c, false))
        .collect())
}

/// Bayesian Nash check: no type with positive prior mass gains by deviating.
pub fn is_bne(game: &BayesianCongestionGame, strategy: &StrategyProfile, strict: bool) -> bool {
    (0..game.players()).all(|i| {
        game.types(i).iter().enumerate().all(|(t, ty)| {
            if ty.prob == 0.0 {
                return true;
            }
            let own = strategy[i][t];
            let current = game.interim_utility(strategy, i, t, own);
            (0..game.slots()).filter(|&k| k != own).all(|k| {
                let deviation = game.interim_utility(strategy, i, t, k);
                if strict {
                    deviation < current - UTILITY_TIE_EPS
                } else {
                    deviation <= current + UTILITY_TIE_EPS
                }
            })
        })
    })
}

/// All deterministic strategy profiles of a Bayesian game, each player's
/// strategy enumerated lexicographically over its types.
pub fn enumerate_strategies(game: &BayesianCongestionGame) -> Result<Vec<StrategyProfile>> {
    let size = game.strategy_count();
    if size > crate::environments::PROFILE_LIMIT {
        return Err(crate::Error::TooLarge {
            size,
            limit: crate::environments::PROFILE_LIMIT,
        });
    }
    let per_player: Vec<Vec<Vec<usize>>> = (0..game.players())
        .map(|i| {
            JointProfile::enumerate(game.types(i).len(), game.slots())
                .map(|p| p.actions().to_vec())
                .collect()
        })
        .collect();
    let mut profiles: Vec<StrategyProfile> = vec![Vec::new()];
    for options in &per_player {
        profiles = profiles
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |s| {
                    let mut next = prefix.clone();
                    next.push(s.clone());
                    next
                })
            })
            .collect();
    }
    Ok(profiles)
}

/// All Bayesian Nash equilibria in pure strategies.
pub fn enumerate_bne(game: &BayesianCongestionGame) -> Result<Vec<StrategyProfile>> {
    Ok(enumerate_strategies(game)?
        .into_iter()
        .filter(|s| is_bne(game, s, false))
        .collect())
}
