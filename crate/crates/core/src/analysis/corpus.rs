//! Seeded random game corpora.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::environments::{BayesianCongestionGame, FiniteCongestionGame, PlayerType, UtilityTable};
use crate::error::Result;
use crate::rng::stream;

fn random_table<R: Rng + ?Sized>(rng: &mut R, players: usize, slots: usize) -> Result<UtilityTable> {
    UtilityTable::new(
        (0..slots)
            .map(|_| {
                let mut u = rng.random_range(0.0..10.0);
                (0..players)
                    .map(|m| {
                        if m > 0 {
                            u -= rng.random_range(0.1..3.0);
                        }
                        u
                    })
                    .collect()
            })
            .collect(),
    )
}

/// Congestion game whose utilities strictly decrease in the occupant count.
pub fn random_congestion_game<R: Rng + ?Sized>(
    rng: &mut R,
    players: usize,
    slots: usize,
) -> Result<FiniteCongestionGame> {
    FiniteCongestionGame::new(players, random_table(rng, players, slots)?)
}

/// `count` games cycling through `n ∈ {2, 3, 4}` and `d ∈ {2, 3}`.
pub fn congestion_corpus(count: usize, seed: u64) -> Vec<FiniteCongestionGame> {
    (0..count)
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream(seed, j as u64));
            let players = 2 + j % 3;
            let slots = 2 + (j / 3) % 2;
            random_congestion_game(&mut rng, players, slots).expect("generated table is valid")
        })
        .collect()
}

/// Bayesian congestion game with equiprobable types; each type has its own
/// strictly decreasing utility table.
pub fn random_bayesian_game<R: Rng + ?Sized>(
    rng: &mut R,
    players: usize,
    types_per_player: usize,
    slots: usize,
) -> Result<BayesianCongestionGame> {
    let prob = 1.0 / types_per_player as f64;
    let types = (0..players)
        .map(|_| {
            (0..types_per_player)
                .map(|_| {
                    Ok(PlayerType {
                        prob,
                        utility: random_table(rng, players, slots)?,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    BayesianCongestionGame::new(types)
}
