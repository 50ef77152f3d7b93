//! Rosenthal potential and collision-free move sets.

use crate::environments::FiniteCongestionGame;
use crate::types::JointProfile;

/// `Φ(c) = Σ_k Σ_{m=1}^{n_k(c)} u(k, m)`; empty slots contribute nothing.
///
/// A unilateral deviation changes `Φ` by exactly the deviator's utility
/// change.
pub fn potential(game: &FiniteCongestionGame, profile: &JointProfile) -> f64 {
    profile
        .occupancy(game.slots())
        .into_iter()
        .enumerate()
        .map(|(k, count)| (1..=count).map(|m| game.utility().get(k, m)).sum::<f64>())
        .sum()
}

/// True iff the players in `set` pairwise differ in source slot (under `a`)
/// and in target slot (under `c`).
pub fn collision_free_check(set: &[usize], a: &JointProfile, c: &JointProfile) -> bool {
    for (x, &i) in set.iter().enumerate() {
        for &j in &set[x + 1..] {
            if i == j {
                continue;
            }
            if a.slot(i) == a.slot(j) || c.slot(i) == c.slot(j) {
                return false;
            }
        }
    }
    true
}

/// `a^E`: apply the moves `a_i → c_i` of the players in `set` to `a`.
pub fn apply_moves(set: &[usize], a: &JointProfile, c: &JointProfile) -> JointProfile {
    let mut actions = a.actions().to_vec();
    for &i in set {
        actions[i] = c.slot(i);
    }
    JointProfile::from_actions(actions)
}
