//! Candidate update rules used by Partpred after each group of samples.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::types::{DiscreteDistribution, JointProfile, DISTRIBUTION_TOLERANCE};

/// How Partpred combines the announced candidate with the best-fitting one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UpdateRule {
    /// Collision-free subset of best-response moves (complete-information
    /// congestion games, Dirac candidates).
    Congestion,
    /// Take over one player's marginal (general stochastic case).
    General,
}

/// Applies a greedy collision-free subset of the moves `a_i → a′_i`.
///
/// Players are visited in ascending index. A player whose move is the
/// identity is skipped; a moving player is admitted when its source slot
/// differs from every admitted source and its target slot from every
/// admitted target. The first moving player is therefore always admitted,
/// and the output equals `a` only when `a = a′`.
pub fn update_congestion(a: &JointProfile, a_prime: &JointProfile) -> JointProfile {
    let mut sources = Vec::new();
    let mut targets = Vec::new();
    let mut out = a.actions().to_vec();
    for (i, (&source, &target)) in a.actions().iter().zip(a_prime.actions()).enumerate() {
        if source == target {
            continue;
        }
        if sources.contains(&source) || targets.contains(&target) {
            continue;
        }
        sources.push(source);
        targets.push(target);
        out[i] = target;
    }
    JointProfile::from_actions(out)
}

fn marginals_differ(p: &BTreeMap<usize, f64>, q: &BTreeMap<usize, f64>) -> bool {
    p.keys()
        .chain(q.keys())
        .any(|k| (p.get(k).unwrap_or(&0.0) - q.get(k).unwrap_or(&0.0)).abs() > DISTRIBUTION_TOLERANCE)
}

/// Replaces the marginal of the lowest-indexed player whose marginal under
/// `a` differs from the one under `a′`.
///
/// The joint is rebuilt as the product of the new marginal with `a`'s
/// distribution over the remaining players. Returns `a` unchanged when all
/// marginals agree.
pub fn update_general(
    a: &DiscreteDistribution<JointProfile>,
    a_prime: &DiscreteDistribution<JointProfile>,
) -> DiscreteDistribution<JointProfile> {
    let players = a
        .support()
        .next()
        .or_else(|| a_prime.support().next())
        .map(|c| c.players())
        .unwrap_or(0);
    let Some((player, new_marginal)) = (0..players).find_map(|i| {
        let target = a_prime.marginal(i);
        marginals_differ(&a.marginal(i), &target).then_some((i, target))
    }) else {
        return a.clone();
    };

    let mut rest: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for (c, p) in a.iter() {
        let mut others = c.actions().to_vec();
        others.remove(player);
        *rest.entry(others).or_insert(0.0) += p;
    }
    let mut masses = BTreeMap::new();
    for (others, p) in &rest {
        for (&k, &q) in &new_marginal {
            let mut actions = others.clone();
            actions.insert(player, k);
            *masses.entry(JointProfile::from_actions(actions)).or_insert(0.0) += p * q;
        }
    }
    DiscreteDistribution::from_masses(masses)
}
