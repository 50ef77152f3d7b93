//! Domain values shared by policies, environments and the engine.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the total mass of a probability vector.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Default tolerance when comparing two distributions for equality.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

/// Covariate identifier `W`. Runs in this crate keep it constant.
pub type Covariate = u32;

/// A point forecast: one real entry per slot or sample time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PointForecast(Vec<f64>);

impl PointForecast {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput("point forecast"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "point forecast entry {v} is not finite"
            )));
        }
        Ok(Self(values))
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(vec![0.0; len])
    }

    /// Checks the population-fraction semantics of the nonatomic setting.
    pub fn check_fraction(&self) -> Result<()> {
        match self.0.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            Some(v) => Err(Error::InvalidParameter(format!(
                "population fraction {v} outside [0, 1]"
            ))),
            None => Ok(()),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for PointForecast {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<PointForecast> for Vec<f64> {
    fn from(value: PointForecast) -> Self {
        value.0
    }
}

/// Collective choice `C`: one slot index per player.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct JointProfile(Vec<usize>);

impl JointProfile {
    /// Builds a profile, checking every entry against the slot count `d`.
    pub fn new(actions: Vec<usize>, slots: usize) -> Result<Self> {
        if let Some(k) = actions.iter().find(|&&k| k >= slots) {
            return Err(Error::InvalidParameter(format!(
                "slot {k} outside range 0..{slots}"
            )));
        }
        Ok(Self(actions))
    }

    /// Builds a profile without a range check.
    pub fn from_actions(actions: Vec<usize>) -> Self {
        Self(actions)
    }

    pub fn actions(&self) -> &[usize] {
        &self.0
    }

    pub fn players(&self) -> usize {
        self.0.len()
    }

    pub fn slot(&self, player: usize) -> usize {
        self.0[player]
    }

    /// Copy with `player` moved to `slot`.
    pub fn with(&self, player: usize, slot: usize) -> Self {
        let mut actions = self.0.clone();
        actions[player] = slot;
        Self(actions)
    }

    /// Number of players at each of the `slots` slots.
    pub fn occupancy(&self, slots: usize) -> Vec<usize> {
        let mut counts = vec![0; slots];
        for &k in &self.0 {
            counts[k] += 1;
        }
        counts
    }

    /// Profiles of `players` players over `slots` slots in lexicographic order.
    pub fn enumerate(players: usize, slots: usize) -> impl Iterator<Item = JointProfile> {
        let total = (slots as u128).pow(players as u32);
        (0..total).map(move |mut index| {
            let mut actions = vec![0; players];
            for entry in actions.iter_mut().rev() {
                *entry = (index % slots as u128) as usize;
                index /= slots as u128;
            }
            JointProfile(actions)
        })
    }
}

impl fmt::Display for JointProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// A finitely supported probability distribution.
///
/// Entries are kept sorted by outcome with zero-mass outcomes dropped, so two
/// distributions with the same masses compare equal structurally.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDistribution<T = JointProfile> {
    entries: Vec<(T, f64)>,
}

impl<T: Ord + Clone> DiscreteDistribution<T> {
    pub fn new(pairs: impl IntoIterator<Item = (T, f64)>) -> Result<Self> {
        let mut entries: Vec<(T, f64)> = pairs.into_iter().collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidDistribution(
                "support entries must be unique".into(),
            ));
        }
        let mut total = 0.0;
        for (_, p) in &entries {
            if !p.is_finite() || *p < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "probability {p} is not a nonnegative finite number"
                )));
            }
            total += p;
        }
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        entries.retain(|(_, p)| *p > 0.0);
        Ok(Self { entries })
    }

    pub fn dirac(outcome: T) -> Self {
        Self {
            entries: vec![(outcome, 1.0)],
        }
    }

    /// Empirical distribution of a tally.
    pub fn from_counts(counts: &BTreeMap<T, usize>) -> Result<Self> {
        let total: usize = counts.values().sum();
        if total == 0 {
            return Err(Error::EmptyInput("empirical tally"));
        }
        let n = total as f64;
        Ok(Self {
            entries: counts
                .iter()
                .filter(|(_, &c)| c > 0)
                .map(|(x, &c)| (x.clone(), c as f64 / n))
                .collect(),
        })
    }

    pub fn prob(&self, outcome: &T) -> f64 {
        self.entries
            .binary_search_by(|(x, _)| x.cmp(outcome))
            .map(|i| self.entries[i].1)
            .unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, f64)> {
        self.entries.iter().map(|(x, p)| (x, *p))
    }

    pub fn support(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|(x, _)| x)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_dirac(&self) -> Option<&T> {
        match self.entries.as_slice() {
            [(x, p)] if *p == 1.0 => Some(x),
            _ => None,
        }
    }

    /// Most probable outcome, lowest outcome first on ties.
    pub fn mode(&self) -> Option<(&T, f64)> {
        self.iter()
            .fold(None, |best: Option<(&T, f64)>, (x, p)| match best {
                Some((_, q)) if q >= p => best,
                _ => Some((x, p)),
            })
    }

    /// Checks the mass invariant. Useful for values built by arithmetic.
    pub fn validate(&self) -> Result<()> {
        let total: f64 = self.entries.iter().map(|(_, p)| p).sum();
        if self.entries.iter().any(|(_, p)| !p.is_finite() || *p < 0.0)
            || (total - 1.0).abs() > MASS_TOLERANCE
        {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(())
    }

    /// Pairs of masses over the union of both supports, in outcome order.
    pub(crate) fn aligned<'a>(&'a self, other: &'a Self) -> Vec<(f64, f64)> {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some((x, p)), Some((y, q))) => match x.cmp(y) {
                    std::cmp::Ordering::Less => {
                        out.push((*p, 0.0));
                        i += 1;
                    }
                    std::cmp::Ordering::Greater => {
                        out.push((0.0, *q));
                        j += 1;
                    }
                    std::cmp::Ordering::Equal => {
                        out.push((*p, *q));
                        i += 1;
                        j += 1;
                    }
                },
                (Some((_, p)), None) => {
                    out.push((*p, 0.0));
                    i += 1;
                }
                (None, Some((_, q))) => {
                    out.push((0.0, *q));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        out
    }

    /// Euclidean norm of the difference of the probability vectors.
    pub fn euclidean_distance(&self, other: &Self) -> f64 {
        self.aligned(other)
            .into_iter()
            .map(|(p, q)| (p - q) * (p - q))
            .sum::<f64>()
            .sqrt()
    }

    /// Largest pointwise mass difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.aligned(other)
            .into_iter()
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }
}

impl DiscreteDistribution<JointProfile> {
    /// Marginal distribution of one player's slot.
    pub fn marginal(&self, player: usize) -> BTreeMap<usize, f64> {
        let mut out = BTreeMap::new();
        for (c, p) in self.iter() {
            *out.entry(c.slot(player)).or_insert(0.0) += p;
        }
        out
    }

    /// Builds a distribution from raw masses without revalidating them.
    pub(crate) fn from_masses(masses: BTreeMap<JointProfile, f64>) -> Self {
        Self {
            entries: masses.into_iter().filter(|(_, p)| *p > 0.0).collect(),
        }
    }
}

/// Forecast `A` published by an assistant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Forecast {
    Point(PointForecast),
    Distribution(DiscreteDistribution<JointProfile>),
}

impl Forecast {
    pub fn as_point(&self) -> Option<&PointForecast> {
        match self {
            Forecast::Point(p) => Some(p),
            Forecast::Distribution(_) => None,
        }
    }

    pub fn as_distribution(&self) -> Option<&DiscreteDistribution<JointProfile>> {
        match self {
            Forecast::Distribution(d) => Some(d),
            Forecast::Point(_) => None,
        }
    }
}

/// Observation `Y`: an aggregate vector or a fully observed joint profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Observation {
    Vector(Vec<f64>),
    Profile(JointProfile),
}

impl Observation {
    pub fn as_vector(&self) -> Option<&[f64]> {
        match self {
            Observation::Vector(v) => Some(v),
            Observation::Profile(_) => None,
        }
    }

    pub fn as_profile(&self) -> Option<&JointProfile> {
        match self {
            Observation::Profile(c) => Some(c),
            Observation::Vector(_) => None,
        }
    }
}

/// One stage of a repeated run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub t: usize,
    pub w: Covariate,
    pub a: Forecast,
    pub y: Observation,
    pub losses: BTreeMap<String, f64>,
}

/// Stage records of one run, strictly ordered by `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub records: Vec<StageRecord>,
    pub config_hash: String,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn final_forecast(&self) -> Option<&Forecast> {
        self.records.last().map(|r| &r.a)
    }

    /// Values of one logged loss, stage by stage.
    pub fn loss_series(&self, name: &str) -> Vec<f64> {
        self.records
            .iter()
            .filter_map(|r| r.losses.get(name).copied())
            .collect()
    }
}
