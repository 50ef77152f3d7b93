//! Loss functionals: total variation for probabilistic forecasts, squared
//! error for point forecasts.

use crate::error::{Error, Result};
use crate::types::{DiscreteDistribution, Trajectory};

/// Total variation distance `½ Σ |p − q|` over the union of both supports.
///
/// This is the statistical distance `d` of the prediction objective; any
/// metric with `d(p, q) = 0 ⇔ p = q` would do.
pub fn tv_distance<T: Ord + Clone>(
    p: &DiscreteDistribution<T>,
    q: &DiscreteDistribution<T>,
) -> Result<f64> {
    p.validate()?;
    q.validate()?;
    let half_l1: f64 = p
        .aligned(q)
        .into_iter()
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
        / 2.0;
    Ok(half_l1.min(1.0))
}

/// Squared Euclidean distance between a point forecast and the conditional
/// mean of the observation.
pub fn point_pred_loss(a: &[f64], y_mean: &[f64]) -> Result<f64> {
    if a.len() != y_mean.len() {
        return Err(Error::Shape {
            expected: a.len(),
            got: y_mean.len(),
        });
    }
    Ok(a.iter().zip(y_mean).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Mean over stages of `‖a^t − y^t‖²`.
pub fn trajectory_mse(traj: &Trajectory) -> Result<f64> {
    if traj.is_empty() {
        return Err(Error::EmptyInput("trajectory"));
    }
    let mut total = 0.0;
    for record in &traj.records {
        let a = record.a.as_point().ok_or_else(|| {
            Error::InvalidParameter(format!("stage {} has no point forecast", record.t))
        })?;
        let y = record.y.as_vector().ok_or_else(|| {
            Error::InvalidParameter(format!("stage {} has no vector observation", record.t))
        })?;
        total += point_pred_loss(a.values(), y)?;
    }
    Ok(total / traj.len() as f64)
}

/// Mean squared error of paired forecast/observation rows.
pub fn rows_mse(forecasts: &[Vec<f64>], observations: &[Vec<f64>]) -> Result<f64> {
    if forecasts.is_empty() {
        return Err(Error::EmptyInput("forecast rows"));
    }
    if forecasts.len() != observations.len() {
        return Err(Error::Shape {
            expected: forecasts.len(),
            got: observations.len(),
        });
    }
    let mut total = 0.0;
    for (a, y) in forecasts.iter().zip(observations) {
        total += point_pred_loss(a, y)?;
    }
    Ok(total / forecasts.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{Forecast, JointProfile, Observation, PointForecast, StageRecord};
    use proptest::prelude::*;

    fn jp(a: &[usize]) -> JointProfile {
        JointProfile::from_actions(a.to_vec())
    }

    #[test]
    fn tv_examples() {
        let p = DiscreteDistribution::new([(jp(&[0, 1]), 0.5), (jp(&[1, 0]), 0.5)]).unwrap();
        assert_eq!(tv_distance(&p, &p).unwrap(), 0.0);

        let x = DiscreteDistribution::dirac('x');
        let y = DiscreteDistribution::dirac('y');
        assert_eq!(tv_distance(&x, &y).unwrap(), 1.0);

        let p = DiscreteDistribution::new([('x', 0.75), ('y', 0.25)]).unwrap();
        let q = DiscreteDistribution::new([('x', 0.25), ('y', 0.75)]).unwrap();
        assert_eq!(tv_distance(&p, &q).unwrap(), 0.5);
    }

    #[test]
    fn point_pred_examples() {
        assert_eq!(point_pred_loss(&[3.0, 5.0], &[3.0, 5.0]).unwrap(), 0.0);
        assert_eq!(point_pred_loss(&[0.0], &[2.0]).unwrap(), 4.0);
        assert_eq!(point_pred_loss(&[1.0, 1.0], &[0.0, 2.0]).unwrap(), 2.0);
        assert!(matches!(
            point_pred_loss(&[1.0], &[1.0, 2.0]),
            Err(Error::Shape { .. })
        ));
    }

    fn stage(t: usize, a: Vec<f64>, y: Vec<f64>) -> StageRecord {
        StageRecord {
            t,
            w: 0,
            a: Forecast::Point(PointForecast::new(a).unwrap()),
            y: Observation::Vector(y),
            losses: Default::default(),
        }
    }

    #[test]
    fn mse_examples() {
        let empty = Trajectory {
            records: vec![],
            config_hash: String::new(),
        };
        assert!(matches!(trajectory_mse(&empty), Err(Error::EmptyInput(_))));

        let same = Trajectory {
            records: vec![stage(0, vec![1.0], vec![1.0]), stage(1, vec![2.0], vec![2.0])],
            config_hash: String::new(),
        };
        assert_eq!(trajectory_mse(&same).unwrap(), 0.0);

        let two = Trajectory {
            records: vec![stage(0, vec![0.0], vec![2.0]), stage(1, vec![1.0], vec![1.0])],
            config_hash: String::new(),
        };
        assert_eq!(trajectory_mse(&two).unwrap(), 2.0);
    }

    fn dist_strategy() -> impl Strategy<Value = DiscreteDistribution<u8>> {
        prop::collection::vec(0.0f64..1.0, 4).prop_filter_map("zero mass", |w| {
            let total: f64 = w.iter().sum();
            if total <= 1e-6 {
                return None;
            }
            let mut masses: Vec<f64> = w.iter().map(|x| x / total).collect();
            // push rounding into the last entry so the mass is exact enough
            let head: f64 = masses[..3].iter().sum();
            masses[3] = (1.0 - head).max(0.0);
            DiscreteDistribution::new(masses.into_iter().enumerate().map(|(i, p)| (i as u8, p)))
                .ok()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn tv_is_a_metric(p in dist_strategy(), q in dist_strategy(), r in dist_strategy()) {
            let pq = tv_distance(&p, &q).unwrap();
            let qp = tv_distance(&q, &p).unwrap();
            let pr = tv_distance(&p, &r).unwrap();
            let rq = tv_distance(&r, &q).unwrap();
            prop_assert_eq!(pq, qp);
            prop_assert!((0.0..=1.0).contains(&pq));
            prop_assert!(pq <= pr + rq + 1e-12);
            prop_assert_eq!(tv_distance(&p, &p).unwrap(), 0.0);
        }

        #[test]
        fn point_pred_zero_iff_equal(a in prop::collection::vec(-10.0f64..10.0, 3),
                                     b in prop::collection::vec(-10.0f64..10.0, 3)) {
            prop_assert_eq!(point_pred_loss(&a, &b).unwrap() == 0.0, a == b);
            prop_assert_eq!(point_pred_loss(&a, &a).unwrap(), 0.0);
        }

        #[test]
        fn mse_invariant_under_permutation(rows in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..12),
                                           seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let records: Vec<_> = rows.iter().enumerate()
                .map(|(t, (a, y))| stage(t, vec![*a], vec![*y])).collect();
            let mut shuffled = records.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let m1 = trajectory_mse(&Trajectory { records, config_hash: String::new() }).unwrap();
            let m2 = trajectory_mse(&Trajectory { records: shuffled, config_hash: String::new() }).unwrap();
            prop_assert!((m1 - m2).abs() <= 1e-12 * m1.max(1.0));
        }
    }
}
