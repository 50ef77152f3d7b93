//! Offline evaluation of forecasting policies on recorded day-by-bin data.
//!
//! Recorded outcomes do not react to the forecasts, so each policy is
//! replayed against the rows in order. Every policy starts from the first
//! day as its forecast and is scored on days `1..T`.

use std::fmt;

use anyhow::{ensure, Context, Result};
use crowdcast::loss::rows_mse;
use crowdcast::policies::{AverageState, ExpodampState};
use crowdcast::PointForecast;

use crate::data::DayMatrix;
use crate::UsageError;

pub const REPLAY_POLICIES: [&str; 3] = ["naive", "average", "expodamp"];

#[derive(Clone, Debug, PartialEq)]
pub enum ReplayPolicy {
    Naive,
    Average,
    Expodamp { alpha: f64 },
}

impl fmt::Display for ReplayPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReplayPolicy::Naive => write!(f, "naive"),
            ReplayPolicy::Average => write!(f, "average"),
            ReplayPolicy::Expodamp { alpha } => write!(f, "expodamp(alpha={alpha})"),
        }
    }
}

/// Parses `"expodamp:alpha=0.3,average,naive"`.
pub fn parse_policies(spec: &str) -> Result<Vec<ReplayPolicy>, UsageError> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_policy)
        .collect()
}

fn parse_policy(item: &str) -> Result<ReplayPolicy, UsageError> {
    let (name, params) = item.split_once(':').unwrap_or((item, ""));
    let mut alpha = None;
    for pair in params.split(';').filter(|p| !p.is_empty()) {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| UsageError(format!("policy parameter `{pair}` is not key=value")))?;
        match (name, key) {
            ("expodamp", "alpha") => {
                alpha = Some(
                    value
                        .parse::<f64>()
                        .ok()
                        .filter(|a| a.is_finite())
                        .ok_or_else(|| UsageError(format!("alpha `{value}` is not a finite number")))?,
                )
            }
            _ => return Err(UsageError(format!("policy `{name}` has no parameter `{key}`"))),
        }
    }
    match name {
        "naive" => Ok(ReplayPolicy::Naive),
        "average" => Ok(ReplayPolicy::Average),
        "expodamp" => Ok(ReplayPolicy::Expodamp {
            alpha: alpha.ok_or_else(|| UsageError("expodamp needs alpha, e.g. expodamp:alpha=0.3".into()))?,
        }),
        other => Err(UsageError(format!(
            "unknown policy `{other}`; valid policies: {}",
            REPLAY_POLICIES.join(", ")
        ))),
    }
}

/// Forecasts for days `1..T`.
pub fn replay_forecasts(policy: &ReplayPolicy, data: &DayMatrix) -> Result<Vec<Vec<f64>>> {
    ensure!(data.days() >= 2, "replay needs at least two days of data");
    let rows = data.rows();
    let first = PointForecast::new(rows[0].clone()).context("first day")?;
    let mut forecasts = Vec::with_capacity(rows.len() - 1);
    match policy {
        ReplayPolicy::Naive => forecasts.extend(rows[..rows.len() - 1].iter().cloned()),
        ReplayPolicy::Average => {
            let mut state = AverageState::new(first);
            state.step(&rows[0])?;
            for y in &rows[1..] {
                forecasts.push(state.forecast().into_inner());
                state.step(y)?;
            }
        }
        ReplayPolicy::Expodamp { alpha } => {
            let mut state = ExpodampState::new(first, *alpha)?;
            for y in &rows[1..] {
                forecasts.push(state.forecast().values().to_vec());
                state.step(y)?;
            }
        }
    }
    Ok(forecasts)
}

pub fn replay_mse(policy: &ReplayPolicy, data: &DayMatrix) -> Result<f64> {
    let forecasts = replay_forecasts(policy, data)?;
    Ok(rows_mse(&forecasts, &data.rows()[1..])?)
}

/// `Method | Mean squared error` table with three decimals.
pub fn format_table(results: &[(String, f64)]) -> String {
    let header = "Method";
    let width = results.iter().map(|(m, _)| m.len()).chain([header.len()]).max().unwrap_or(0);
    let mut out = format!("{header:<width$} | Mean squared error\n");
    out.push_str(&format!("{}-|-------------------\n", "-".repeat(width)));
    for (method, mse) in results {
        out.push_str(&format!("{method:<width$} | {mse:.3}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_policy_lists() {
        assert_eq!(
            parse_policies("expodamp:alpha=0.3, average,naive").unwrap(),
            vec![ReplayPolicy::Expodamp { alpha: 0.3 }, ReplayPolicy::Average, ReplayPolicy::Naive]
        );
        let err = parse_policies("oracle").unwrap_err();
        assert!(err.0.contains("naive, average, expodamp"));
        assert!(parse_policies("expodamp").is_err());
        assert!(parse_policies("naive:alpha=1").is_err());
    }

    #[test]
    fn naive_and_expodamp_one_agree() {
        let data = DayMatrix::unlabeled(vec![vec![0.0, 1.0], vec![1.0, 1.0], vec![0.5, 0.0]]).unwrap();
        let naive = replay_forecasts(&ReplayPolicy::Naive, &data).unwrap();
        let expo = replay_forecasts(&ReplayPolicy::Expodamp { alpha: 1.0 }, &data).unwrap();
        assert_eq!(naive, expo);
        // day 1 forecast is day 0 for every policy; day 2 average is the mean of days 0 and 1
        let avg = replay_forecasts(&ReplayPolicy::Average, &data).unwrap();
        assert_eq!(avg, vec![vec![0.0, 1.0], vec![0.5, 1.0]]);
        assert_eq!(replay_mse(&ReplayPolicy::Naive, &data).unwrap(), (1.0 + 1.25) / 2.0);
    }

    #[test]
    fn table_layout() {
        let t = format_table(&[("naive".into(), 0.12345), ("average".into(), 1.0)]);
        assert_eq!(
            t,
            "Method  | Mean squared error\n--------|-------------------\nnaive   | 0.123\naverage | 1.000\n"
        );
    }
}
