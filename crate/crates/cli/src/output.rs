//! CSV writers for trajectories.

use std::collections::BTreeSet;
use std::io::Write;

use anyhow::Result;
use crowdcast::{Forecast, Observation, Trajectory};

fn loss_names(traj: &Trajectory) -> Vec<String> {
    let names: BTreeSet<&String> = traj.records.iter().flat_map(|r| r.losses.keys()).collect();
    names.into_iter().cloned().collect()
}

fn forecast_cells(a: &Forecast) -> Vec<String> {
    match a {
        Forecast::Point(p) => p.values().iter().map(|v| format!("{v}")).collect(),
        Forecast::Distribution(d) => {
            let (mode, prob) = d.mode().expect("distributions are nonempty");
            let mut cells: Vec<String> = mode.actions().iter().map(|k| k.to_string()).collect();
            cells.push(format!("{prob}"));
            cells
        }
    }
}

fn observation_cells(y: &Observation) -> Vec<String> {
    match y {
        Observation::Vector(v) => v.iter().map(|v| format!("{v}")).collect(),
        Observation::Profile(c) => c.actions().iter().map(|k| k.to_string()).collect(),
    }
}

fn header(traj: &Trajectory, losses: &[String]) -> Vec<String> {
    let Some(first) = traj.records.first() else {
        return vec!["t".into()];
    };
    let mut cols = vec!["t".to_string()];
    let (a_len, has_prob) = match &first.a {
        Forecast::Point(p) => (p.len(), false),
        Forecast::Distribution(d) => (d.mode().map_or(0, |(c, _)| c.players()), true),
    };
    cols.extend((0..a_len).map(|i| format!("a_{i}")));
    if has_prob {
        cols.push("a_prob".into());
    }
    let y_len = observation_cells(&first.y).len();
    cols.extend((0..y_len).map(|i| format!("y_{i}")));
    cols.extend(losses.iter().cloned());
    cols
}

/// One row per stage. Finite-game forecasts are written as their most
/// likely profile (`a_i`) and its probability (`a_prob`).
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, out: W) -> Result<()> {
    let losses = loss_names(traj);
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    writer.write_record(header(traj, &losses))?;
    for record in &traj.records {
        let mut row = vec![record.t.to_string()];
        row.extend(forecast_cells(&record.a));
        row.extend(observation_cells(&record.y));
        row.extend(losses.iter().map(|name| record.losses.get(name).map_or(String::new(), |v| format!("{v}"))));
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Long format `t,series,value`, one row per stage and column.
pub fn write_plot_data<W: Write>(traj: &Trajectory, out: W) -> Result<()> {
    let losses = loss_names(traj);
    let columns = header(traj, &losses);
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    writer.write_record(["t", "series", "value"])?;
    for record in &traj.records {
        let mut cells = forecast_cells(&record.a);
        cells.extend(observation_cells(&record.y));
        cells.extend(losses.iter().map(|name| record.losses.get(name).map_or(String::new(), |v| format!("{v}"))));
        let t = record.t.to_string();
        for (series, value) in columns[1..].iter().zip(cells) {
            writer.write_record([t.as_str(), series.as_str(), value.as_str()])?;
        }
    }
    writer.flush()?;
    Ok(())
}
