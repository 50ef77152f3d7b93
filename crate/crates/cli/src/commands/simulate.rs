use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use crowdcast::engine::simulate;
use log::info;

use crate::output::{write_plot_data, write_trajectory_csv};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// TOML simulation config.
    #[arg(long)]
    pub config: PathBuf,
    /// Trajectory CSV to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Overrides `sim.seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write long-format plot data next to the output.
    #[arg(long)]
    pub emit_plot_data: bool,
}

/// `traj.csv` → `traj.plot.csv`.
pub fn plot_path(out: &Path) -> PathBuf {
    out.with_extension("plot.csv")
}

pub fn run(args: &Args, out: &mut dyn Write) -> Result<()> {
    let mut config = crate::load_config(&args.config)?;
    if let Some(seed) = args.seed {
        config.sim.seed = seed;
    }
    let output = simulate(&config)?;
    let traj = &output.trajectory;
    info!("simulated {} stages (config {})", traj.len(), traj.config_hash);

    let file = File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    write_trajectory_csv(traj, BufWriter::new(file))?;
    writeln!(out, "wrote {}", args.out.display())?;
    if args.emit_plot_data {
        let path = plot_path(&args.out);
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        write_plot_data(traj, BufWriter::new(file))?;
        writeln!(out, "wrote {}", path.display())?;
    }

    writeln!(out, "stages: {}", traj.len())?;
    if let Some(last) = traj.records.last() {
        for (name, value) in &last.losses {
            writeln!(out, "final {name}: {value}")?;
        }
    }
    if let Some(converged) = output.converged {
        writeln!(out, "converged: {converged}")?;
        writeln!(out, "group updates: {}", output.partpred_events.len())?;
    }
    Ok(())
}
