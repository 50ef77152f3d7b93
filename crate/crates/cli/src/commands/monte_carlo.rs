use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use crowdcast::engine::{monte_carlo_with, DEFAULT_SF_TOLERANCE};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// TOML simulation config.
    #[arg(long)]
    pub config: PathBuf,
    /// Number of independent runs.
    #[arg(long, default_value_t = 100)]
    pub runs: usize,
    /// Total-variation radius for counting a final forecast as self-fulfilling.
    #[arg(long, default_value_t = DEFAULT_SF_TOLERANCE)]
    pub sf_tol: f64,
}

pub fn run(args: &Args, out: &mut dyn Write) -> Result<()> {
    let config = crate::load_config(&args.config)?;
    let report = monte_carlo_with(&config, args.runs, args.sf_tol)?;
    writeln!(out, "runs: {}", report.runs.len())?;
    writeln!(out, "loss | mean | variance")?;
    for (name, summary) in &report.losses {
        writeln!(out, "{name} | {:.6} | {:.6}", summary.mean, summary.variance)?;
    }
    if let Some(fraction) = report.self_fulfilling_fraction {
        writeln!(
            out,
            "final forecast within {} of a self-fulfilling candidate: {:.3}",
            report.sf_tolerance, fraction
        )?;
    }
    Ok(())
}
