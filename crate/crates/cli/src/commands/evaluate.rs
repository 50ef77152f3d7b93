use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};

use crate::data::parse_day_csv;
use crate::replay::{format_table, parse_policies, replay_mse};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Day-by-bin CSV: a header of bin labels, then one row per day.
    #[arg(long)]
    pub data: PathBuf,
    /// Comma-separated policies, e.g. `expodamp:alpha=0.3,average,naive`.
    #[arg(long, default_value = "naive,average,expodamp:alpha=0.3")]
    pub policies: String,
}

pub fn run(args: &Args, out: &mut dyn Write) -> Result<()> {
    let policies = parse_policies(&args.policies)?;
    let text = crate::read_to_string(&args.data)?;
    let data = parse_day_csv(&text).with_context(|| format!("parsing {}", args.data.display()))?;
    let results = policies
        .iter()
        .map(|p| Ok((p.to_string(), replay_mse(p, &data)?)))
        .collect::<Result<Vec<_>>>()?;
    write!(out, "{}", format_table(&results))?;
    Ok(())
}
