pub mod analyze;
pub mod evaluate;
pub mod monte_carlo;
pub mod simulate;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "crowdcast", version, about = "Forecasts for populations that react to them")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulation and write its trajectory as CSV.
    Simulate(simulate::Args),
    /// Replay forecasting policies on recorded day-by-bin data.
    Evaluate(evaluate::Args),
    /// Enumerate equilibria and self-fulfilling forecasts of a game.
    Analyze(analyze::Args),
    /// Repeat a simulation over independent seeds and summarize losses.
    MonteCarlo(monte_carlo::Args),
}

pub fn run(cli: Cli, out: &mut dyn std::io::Write) -> anyhow::Result<()> {
    match cli.command {
        Command::Simulate(args) => simulate::run(&args, out),
        Command::Evaluate(args) => evaluate::run(&args, out),
        Command::Analyze(args) => analyze::run(&args, out),
        Command::MonteCarlo(args) => monte_carlo::run(&args, out),
    }
}
