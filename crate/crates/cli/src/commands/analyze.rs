use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use crowdcast::analysis::{bayesian_correspondence_check, correspondence_check, Violation};
use crowdcast::engine::{GameModel, GameSection, DEFAULT_SF_TOLERANCE};
use crowdcast::environments::StrategyProfile;
use serde::Deserialize;

use crate::UsageError;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// TOML file with a `[game]` section; other sections are ignored.
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Deserialize)]
struct GameFile {
    game: Option<GameSection>,
}

fn strategy_string(s: &StrategyProfile) -> String {
    let players: Vec<String> = s
        .iter()
        .map(|types| format!("[{}]", types.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", players.join(","))
}

fn holds(ok: bool) -> &'static str {
    if ok {
        "holds"
    } else {
        "VIOLATED"
    }
}

pub fn run(args: &Args, out: &mut dyn Write) -> Result<()> {
    let text = crate::read_to_string(&args.config)?;
    let file: GameFile = toml::from_str(&text).with_context(|| format!("parsing {}", args.config.display()))?;
    let game = file
        .game
        .ok_or_else(|| UsageError(format!("{} has no [game] section", args.config.display())))?;
    match game.model()? {
        GameModel::Complete(g) => {
            let report = correspondence_check(&g)?;
            writeln!(out, "players: {}, slots: {}, candidates: {}", g.players(), g.slots(), report.candidates)?;
            writeln!(out, "pure equilibria: {}", report.nash.len())?;
            for c in &report.nash {
                let tag = if report.strict_nash.contains(c) { " strict" } else { "" };
                writeln!(out, "  {c}{tag}")?;
            }
            writeln!(out, "self-fulfilling forecasts: {}", report.self_fulfilling.len())?;
            for c in &report.self_fulfilling {
                writeln!(out, "  {c}")?;
            }
            let sf_ok = !report.violations.iter().any(|v| matches!(v, Violation::SelfFulfillingNotNash(_)));
            let strict_ok = !report.violations.iter().any(|v| matches!(v, Violation::StrictNashNotSelfFulfilling(_)));
            writeln!(out, "self-fulfilling => equilibrium: {}", holds(sf_ok))?;
            let vacuous = if report.converse_vacuous() { " (no strict equilibria)" } else { "" };
            writeln!(out, "strict equilibrium => self-fulfilling: {}{vacuous}", holds(strict_ok))?;
            for v in &report.violations {
                writeln!(out, "  violation: {v:?}")?;
            }
        }
        GameModel::Bayesian(g) => {
            let report = bayesian_correspondence_check(&g, DEFAULT_SF_TOLERANCE)?;
            writeln!(out, "players: {}, slots: {}, candidates: {}", g.players(), g.slots(), report.candidates)?;
            writeln!(out, "pure Bayes-Nash equilibria: {}", report.bne.len())?;
            for s in &report.bne {
                let tag = if report.strict_bne.contains(s) { " strict" } else { "" };
                writeln!(out, "  {}{tag}", strategy_string(s))?;
            }
            writeln!(out, "self-fulfilling candidates: {}", report.self_fulfilling.len())?;
            for i in &report.self_fulfilling {
                writeln!(out, "  candidate {i}")?;
            }
            writeln!(out, "correspondence: {}", holds(report.holds()))?;
            for v in &report.violations {
                writeln!(out, "  violation: {v}")?;
            }
        }
    }
    Ok(())
}
