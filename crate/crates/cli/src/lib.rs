//! Command-line harness: load configs, run simulations and analyses, write
//! results.

pub mod commands;
pub mod data;
pub mod output;
pub mod replay;

use std::fmt;
use std::path::Path;

use anyhow::Context;

/// A problem with user input (config, schema or arguments). Exits with
/// status 2.
#[derive(Clone, Debug, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Process exit status for an error.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    let is_usage = err.chain().any(|cause| {
        cause.is::<UsageError>()
            || cause.is::<toml::de::Error>()
            || cause.is::<data::DataError>()
            || matches!(cause.downcast_ref::<crowdcast::Error>(), Some(crowdcast::Error::Config { .. }))
    });
    if is_usage {
        2
    } else {
        1
    }
}

pub(crate) fn read_to_string(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Parses a simulation config file.
pub fn load_config(path: &Path) -> anyhow::Result<crowdcast::engine::SimConfig> {
    let text = read_to_string(path)?;
    let config: crowdcast::engine::SimConfig =
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    config.validate().with_context(|| format!("validating {}", path.display()))?;
    Ok(config)
}
