use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;

use crate::args::Resolved;

/// First line of every output: tool version plus the fully resolved
/// parameters, so any result can be reproduced from the file alone.
pub fn header(resolved: &Resolved) -> String {
    let config = serde_json::to_string(resolved).expect("resolved config serializes");
    format!("# ptlattice {} | {config}\n", pt_lattice::VERSION)
}

/// Uniform numeric cell format: 12 significant digits, exponent notation.
pub fn cell(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn write_output(out: Option<&PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        None => {
            std::io::stdout()
                .write_all(content.as_bytes())
                .context("writing to stdout")?;
        }
        Some(path) if path == Path::new("-") => {
            std::io::stdout()
                .write_all(content.as_bytes())
                .context("writing to stdout")?;
        }
        Some(path) => {
            std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}
