mod cloud;
mod curve;
mod flags;
mod frame;
mod tangents;

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::cli::{Cli, Command, CurveCommand, FlagsCommand, FrameCommand};
use crate::config::RunConfig;

/// Runs one subcommand and returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32> {
    let file = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let cfg = file.merged(cli.tuning.to_config());
    cfg.validate()?;
    match &cli.command {
        Command::Curve(CurveCommand::Sample(args)) => curve::sample(args),
        Command::Frame(FrameCommand::Estimate(args)) => frame::estimate(args, &cfg),
        Command::Tangents(args) => tangents::run(args, &cfg),
        Command::Flags(FlagsCommand::Intersect(args)) => flags::intersect(args, &cfg, cli.seed),
        Command::Cloud(args) => cloud::run(args, cli.seed),
    }
}

pub(crate) fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Pretty JSON with a trailing newline, to `path` or stdout.
pub(crate) fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

pub(crate) fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
            log::info!("wrote {}", p.display());
        }
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// `dir/stem.ext` -> `dir/stem.tag.ext`.
pub(crate) fn tagged(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{tag}"),
    };
    path.with_file_name(name)
}

/// `"1,2;3,4"` -> `[[1, 2], [3, 4]]`.
pub(crate) fn parse_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|c| c.trim().parse::<f64>().with_context(|| format!("bad number {c:?}")))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tagged_paths() {
        assert_eq!(tagged(Path::new("out/a.csv"), "level2"), PathBuf::from("out/a.level2.csv"));
        assert_eq!(tagged(Path::new("a"), "x"), PathBuf::from("a.x"));
    }

    #[test]
    fn rows() {
        assert_eq!(parse_rows("0, 1;-2,3.5").unwrap(), vec![vec![0.0, 1.0], vec![-2.0, 3.5]]);
        assert!(parse_rows("1,x").is_err());
    }
}
