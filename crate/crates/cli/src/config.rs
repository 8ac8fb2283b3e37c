//! Flat `key = value` configuration files. Blank lines and lines starting
//! with `#` are ignored; keys use underscores (`cache_dir`) or dashes.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use satotate_core::harness::parse_count;

use crate::OutputFormat;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub limit: Option<u64>,
    pub seed: Option<u64>,
    pub curve: Option<(i64, i64)>,
    pub epsilon: Option<f64>,
    pub gammas: Option<Vec<f64>>,
    pub checkpoints: Option<String>,
    pub a: Option<f64>,
    pub threads: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

pub fn parse_limit(s: &str) -> Result<u64> {
    match parse_count(s) {
        Some(n) if n >= 1 => Ok(n),
        _ => bail!("`{s}` is not a positive count"),
    }
}

pub fn parse_curve(s: &str) -> Result<(i64, i64)> {
    let (a, b) = s
        .split_once(',')
        .with_context(|| format!("curve `{s}` should be `A,B`"))?;
    let a = a
        .trim()
        .parse()
        .with_context(|| format!("bad A in `{s}`"))?;
    let b = b
        .trim()
        .parse()
        .with_context(|| format!("bad B in `{s}`"))?;
    Ok((a, b))
}

pub fn parse_epsilon(s: &str) -> Result<f64> {
    let e: f64 = s
        .trim()
        .parse()
        .with_context(|| format!("bad epsilon `{s}`"))?;
    if !(e > 0.0 && e <= 0.5) {
        bail!("epsilon must lie in (0, 1/2], got {e}");
    }
    Ok(e)
}

pub fn parse_gammas(s: &str) -> Result<Vec<f64>> {
    let gs = s
        .split(',')
        .map(|g| {
            g.trim()
                .parse::<f64>()
                .with_context(|| format!("bad gamma `{g}`"))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(g) = gs.iter().find(|&&g| !(g > 0.0 && g <= 2.0)) {
        bail!("gamma must lie in (0, 2], got {g}");
    }
    Ok(gs)
}

pub fn parse_a(s: &str) -> Result<f64> {
    let a: f64 = s.trim().parse().with_context(|| format!("bad A `{s}`"))?;
    if !(a > 1.0 && a.is_finite()) {
        bail!("A must exceed 1, got {a}");
    }
    Ok(a)
}

pub fn parse_threads(s: &str) -> Result<usize> {
    match s.trim().parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => bail!("threads must be a positive integer, got `{s}`"),
    }
}

pub fn parse_checkpoints(s: &str) -> Result<String> {
    for part in s.split(',') {
        parse_limit(part.trim())?;
    }
    Ok(s.to_string())
}

/// A pair `lo,hi` for bands such as `--mu-band target,tol`.
pub fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s
        .split_once(',')
        .with_context(|| format!("`{s}` should be two numbers"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("line {}: expected key = value", i + 1))?;
            let value = value.trim();
            let ctx = || format!("line {}", i + 1);
            match key.trim().to_ascii_lowercase().replace('-', "_").as_str() {
                "limit" => cfg.limit = Some(parse_limit(value).with_context(ctx)?),
                "seed" => cfg.seed = Some(value.parse().with_context(ctx)?),
                "curve" => cfg.curve = Some(parse_curve(value).with_context(ctx)?),
                "epsilon" => cfg.epsilon = Some(parse_epsilon(value).with_context(ctx)?),
                "gammas" | "gamma" => cfg.gammas = Some(parse_gammas(value).with_context(ctx)?),
                "checkpoints" => {
                    cfg.checkpoints = Some(parse_checkpoints(value).with_context(ctx)?)
                }
                "a" => cfg.a = Some(parse_a(value).with_context(ctx)?),
                "threads" => cfg.threads = Some(parse_threads(value).with_context(ctx)?),
                "cache_dir" => cfg.cache_dir = Some(PathBuf::from(value)),
                "format" => {
                    cfg.format = Some(
                        value
                            .parse()
                            .map_err(anyhow::Error::msg)
                            .with_context(ctx)?,
                    )
                }
                other => bail!("line {}: unknown key `{other}`", i + 1),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }
}
