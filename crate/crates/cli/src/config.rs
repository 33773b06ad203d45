//! Experiment configuration: defaults, flat `key=value` files and flag overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

/// Inputs shared by every experiment. `None` fields take the experiment's own default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub id: String,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub h0: f64,
    pub ratio: f64,
    pub count: usize,
    pub samples: Option<usize>,
    pub seed: u64,
    pub cutoff: Option<usize>,
    pub strict: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            id: String::new(),
            n: None,
            h0: 0.01,
            ratio: 0.5,
            count: 13,
            samples: None,
            seed: 0,
            cutoff: None,
            strict: false,
            out: None,
        }
    }
}

/// Values read from a file or the command line, all optional.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub n: Option<usize>,
    pub h0: Option<f64>,
    pub ratio: Option<f64>,
    pub count: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub cutoff: Option<usize>,
    pub strict: Option<bool>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

impl Overrides {
    /// `other` wins wherever it is set.
    pub fn merge(self, other: Overrides) -> Overrides {
        Overrides {
            n: other.n.or(self.n),
            h0: other.h0.or(self.h0),
            ratio: other.ratio.or(self.ratio),
            count: other.count.or(self.count),
            samples: other.samples.or(self.samples),
            seed: other.seed.or(self.seed),
            cutoff: other.cutoff.or(self.cutoff),
            strict: other.strict.or(self.strict),
            out: other.out.or(self.out),
            jobs: other.jobs.or(self.jobs),
        }
    }

    pub fn apply(&self, id: &str) -> anyhow::Result<ExperimentConfig> {
        let d = ExperimentConfig::default();
        let cfg = ExperimentConfig {
            id: id.to_string(),
            n: self.n.or(d.n),
            h0: self.h0.unwrap_or(d.h0),
            ratio: self.ratio.unwrap_or(d.ratio),
            count: self.count.unwrap_or(d.count),
            samples: self.samples.or(d.samples),
            seed: self.seed.unwrap_or(d.seed),
            cutoff: self.cutoff.or(d.cutoff),
            strict: self.strict.unwrap_or(d.strict),
            out: self.out.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        if !(self.h0 > 0.0) || !self.h0.is_finite() {
            bail!("h0 must be positive, got {}", self.h0);
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            bail!("ratio must lie in (0, 1), got {}", self.ratio);
        }
        if self.count < 3 {
            bail!("count must be at least 3, got {}", self.count);
        }
        if self.n == Some(0) {
            bail!("N must be positive");
        }
        Ok(())
    }

    pub fn h_grid(&self) -> Vec<f64> {
        (0..self.count).map(|m| self.h0 * self.ratio.powi(m as i32)).collect()
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> anyhow::Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| anyhow::anyhow!("bad value {value:?} for {key}: {e}"))
}

/// Parses `key=value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config(text: &str) -> anyhow::Result<Overrides> {
    let mut seen = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {}: expected key=value, got {raw:?}", lineno + 1);
        };
        let key = key.trim().trim_start_matches("--").to_string();
        if seen.insert(key.clone(), value.trim().to_string()).is_some() {
            bail!("line {}: duplicate key {key}", lineno + 1);
        }
    }
    let mut o = Overrides::default();
    for (key, value) in &seen {
        match key.as_str() {
            "N" | "n" => o.n = Some(parse_value(key, value)?),
            "h0" => o.h0 = Some(parse_value(key, value)?),
            "ratio" => o.ratio = Some(parse_value(key, value)?),
            "count" => o.count = Some(parse_value(key, value)?),
            "samples" => o.samples = Some(parse_value(key, value)?),
            "seed" => o.seed = Some(parse_value(key, value)?),
            "cutoff" => o.cutoff = Some(parse_value(key, value)?),
            "strict" => o.strict = Some(parse_value(key, value)?),
            "out" => o.out = Some(PathBuf::from(value)),
            "jobs" => o.jobs = Some(parse_value(key, value)?),
            other => bail!("unknown config key {other:?}"),
        }
    }
    Ok(o)
}

pub fn read_config(path: &Path) -> anyhow::Result<Overrides> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text).with_context(|| format!("parsing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let file = parse_config("# sweep\nN = 3\nh0=0.02\nstrict=true\n").unwrap();
        let flags = Overrides {
            h0: Some(0.05),
            ..Default::default()
        };
        let cfg = file.merge(flags).apply("thm-4-1").unwrap();
        assert_eq!(cfg.n, Some(3));
        assert_eq!(cfg.h0, 0.05);
        assert!(cfg.strict);
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.h_grid().len(), 13);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_config("N 3").is_err());
        assert!(parse_config("colour=red").is_err());
        assert!(parse_config("N=2\nN=3").is_err());
        assert!(Overrides {
            ratio: Some(1.5),
            ..Default::default()
        }
        .apply("x")
        .is_err());
        assert!(Overrides {
            count: Some(2),
            ..Default::default()
        }
        .apply("x")
        .is_err());
        assert!(Overrides {
            h0: Some(-1.0),
            ..Default::default()
        }
        .apply("x")
        .is_err());
    }
}
