//! Experiment settings and the config-file grammar.
//!
//! A config file holds one `key = value` per line. `#` starts a comment, blank lines are
//! ignored, and keys are the long flag names of the subcommand (`_` and `-` are
//! interchangeable). Lists are comma separated. Flags given on the command line win over
//! the file.
//!
//! ```text
//! # Accuracy sweep
//! mechanisms = objdisc,rspm
//! n = 200
//! d = 4
//! epsilons = 0.5,1,2,4,8
//! delta = 1/n^2
//! reps = 15
//! ```

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parses the config grammar into `(key, value)` pairs, keys normalized to `-`.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
            return Err(Error::Config(format!("line {}: bad key `{key}`", i + 1)));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MechanismKind {
    Objdisc,
    Objsamp,
    Rspm,
}

impl MechanismKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MechanismKind::Objdisc => "objdisc",
            MechanismKind::Objsamp => "objsamp",
            MechanismKind::Rspm => "rspm",
        }
    }

    pub(crate) fn stream_key(self) -> u64 {
        match self {
            MechanismKind::Objdisc => 1,
            MechanismKind::Objsamp => 2,
            MechanismKind::Rspm => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    Exhaustive,
    Bnb,
}

/// `1/n^2` (also written `1/n2`) or a fixed value in `(0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaRule {
    InverseSquare,
    Fixed(f64),
}

impl DeltaRule {
    pub fn resolve(self, n: usize) -> f64 {
        match self {
            DeltaRule::InverseSquare => 1.0 / (n as f64 * n as f64),
            DeltaRule::Fixed(v) => v,
        }
    }
}

impl FromStr for DeltaRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.replace(' ', "").as_str() {
            "1/n^2" | "1/n2" | "1/n²" => Ok(DeltaRule::InverseSquare),
            other => match other.parse::<f64>() {
                Ok(v) if v > 0.0 && v < 1.0 => Ok(DeltaRule::Fixed(v)),
                _ => Err(format!("`{s}` is neither 1/n^2 nor a number in (0, 1)")),
            },
        }
    }
}

/// Settings of `run`. Defaults give the desk-scale accuracy-versus-ε sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct ExperimentConfig {
    /// Mechanisms to run, one result series each.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "objdisc,rspm")]
    pub mechanisms: Vec<MechanismKind>,

    /// CSV to ingest instead of generating data.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, default_value = "y")]
    pub label: String,
    #[arg(long, default_value = "1")]
    pub positive: String,
    #[arg(long, value_delimiter = ',')]
    pub categorical: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub numeric: Vec<String>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true", default_value = "false", action = clap::ArgAction::Set)]
    pub balance: bool,

    /// Synthetic data size.
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub d: usize,
    #[arg(long, default_value_t = 0.0)]
    pub margin: f64,
    #[arg(long, default_value_t = 0.05)]
    pub noise: f64,

    /// Grid step.
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    /// Coordinate bound of the ObjDisc grid; default ⌊√d⌋.
    #[arg(long)]
    pub coord_bound: Option<f64>,
    /// ℓ2 radius of the ObjDisc grid; default √d.
    #[arg(long)]
    pub radius: Option<f64>,

    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,4,8")]
    pub epsilons: Vec<f64>,
    #[arg(long, default_value = "1/n^2")]
    pub delta: DeltaRule,
    #[arg(long, default_value_t = 15)]
    pub reps: usize,

    #[arg(long, value_enum, default_value = "exhaustive")]
    pub oracle: OracleKind,
    /// Node budget of the branch-and-bound oracle.
    #[arg(long, default_value_t = crate::oracles::DEFAULT_NODE_BUDGET)]
    pub node_budget: u64,

    /// Output directory.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    /// Record wall-clock time per run. Timed outputs are not reproducible.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", default_value = "false", action = clap::ArgAction::Set)]
    pub timing: bool,
    /// Keep going when an oracle answer is not certified or a separator fails to verify.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", default_value = "false", action = clap::ArgAction::Set)]
    pub force: bool,

    /// ObjSamp confidence.
    #[arg(long, default_value_t = 0.05)]
    pub beta: f64,
    /// ObjSamp oracle slack.
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,

    #[arg(skip)]
    pub seed: u64,
}

#[derive(Parser)]
struct Standalone {
    #[command(flatten)]
    config: ExperimentConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Standalone::parse_from(["run"]).config
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mechanisms.is_empty() {
            return Err(Error::Config("no mechanisms".into()));
        }
        if self.reps == 0 {
            return Err(Error::Config("reps must be at least 1".into()));
        }
        if self.epsilons.is_empty() || self.epsilons.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
            return Err(Error::Config("epsilons must be positive".into()));
        }
        if self.epsilons.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("epsilons must be strictly increasing".into()));
        }
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return Err(Error::Config("tau must lie in (0, 1]".into()));
        }
        Ok(())
    }

    /// Reads a config file over the defaults.
    pub fn from_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut argv = vec!["run".to_string()];
        let mut seed = None;
        for (k, v) in parse_config(&text)? {
            if k == "seed" {
                seed = Some(v.parse::<u64>().map_err(|_| Error::Config(format!("bad seed `{v}`")))?);
                continue;
            }
            argv.push(format!("--{k}={v}"));
        }
        let mut cfg = Standalone::try_parse_from(argv).map_err(|e| Error::Config(e.to_string()))?.config;
        cfg.seed = seed.unwrap_or(0);
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar() {
        let pairs = parse_config("# c\n\nreps = 3  # inline\nnode_budget=10\n").unwrap();
        assert_eq!(pairs, vec![("reps".into(), "3".into()), ("node-budget".into(), "10".into())]);
        assert!(parse_config("reps 3").is_err());
        assert!(parse_config("= 3").is_err());
    }

    #[test]
    fn defaults() {
        let c = ExperimentConfig::default();
        assert_eq!(c.mechanisms, vec![MechanismKind::Objdisc, MechanismKind::Rspm]);
        assert_eq!(c.epsilons, vec![0.5, 1.0, 2.0, 4.0, 8.0]);
        assert_eq!(c.delta, DeltaRule::InverseSquare);
        assert_eq!(c.delta.resolve(200), 2.5e-5);
        assert!(!c.timing);
        c.validate().unwrap();
    }

    #[test]
    fn file_over_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.cfg");
        std::fs::write(&p, "epsilons = 1,2\nreps = 3\nseed = 9\ntiming = true\ndelta = 0.01\n").unwrap();
        let c = ExperimentConfig::from_file(&p).unwrap();
        assert_eq!((c.reps, c.seed, c.timing), (3, 9, true));
        assert_eq!(c.delta, DeltaRule::Fixed(0.01));
        let mut bad = c.clone();
        bad.epsilons = vec![2.0, 1.0];
        assert!(bad.validate().is_err());
    }
}
