//! Command-line flags, the optional TOML config file, and their merge.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use olo_core::engine::DEFAULT_SEED;
use olo_core::{AdversaryPolicy, Benchmark, BenchmarkKind, StrategyKind};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "olo", version, about = "Minimax online linear optimization games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact game values and their asymptotes over one horizon or a range.
    Value(Flags),
    /// Play one game and write its transcript.
    Play(Flags),
    /// Check the closed forms against the enumeration and grid oracles.
    Verify(Flags),
    /// Run a bankroll-scaled symmetric betting session.
    Bet(Flags),
}

impl Command {
    pub fn flags(&self) -> &Flags {
        match self {
            Command::Value(f) | Command::Play(f) | Command::Verify(f) | Command::Bet(f) => f,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    Quad,
    Abs,
    Exp,
    ExpSym,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyArg {
    Gd,
    Hypercube,
    Betting,
    Symmetric,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryArg {
    Random,
    Greedy,
    Biased,
    Replay,
    Minimax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// Every flag is optional here so that config-file values can fill the gaps.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Flags {
    /// Benchmark family.
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Quadratic benchmark scale [default: 1].
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Exponential benchmark exponent in (0, 0.5] [default: 0.5].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Horizon, or a range `lo..hi[:step]` (inclusive) for `value`.
    #[arg(long)]
    pub t: Option<Horizon>,
    /// Player strategy [default: the minimax strategy for --kind].
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
    /// Gradient source [default: random].
    #[arg(long, value_enum)]
    pub adversary: Option<AdversaryArg>,
    /// Probability of +1 for the biased adversary [default: 0.5].
    #[arg(long)]
    pub p: Option<f64>,
    /// Replay file: one gradient in [-1, 1] per line.
    #[arg(long)]
    pub gradients: Option<PathBuf>,
    /// Number of independent coordinates [default: 1].
    #[arg(long)]
    pub dim: Option<usize>,
    /// RNG seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output format [default: csv].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat TOML file with the same keys as the long flags; flags win.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Starting bankroll for `bet` [default: 1].
    #[arg(long)]
    pub budget: Option<f64>,
    /// Largest horizon for `verify` [default: 10].
    #[arg(long)]
    pub max_t: Option<u32>,
    /// Also run the grid backward induction in `verify`.
    #[arg(long)]
    #[serde(default)]
    pub grid: bool,
}

/// A single horizon or an inclusive stepped range.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(try_from = "HorizonRepr")]
pub struct Horizon(pub Vec<u32>);

#[derive(Deserialize)]
#[serde(untagged)]
enum HorizonRepr {
    Number(u32),
    Text(String),
}

impl TryFrom<HorizonRepr> for Horizon {
    type Error = String;

    fn try_from(repr: HorizonRepr) -> Result<Self, String> {
        match repr {
            HorizonRepr::Number(t) => Ok(Horizon(vec![t])),
            HorizonRepr::Text(s) => s.parse(),
        }
    }
}

impl std::str::FromStr for Horizon {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |p: &str| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad horizon {p:?} in {s:?}"))
        };
        let Some((lo, rest)) = s.split_once("..") else {
            return Ok(Horizon(vec![num(s)?]));
        };
        let (hi, step) = match rest.split_once(':') {
            Some((hi, step)) => (num(hi)?, num(step)?),
            None => (num(rest)?, 1),
        };
        let lo = num(lo)?;
        if step == 0 {
            return Err("range step must be positive".into());
        }
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(Horizon((lo..=hi).step_by(step as usize).collect()))
    }
}

impl Flags {
    /// Fill unset flags from the config file named by `--config`, if any.
    pub fn with_config(self) -> Result<Self, CliError> {
        match &self.config {
            Some(path) => Ok(self.clone().or(read_config(path)?)),
            None => Ok(self),
        }
    }

    fn or(self, file: Flags) -> Flags {
        Flags {
            kind: self.kind.or(file.kind),
            sigma: self.sigma.or(file.sigma),
            alpha: self.alpha.or(file.alpha),
            t: self.t.or(file.t),
            strategy: self.strategy.or(file.strategy),
            adversary: self.adversary.or(file.adversary),
            p: self.p.or(file.p),
            gradients: self.gradients.or(file.gradients),
            dim: self.dim.or(file.dim),
            seed: self.seed.or(file.seed),
            format: self.format.or(file.format),
            out: self.out.or(file.out),
            config: self.config,
            budget: self.budget.or(file.budget),
            max_t: self.max_t.or(file.max_t),
            grid: self.grid || file.grid,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(0.5)
    }

    pub fn horizons(&self) -> Result<&[u32], CliError> {
        self.t
            .as_ref()
            .map(|h| h.0.as_slice())
            .ok_or_else(|| CliError::Usage("--t is required".into()))
    }

    pub fn single_horizon(&self) -> Result<u32, CliError> {
        match self.horizons()? {
            [t] => Ok(*t),
            _ => Err(CliError::Usage(
                "this command takes a single horizon, not a range".into(),
            )),
        }
    }

    pub fn benchmark_kind(&self) -> Result<BenchmarkKind, CliError> {
        let kind = self.kind.ok_or_else(|| CliError::Usage("--kind is required".into()))?;
        Ok(kind_for(kind, self.sigma.unwrap_or(1.0), self.alpha()))
    }

    pub fn strategy_for(&self, benchmark: &Benchmark) -> StrategyKind {
        match self.strategy {
            None => StrategyKind::minimax_for(benchmark),
            Some(StrategyArg::Gd) => StrategyKind::GradientDescent {
                sigma: self.sigma.unwrap_or(1.0),
            },
            Some(StrategyArg::Hypercube) => StrategyKind::Hypercube,
            Some(StrategyArg::Betting) => StrategyKind::Betting { alpha: self.alpha() },
            Some(StrategyArg::Symmetric) => StrategyKind::SymmetricBetting { alpha: self.alpha() },
            Some(StrategyArg::Generic) => StrategyKind::Generic(*benchmark),
        }
    }

    /// The adversary policy; `minimax` plays against `benchmark`.
    pub fn adversary_for(&self, benchmark: &Benchmark) -> Result<AdversaryPolicy, CliError> {
        Ok(match self.adversary.unwrap_or(AdversaryArg::Random) {
            AdversaryArg::Random => AdversaryPolicy::RademacherRandom,
            AdversaryArg::Greedy => AdversaryPolicy::Greedy,
            AdversaryArg::Biased => AdversaryPolicy::BiasedCoin {
                p: self.p.unwrap_or(0.5),
            },
            AdversaryArg::Replay => {
                let path = self
                    .gradients
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("--adversary replay needs --gradients".into()))?;
                let text =
                    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                let gradients = olo_core::adversaries::parse_replay(&text)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                AdversaryPolicy::Replay { gradients }
            }
            AdversaryArg::Minimax => AdversaryPolicy::Minimax { benchmark: *benchmark },
        })
    }
}

pub fn kind_for(kind: KindArg, sigma: f64, alpha: f64) -> BenchmarkKind {
    match kind {
        KindArg::Quad => BenchmarkKind::Quadratic { sigma },
        KindArg::Abs => BenchmarkKind::AbsoluteValue,
        KindArg::Exp => BenchmarkKind::ExpOneSided { alpha },
        KindArg::ExpSym => BenchmarkKind::ExpSymmetric { alpha },
    }
}

fn read_config(path: &Path) -> Result<Flags, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}
