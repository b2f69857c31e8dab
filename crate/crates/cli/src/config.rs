//! Run configuration: command-line flags over a TOML file over defaults.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use hrg::ModelParams;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorChoice {
    Naive,
    #[default]
    Accelerated,
    /// Rank-one comparison graph with matching expected degrees (cold regime).
    ChungLu,
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file, then to the defaults.
#[derive(Args, Debug, Clone, Default)]
pub struct Overrides {
    /// TOML file with any of the keys below (snake_case).
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Number of vertices.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub zeta: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Inverse temperature.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Threshold model: connect iff d < R.
    #[arg(long)]
    pub disc: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Position stream; lets one seed drive several independent samples.
    #[arg(long)]
    pub stream: Option<u64>,
    #[arg(long, value_enum)]
    pub generator: Option<GeneratorChoice>,
    /// Output directory; JSON goes to stdout when unset.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Smallest degree in the tail fit.
    #[arg(long)]
    pub k_min: Option<usize>,
    /// Largest degree compared with the mixed-Poisson law.
    #[arg(long)]
    pub k_cap: Option<usize>,
    /// Vertex counts for the scaling experiment, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n_grid: Option<Vec<usize>>,
    #[arg(long)]
    pub replicates: Option<usize>,
    /// Slack ω in the type cutoff; defaults to max(1, ln ln N).
    #[arg(long)]
    pub omega: Option<f64>,
    /// Vertices whose degrees are correlated in the independence check.
    #[arg(long)]
    pub m: Option<usize>,
    /// Graphs in the independence check.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub zeta: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub disc: Option<bool>,
    pub seed: Option<u64>,
    pub stream: Option<u64>,
    pub generator: Option<GeneratorChoice>,
    pub out: Option<PathBuf>,
    pub k_min: Option<usize>,
    pub k_cap: Option<usize>,
    pub n_grid: Option<Vec<usize>>,
    pub replicates: Option<usize>,
    pub omega: Option<f64>,
    pub m: Option<usize>,
    pub samples: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub params: ModelParams,
    pub seed: u64,
    pub stream: u64,
    pub generator: GeneratorChoice,
    pub out: Option<PathBuf>,
    pub k_min: usize,
    pub k_cap: usize,
    pub n_grid: Vec<usize>,
    pub replicates: usize,
    pub omega: Option<f64>,
    pub m: usize,
    /// `None` unless requested; the independence check is opt-in.
    pub samples: Option<usize>,
}

impl RunConfig {
    pub fn resolve(cli: &Overrides) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        Self::merge(cli, file)
    }

    pub fn merge(cli: &Overrides, file: FileConfig) -> Result<Self, CliError> {
        let n = cli.n.or(file.n).unwrap_or(10_000);
        let zeta = cli.zeta.or(file.zeta).unwrap_or(1.0);
        let alpha = cli.alpha.or(file.alpha).unwrap_or(1.0);
        let beta = cli.beta.or(file.beta).unwrap_or(2.0);
        let disc = cli.disc || file.disc.unwrap_or(false);
        let params = ModelParams::new(n, zeta, alpha, beta)?.with_disc(disc);

        let omega = cli.omega.or(file.omega);
        if let Some(w) = omega {
            if !(w.is_finite() && w >= 0.0) {
                return Err(CliError::Usage(format!("omega must be a non-negative number, got {w}")));
            }
        }
        let replicates = cli.replicates.or(file.replicates).unwrap_or(5);
        if replicates == 0 {
            return Err(CliError::Usage("replicates must be positive".into()));
        }
        Ok(Self {
            params,
            seed: cli.seed.or(file.seed).unwrap_or(0),
            stream: cli.stream.or(file.stream).unwrap_or(0),
            generator: cli.generator.or(file.generator).unwrap_or_default(),
            out: cli.out.clone().or(file.out),
            k_min: cli.k_min.or(file.k_min).unwrap_or(10),
            k_cap: cli.k_cap.or(file.k_cap).unwrap_or(30),
            n_grid: cli
                .n_grid
                .clone()
                .or(file.n_grid)
                .unwrap_or_else(|| (10..=16).step_by(2).map(|e| 1usize << e).collect()),
            replicates,
            omega,
            m: cli.m.or(file.m).unwrap_or(2),
            samples: cli.samples.or(file.samples),
        })
    }
}
