//! Run configuration: baked-in defaults, an optional TOML file, then flags.

use std::path::Path;

use clap::ValueEnum;
use engel_geodesics::cutlocus::{ClassifyOptions, EPS_STRAT};
use engel_geodesics::expmap::EPS_CLASS;
use engel_geodesics::selftest::SelftestOptions;
use engel_geodesics::synthesis::{
    SynthesisOptions, DEFAULT_FAMILY_SAMPLES, DEFAULT_MAX_STARTS, DEFAULT_TOL,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable naming a config file, read when `--config` is absent.
pub const CONFIG_ENV: &str = "ENGEL_CONFIG";

/// Tabular output (trajectories, curves) as CSV or JSON. Scalar answers are
/// one plain line under `csv`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Covector class boundaries E = ±|α| and α = 0.
    pub eps_class: f64,
    /// Relative distance to a boundary curve counted as membership.
    pub eps_strat: f64,
    /// Coordinates at or below this, at unit homogeneous norm, count as zero.
    pub eps_zero: f64,
    /// Endpoint tolerance of the synthesis, at unit homogeneous norm.
    pub tol: f64,
    pub format: Format,
    pub geodesic_samples: usize,
    pub family_samples: usize,
    pub curve_grid: usize,
    pub max_starts: usize,
    /// Seed of the selftest's random draws.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        let st = SelftestOptions::default();
        Config {
            eps_class: EPS_CLASS,
            eps_strat: EPS_STRAT,
            eps_zero: EPS_STRAT,
            tol: DEFAULT_TOL,
            format: Format::Csv,
            geodesic_samples: 201,
            family_samples: DEFAULT_FAMILY_SAMPLES,
            curve_grid: 200,
            max_starts: DEFAULT_MAX_STARTS,
            seed: st.seed,
        }
    }
}

impl Config {
    /// The file at `path`, with absent keys at their defaults.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let tolerances = [
            ("eps_class", self.eps_class),
            ("eps_strat", self.eps_strat),
            ("eps_zero", self.eps_zero),
            ("tol", self.tol),
        ];
        for (name, v) in tolerances {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Usage(format!("{name} must be positive, got {v}")));
            }
        }
        let counts = [
            ("geodesic_samples", self.geodesic_samples),
            ("family_samples", self.family_samples),
            ("curve_grid", self.curve_grid),
            ("max_starts", self.max_starts),
        ];
        for (name, n) in counts {
            if n < 2 {
                return Err(CliError::Usage(format!(
                    "{name} must be at least 2, got {n}"
                )));
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat config serializes")
    }

    pub fn classify_options(&self) -> ClassifyOptions {
        ClassifyOptions {
            eps_zero: self.eps_zero,
            eps_strat: self.eps_strat,
        }
    }

    pub fn synthesis_options(&self) -> SynthesisOptions {
        SynthesisOptions {
            tol: self.tol,
            family_samples: self.family_samples,
            classify: self.classify_options(),
            max_starts: self.max_starts,
        }
    }

    pub fn selftest_options(&self) -> SelftestOptions {
        SelftestOptions {
            seed: self.seed,
            synthesis: self.synthesis_options(),
            ..SelftestOptions::default()
        }
    }
}
