//! Study configuration: defaults, TOML/JSON files and validation.
//!
//! Precedence is flags > file > defaults. The file is `--config` if given,
//! otherwise the path in `DARBOUX_CONFIG`, otherwise none.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const CONFIG_ENV: &str = "DARBOUX_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyConfig {
    pub seed: u64,
    pub nu: f64,
    pub gamma: f64,
    /// Truncation orders `K` of the Lie series.
    pub k_values: Vec<u32>,
    /// Cap `L` on the field degree (`2L + 1`); `None` runs only uncapped rows.
    pub cap_l: Option<usize>,
    /// Radii of the truncation study, strictly decreasing.
    pub rho_grid: Vec<f64>,
    /// Sites used when sampling the transformed `P`.
    pub residual_sites: usize,
    /// Random directions per radius.
    pub directions: usize,
    pub slope_tolerance: f64,
    /// Radii of the closeness study, strictly decreasing.
    pub closeness_rho_grid: Vec<f64>,
    pub sites: usize,
    /// Coupling for the Salerno comparisons; `None` uses `ε = ρ²`.
    pub salerno_eps: Option<f64>,
    /// Coupling for the Ablowitz–Ladik comparison (`γ = 0`).
    pub al_eps: f64,
    pub tol: f64,
    pub samples: usize,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            seed: 1,
            nu: 0.5,
            gamma: 1.0,
            k_values: (1..=6).collect(),
            cap_l: Some(4),
            rho_grid: vec![0.2, 0.1, 0.05, 0.025],
            residual_sites: 4,
            directions: 8,
            slope_tolerance: 0.15,
            closeness_rho_grid: vec![0.2, 0.1, 0.05],
            sites: 8,
            salerno_eps: None,
            al_eps: 0.5,
            tol: 1e-12,
            samples: 200,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid TOML in {path}: {source}")]
    Toml { path: PathBuf, source: toml::de::Error },
    #[error("invalid JSON in {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("config {0} must end in .toml or .json")]
    UnknownFormat(PathBuf),
    #[error("{name} must be strictly decreasing with at least 3 positive entries, got {values:?}")]
    RhoGrid { name: &'static str, values: Vec<f64> },
    #[error("{name} = {value} is out of range ({expected})")]
    OutOfRange { name: &'static str, value: String, expected: &'static str },
}

fn out_of_range(name: &'static str, value: impl ToString, expected: &'static str) -> ConfigError {
    ConfigError::OutOfRange { name, value: value.to_string(), expected }
}

fn check_grid(name: &'static str, grid: &[f64]) -> Result<(), ConfigError> {
    let ok = grid.len() >= 3
        && grid.iter().all(|r| r.is_finite() && *r > 0.0)
        && grid.windows(2).all(|w| w[1] < w[0]);
    if ok {
        Ok(())
    } else {
        Err(ConfigError::RhoGrid { name, values: grid.to_vec() })
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        check_grid("rho_grid", &self.rho_grid)?;
        check_grid("closeness_rho_grid", &self.closeness_rho_grid)?;
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(out_of_range("nu", self.nu, "positive"));
        }
        if !self.gamma.is_finite() {
            return Err(out_of_range("gamma", self.gamma, "finite"));
        }
        // the budget domain needs ν·ρ² < 1 at the largest radius
        if self.nu * self.rho_grid[0] * self.rho_grid[0] >= 0.5 {
            return Err(out_of_range("rho_grid[0]", self.rho_grid[0], "nu*rho^2 < 1/2"));
        }
        if self.k_values.iter().any(|k| *k > 8) {
            return Err(out_of_range("k_values", format!("{:?}", self.k_values), "each in 0..=8"));
        }
        if let Some(l) = self.cap_l {
            if !(1..=12).contains(&l) {
                return Err(out_of_range("cap_l", l, "1..=12"));
            }
        }
        if self.residual_sites == 0 || self.directions == 0 {
            return Err(out_of_range("residual_sites/directions", self.directions, "positive"));
        }
        if self.sites < 3 {
            return Err(out_of_range("sites", self.sites, ">= 3"));
        }
        if !(self.slope_tolerance > 0.0) {
            return Err(out_of_range("slope_tolerance", self.slope_tolerance, "positive"));
        }
        if let Some(e) = self.salerno_eps {
            if !(e >= 0.0 && e.is_finite()) {
                return Err(out_of_range("salerno_eps", e, "non-negative"));
            }
        }
        if !(self.al_eps > 0.0 && self.al_eps.is_finite()) {
            return Err(out_of_range("al_eps", self.al_eps, "positive"));
        }
        if !(1e-13..=1e-6).contains(&self.tol) {
            return Err(out_of_range("tol", self.tol, "1e-13..=1e-6"));
        }
        if self.samples == 0 {
            return Err(out_of_range("samples", self.samples, "positive"));
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => toml::from_str(&text).map_err(|source| ConfigError::Toml { path: path.into(), source }),
            Some("json") => {
                serde_json::from_str(&text).map_err(|source| ConfigError::Json { path: path.into(), source })
            }
            _ => Err(ConfigError::UnknownFormat(path.into())),
        }
    }

    /// Defaults overlaid with the explicit file, or the one named by
    /// [`CONFIG_ENV`].
    pub fn resolve(explicit: Option<&Path>) -> Result<Self, ConfigError> {
        let from_env = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
        match explicit.map(Path::to_path_buf).or(from_env) {
            Some(p) => StudyConfig::load(&p),
            None => Ok(StudyConfig::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        StudyConfig::default().validate().unwrap();
    }

    #[test]
    fn grid_rules() {
        let mut c = StudyConfig::default();
        c.rho_grid = vec![0.2, 0.1];
        assert!(matches!(c.validate(), Err(ConfigError::RhoGrid { .. })));
        c.rho_grid = vec![0.1, 0.2, 0.05];
        assert!(matches!(c.validate(), Err(ConfigError::RhoGrid { .. })));
    }

    #[test]
    fn partial_toml_keeps_defaults() {
        let c: StudyConfig = toml::from_str("nu = 0.25\nk_values = [1, 2]").unwrap();
        assert_eq!(c.nu, 0.25);
        assert_eq!(c.k_values, vec![1, 2]);
        assert_eq!(c.rho_grid, StudyConfig::default().rho_grid);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<StudyConfig>("nuu = 0.25").is_err());
    }
}
