//! Run configuration shared by the command-line front end.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, HyperError, Result};
use crate::kernels::HyperbolicLaplacianStencil;
use crate::potentials::{QuadratureSettings, DEFAULT_ESCALATION};
use crate::quadrature::{DEFAULT_BOUNDARY_MARGIN, DEFAULT_RADIAL_ORDER, DEFAULT_SPHERE_ORDER};

/// Largest supported dimension.
pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = HyperError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(invalid(format!("unknown output format `{other}` (csv or json)"))),
        }
    }
}

/// Settings for one CLI run; stored on disk as TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    pub sphere_order: usize,
    pub radial_order: usize,
    pub margin: f64,
    pub fd_step: f64,
    pub seed: u64,
    pub format: OutputFormat,
    /// Standard output when absent.
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 3,
            sphere_order: DEFAULT_SPHERE_ORDER,
            radial_order: DEFAULT_RADIAL_ORDER,
            margin: DEFAULT_BOUNDARY_MARGIN,
            fd_step: 1e-4,
            seed: 0,
            format: OutputFormat::Csv,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_DIM).contains(&self.n) {
            return Err(invalid(format!("dimension {} outside [2, {MAX_DIM}]", self.n)));
        }
        self.quadrature().validate()?;
        HyperbolicLaplacianStencil::new(self.fd_step)?;
        Ok(())
    }

    pub fn quadrature(&self) -> QuadratureSettings {
        QuadratureSettings {
            sphere_order: self.sphere_order,
            radial_order: self.radial_order,
            margin: self.margin,
            escalation: DEFAULT_ESCALATION,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| HyperError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// TOML integers are signed, so seeds above `i64::MAX` cannot be written.
    pub fn to_toml_string(&self) -> Result<String> {
        if i64::try_from(self.seed).is_err() {
            return Err(invalid(format!("seed {} does not fit a TOML integer", self.seed)));
        }
        toml::to_string(self).map_err(|e| HyperError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml_string()?)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn toml_round_trip() {
        let cfg = RunConfig {
            n: 4,
            margin: 0.1 + 0.2,
            fd_step: 1.0 / 3.0 * 1e-3,
            seed: u64::from(u32::MAX) + 7,
            format: OutputFormat::Json,
            out: Some("grid.json".into()),
            ..Default::default()
        };
        let text = cfg.to_toml_string().unwrap();
        assert_eq!(RunConfig::from_toml_str(&text).unwrap(), cfg);
    }

    #[test]
    fn partial_file_uses_defaults() {
        let cfg = RunConfig::from_toml_str("n = 5\nformat = \"json\"\n").unwrap();
        assert_eq!(cfg.n, 5);
        assert_eq!(cfg.format, OutputFormat::Json);
        assert_eq!(cfg.sphere_order, DEFAULT_SPHERE_ORDER);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::from_toml_str("n = 1").is_err());
        assert!(RunConfig::from_toml_str("margin = 0.7").is_err());
        assert!(RunConfig::from_toml_str("fd_step = 1.0").is_err());
        assert!(RunConfig::from_toml_str("colour = 3").is_err());
        assert!(RunConfig::from_toml_str("format = \"xml\"").is_err());
        assert!("yaml".parse::<OutputFormat>().is_err());
        assert_eq!("JSON".parse::<OutputFormat>().unwrap(), OutputFormat::Json);
    }

    #[test]
    fn save_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        let cfg = RunConfig { seed: 42, ..Default::default() };
        cfg.save(&path).unwrap();
        assert_eq!(RunConfig::load(&path).unwrap(), cfg);
    }
}
