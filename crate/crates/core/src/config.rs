use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::decompose::Neighborhoods;
use crate::immanant::DEFAULT_MAX_NODES;
use crate::linedraw::DrawingOptions;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("radius must be at least 1")]
    Radius,
    #[error("size window [{min}, {max}] is invalid; need 2 <= min <= max")]
    Window { min: usize, max: usize },
    #[error("max_nodes {max} exceeds the signature size limit {limit}")]
    WindowAboveLimit { max: usize, limit: usize },
    #[error("collinearity tolerance {0} deg must lie in (0, 45)")]
    Collinear(f64),
    #[error("unknown catalogue mode '{0}' (expected weighted or binary)")]
    Mode(String),
}

/// Whether edge weights carry appearance labels or are flattened to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CatalogueMode {
    #[default]
    Weighted,
    Binary,
}

impl fmt::Display for CatalogueMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CatalogueMode::Weighted => "weighted",
            CatalogueMode::Binary => "binary",
        })
    }
}

impl FromStr for CatalogueMode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "weighted" => Ok(CatalogueMode::Weighted),
            "binary" => Ok(CatalogueMode::Binary),
            other => Err(ConfigError::Mode(other.to_string())),
        }
    }
}

/// Parameters shared by database construction, scene parsing and recognition.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Neighborhood radius in edges.
    pub radius: usize,
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub collinear_deg: f64,
    pub mode: CatalogueMode,
    /// Largest graph a signature is computed for.
    pub signature_limit: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            radius: 2,
            min_nodes: 5,
            max_nodes: 10,
            collinear_deg: 10.0,
            mode: CatalogueMode::Weighted,
            signature_limit: DEFAULT_MAX_NODES,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.radius < 1 {
            return Err(ConfigError::Radius);
        }
        if self.min_nodes < 2 || self.min_nodes > self.max_nodes {
            return Err(ConfigError::Window { min: self.min_nodes, max: self.max_nodes });
        }
        if self.max_nodes > self.signature_limit {
            return Err(ConfigError::WindowAboveLimit { max: self.max_nodes, limit: self.signature_limit });
        }
        if !(self.collinear_deg > 0.0 && self.collinear_deg < 45.0) {
            return Err(ConfigError::Collinear(self.collinear_deg));
        }
        Ok(())
    }

    pub fn neighborhoods(&self) -> Neighborhoods {
        Neighborhoods { radius: self.radius, min_nodes: self.min_nodes, max_nodes: self.max_nodes }
    }

    pub fn drawing_options(&self) -> DrawingOptions {
        DrawingOptions { collinear_deg: self.collinear_deg, ..DrawingOptions::default() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        assert_eq!(RunConfig::default().validate(), Ok(()));
    }

    #[test]
    fn rejects_bad_values() {
        let base = RunConfig::default();
        assert_eq!(RunConfig { radius: 0, ..base.clone() }.validate(), Err(ConfigError::Radius));
        assert!(RunConfig { min_nodes: 1, ..base.clone() }.validate().is_err());
        assert!(RunConfig { min_nodes: 11, ..base.clone() }.validate().is_err());
        assert!(RunConfig { max_nodes: 13, ..base.clone() }.validate().is_err());
        assert!(RunConfig { collinear_deg: 0.0, ..base.clone() }.validate().is_err());
        assert!(RunConfig { collinear_deg: 45.0, ..base }.validate().is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("binary".parse::<CatalogueMode>(), Ok(CatalogueMode::Binary));
        assert_eq!(CatalogueMode::Weighted.to_string(), "weighted");
        assert!("other".parse::<CatalogueMode>().is_err());
    }
}
