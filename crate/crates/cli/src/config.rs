use std::path::{Path, PathBuf};

use serde::Deserialize;
use winterbottom_lab::minimize::MinimizeConfig;
use winterbottom_lab::{AnisotropySpec, EtaPolicy};

pub const MAX_GRID: usize = 201;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleBlock {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for SampleBlock {
    fn default() -> Self {
        Self {
            samples: default_samples(),
            seed: 0,
        }
    }
}

fn default_samples() -> usize {
    200
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessBlock {
    #[serde(default = "default_k_max")]
    pub k_max: u32,
}

impl Default for WitnessBlock {
    fn default() -> Self {
        Self { k_max: default_k_max() }
    }
}

fn default_k_max() -> u32 {
    20
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyBlock {
    /// Polygons to evaluate; the Winterbottom shape when empty.
    #[serde(default)]
    pub polygons: Vec<winterbottom_lab::geometry::PolygonJson>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Svg,
    Csv,
    Json,
}

fn default_formats() -> Vec<Format> {
    vec![Format::Json, Format::Svg, Format::Csv]
}

fn default_boundary_samples() -> usize {
    2048
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub anisotropy: AnisotropySpec,
    /// Label used in CSV rows; defaults to the anisotropy kind.
    #[serde(default)]
    pub anisotropy_id: Option<String>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub beta_grid: Option<BetaGrid>,
    #[serde(default = "default_boundary_samples")]
    pub boundary_samples: usize,
    #[serde(default)]
    pub eta_policy: EtaPolicy<f64>,
    #[serde(default)]
    pub minimize: MinimizeConfig<f64>,
    /// Target area for fixed-volume minimisation; the Winterbottom area if absent.
    #[serde(default)]
    pub volume: Option<f64>,
    #[serde(default)]
    pub verify: SampleBlock,
    #[serde(default)]
    pub validate: SampleBlock,
    #[serde(default)]
    pub identity: SampleBlock,
    #[serde(default)]
    pub witness: WitnessBlock,
    #[serde(default)]
    pub energy: Option<EnergyBlock>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}:{e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| format!("{}:{}: {e}", e.line(), e.column()))?;
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), String> {
        match (&self.beta, &self.beta_grid) {
            (Some(_), Some(_)) => return Err("give exactly one of `beta` and `beta_grid`, not both".into()),
            (None, None) => return Err("one of `beta` or `beta_grid` is required".into()),
            (Some(b), None) if !b.is_finite() => return Err("`beta` must be finite".into()),
            (None, Some(g)) => {
                if g.count == 0 || g.count > MAX_GRID {
                    return Err(format!("beta_grid.count must be in 1..={MAX_GRID}, got {}", g.count));
                }
                if !(g.min.is_finite() && g.max.is_finite()) || g.min > g.max {
                    return Err("beta_grid needs finite min <= max".into());
                }
            }
            _ => {}
        }
        if self.formats.is_empty() {
            return Err("`formats` must not be empty".into());
        }
        if self.boundary_samples < 16 {
            return Err("`boundary_samples` must be at least 16".into());
        }
        self.minimize.validate().map_err(|e| format!("minimize: {e}"))?;
        Ok(())
    }

    pub fn betas(&self) -> Vec<f64> {
        match (&self.beta, &self.beta_grid) {
            (Some(b), _) => vec![*b],
            (None, Some(g)) if g.count == 1 => vec![g.min],
            (None, Some(g)) => (0..g.count)
                .map(|j| g.min + (g.max - g.min) * j as f64 / (g.count - 1) as f64)
                .collect(),
            _ => unreachable!("checked on load"),
        }
    }

    pub fn anisotropy_id(&self) -> String {
        self.anisotropy_id
            .clone()
            .unwrap_or_else(|| self.anisotropy.kind.as_str().to_string())
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_and_defaults() {
        let c = ExperimentConfig::parse(
            r#"{"anisotropy": {"kind": "euclidean"}, "beta_grid": {"min": -0.5, "max": 0.5, "count": 3}}"#,
        )
        .unwrap();
        assert_eq!(c.betas(), vec![-0.5, 0.0, 0.5]);
        assert_eq!(c.minimize.vertex_count, 64);
        assert_eq!(c.anisotropy_id(), "euclidean");
        assert!(c.wants(Format::Svg));
    }

    #[test]
    fn rejects_bad_configs() {
        let both = r#"{"anisotropy": {"kind": "euclidean"}, "beta": 0, "beta_grid": {"min": 0, "max": 1, "count": 2}}"#;
        assert!(ExperimentConfig::parse(both).is_err());
        let big = r#"{"anisotropy": {"kind": "euclidean"}, "beta_grid": {"min": 0, "max": 1, "count": 202}}"#;
        assert!(ExperimentConfig::parse(big).unwrap_err().contains("201"));
        let err = ExperimentConfig::parse("{\n  \"beta\": 0,\n  oops\n}").unwrap_err();
        assert!(err.starts_with("3:"), "{err}");
        assert!(ExperimentConfig::parse(r#"{"anisotropy": {"kind": "euclidean"}, "beta": 0, "extra": 1}"#).is_err());
    }
}
