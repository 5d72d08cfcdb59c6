//! Run configuration: a JSON file whose fields override the library defaults, with
//! command-line flags overriding the file.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use frenet_core::estimator::EstimatorConfig;
use frenet_core::geometry::Tolerances;
use frenet_core::tangent::{TangentConfig, ToleranceMode};
use frenet_core::witness::default_multipliers;
use serde::{Deserialize, Serialize};

/// Every field is optional; unset fields keep the library default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
    pub window: Option<usize>,
    pub min_tail: Option<usize>,
    pub min_points: Option<usize>,
    pub multipliers: Option<Vec<u64>>,
    pub mem_mode: Option<ToleranceMode>,
    #[serde(default)]
    pub outputs: OutputPaths,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub tol_orth: Option<f64>,
    pub tol_bary: Option<f64>,
    pub tol_aff: Option<f64>,
    pub rank_tol: Option<f64>,
    pub mem_tol: Option<f64>,
    pub angle_tol: Option<f64>,
    pub cluster_angle: Option<f64>,
    pub divergence_angle: Option<f64>,
    pub floor: Option<f64>,
}

/// Default output locations; a subcommand's own `--out`/`--csv` flags win.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub report: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub ratio_csv: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Fields set in `other` replace those of `self`.
    pub fn merged(mut self, other: RunConfig) -> Self {
        macro_rules! take {
            ($($field:ident).+) => {
                if other.$($field).+.is_some() {
                    self.$($field).+ = other.$($field).+;
                }
            };
        }
        take!(tolerances.tol_orth);
        take!(tolerances.tol_bary);
        take!(tolerances.tol_aff);
        take!(tolerances.rank_tol);
        take!(tolerances.mem_tol);
        take!(tolerances.angle_tol);
        take!(tolerances.cluster_angle);
        take!(tolerances.divergence_angle);
        take!(tolerances.floor);
        take!(window);
        take!(min_tail);
        take!(min_points);
        take!(multipliers);
        take!(mem_mode);
        take!(outputs.report);
        take!(outputs.csv);
        take!(outputs.ratio_csv);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        for (name, v) in [
            ("tol_orth", t.tol_orth),
            ("tol_bary", t.tol_bary),
            ("tol_aff", t.tol_aff),
            ("rank_tol", t.rank_tol),
            ("mem_tol", t.mem_tol),
            ("angle_tol", t.angle_tol),
            ("cluster_angle", t.cluster_angle),
            ("divergence_angle", t.divergence_angle),
            ("floor", t.floor),
        ] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    bail!("{name} must be positive and finite, got {v}");
                }
            }
        }
        if let Some(w) = self.window {
            if w < 3 {
                bail!("window must be at least 3, got {w}");
            }
        }
        if self.min_tail == Some(0) || self.min_points == Some(0) {
            bail!("min_tail and min_points must be positive");
        }
        if let Some(m) = &self.multipliers {
            if m.is_empty() {
                bail!("multiplier ladder is empty");
            }
        }
        Ok(())
    }

    pub fn geometry(&self) -> Tolerances<f64> {
        let mut tol = Tolerances::default();
        let t = &self.tolerances;
        tol.tol_orth = t.tol_orth.unwrap_or(tol.tol_orth);
        tol.tol_bary = t.tol_bary.unwrap_or(tol.tol_bary);
        tol.tol_aff = t.tol_aff.unwrap_or(tol.tol_aff);
        tol.rank_tol = t.rank_tol.unwrap_or(tol.rank_tol);
        tol
    }

    pub fn estimator(&self) -> EstimatorConfig<f64> {
        let mut cfg = EstimatorConfig::default();
        let t = &self.tolerances;
        cfg.window = self.window.unwrap_or(cfg.window);
        cfg.angle_tol = t.angle_tol.unwrap_or(cfg.angle_tol);
        cfg.divergence_angle = t.divergence_angle.unwrap_or(cfg.divergence_angle);
        cfg.floor = t.floor.unwrap_or(cfg.floor);
        cfg.tol = self.geometry();
        cfg
    }

    pub fn tangent(&self) -> TangentConfig<f64> {
        let mut cfg = TangentConfig::default();
        let t = &self.tolerances;
        cfg.window = self.window.unwrap_or(cfg.window);
        cfg.min_tail = self.min_tail.unwrap_or(cfg.min_tail);
        cfg.min_points = self.min_points.unwrap_or(cfg.min_points);
        cfg.angle_tol = t.angle_tol.unwrap_or(cfg.angle_tol);
        cfg.cluster_angle = t.cluster_angle.unwrap_or(cfg.cluster_angle);
        cfg.mem_tol = t.mem_tol.unwrap_or(cfg.mem_tol);
        cfg.mem_mode = self.mem_mode.unwrap_or(cfg.mem_mode);
        cfg.tol = self.geometry();
        cfg
    }

    pub fn multipliers(&self) -> Vec<u64> {
        self.multipliers.clone().unwrap_or_else(default_multipliers)
    }
}
