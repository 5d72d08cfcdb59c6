//! JSON reports. Every report carries `schema_version`; all of them deserialize back to
//! an equal value.

use frenet_core::estimator::FrameEstimate;
use frenet_core::geometry::{Frame, Vector};
use frenet_core::tangent::TangentReport;
use frenet_core::witness::{PlFormula, RatioTable};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    pub schema_version: u32,
    pub k_max: usize,
    pub estimate: FrameEstimate<f64>,
    /// Number of leading levels that converged.
    pub converged_levels: usize,
    pub diverged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical: Option<ClassicalComparison>,
}

/// Estimate against the Gram–Schmidt frame of a derivative table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalComparison {
    /// `None` when the derivatives are rank deficient.
    pub frame: Option<Frame<f64>>,
    /// Rank failure message, if any.
    pub error: Option<String>,
    /// Angle (radians) per converged level, when both frames have that level.
    pub angles: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentsReport {
    pub schema_version: u32,
    pub analysis: TangentReport<f64>,
    /// Witness pairs and ratio tables of the outgoing frames (with `--witness`).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessEntry {
    /// Index into `analysis.bases`.
    pub base: usize,
    /// Index into that base's records.
    pub record: usize,
    pub k: usize,
    pub f1: PlFormula<f64>,
    pub f2: PlFormula<f64>,
    pub table: RatioTable<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlagsReport {
    pub schema_version: u32,
    pub base: Vector<f64>,
    pub frame: Frame<f64>,
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<FlagVerification>,
}

/// The same intersection recomputed by ray casting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlagVerification {
    pub nu: Vec<f64>,
    pub max_difference: f64,
    pub agrees: bool,
}
