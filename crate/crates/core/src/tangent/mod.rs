//! Tangent frames of finite samples of compact sets, the outgoing test and the
//! convex-case diagnostics.
//!
//! A sample only approximates its set, so every question here is asked at a finite
//! scale: tangent frames come from subsequences whose residual directions cluster and
//! converge, and a frame is outgoing when the flag simplex built at the scale of its
//! determining subsequence meets the sample exactly where its facet does.

mod analyze;
mod detect;
mod hull;
mod outgoing;

pub use analyze::{
    analyze, detect_bases, BaseReport, ExtremeTrend, PolyhedronVerdict, PrefixCheck,
    TangentReport,
};
pub use detect::detect_tangent_frames;
pub use hull::{distance_to_hull, extreme_points};
pub use outgoing::{outgoing_test, OutgoingReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Frame, Tolerances, Vector};
use crate::scalar::Scalar;

/// A finite sample of a subset of R^n, optionally with the accumulation points to
/// analyze.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SampledSetFile<T>", into = "SampledSetFile<T>")]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct SampledSet<T: Scalar> {
    dim: usize,
    points: Vec<Vector<T>>,
    bases: Option<Vec<Vector<T>>>,
}

#[derive(Serialize, Deserialize)]
struct SampledSetFile<T> {
    dim: usize,
    points: Vec<Vec<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bases: Option<Vec<Vec<T>>>,
}

impl<T: Scalar> TryFrom<SampledSetFile<T>> for SampledSet<T> {
    type Error = Error;
    fn try_from(f: SampledSetFile<T>) -> Result<Self> {
        let points = f.points.into_iter().map(Vector::new).collect::<Result<Vec<_>>>()?;
        let bases = f
            .bases
            .map(|b| b.into_iter().map(Vector::new).collect::<Result<Vec<_>>>())
            .transpose()?;
        Self::new(f.dim, points, bases)
    }
}

impl<T: Scalar> From<SampledSet<T>> for SampledSetFile<T> {
    fn from(s: SampledSet<T>) -> Self {
        Self {
            dim: s.dim,
            points: s.points.into_iter().map(Vector::into_vec).collect(),
            bases: s.bases.map(|b| b.into_iter().map(Vector::into_vec).collect()),
        }
    }
}

impl<T: Scalar> SampledSet<T> {
    pub fn new(dim: usize, points: Vec<Vector<T>>, bases: Option<Vec<Vector<T>>>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::TooFewPoints {
                found: points.len(),
                required: 2,
            });
        }
        for p in points.iter().chain(bases.iter().flatten()) {
            p.check_dim(dim)?;
        }
        Ok(Self { dim, points, bases })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vector<T>] {
        &self.points
    }

    pub fn bases(&self) -> Option<&[Vector<T>]> {
        self.bases.as_deref()
    }

    pub fn with_bases(mut self, bases: Option<Vec<Vector<T>>>) -> Result<Self> {
        for b in bases.iter().flatten() {
            b.check_dim(self.dim)?;
        }
        self.bases = bases;
        Ok(self)
    }

    /// Applies an affine map to every point and base.
    pub fn map<F: Fn(&Vector<T>) -> Vector<T>>(&self, f: F) -> Self {
        Self {
            dim: self.dim,
            points: self.points.iter().map(&f).collect(),
            bases: self.bases.as_ref().map(|b| b.iter().map(&f).collect()),
        }
    }
}

/// How `mem_tol` is turned into a per-point membership tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ToleranceMode {
    /// `mem_tol` as is.
    Absolute,
    /// `mem_tol * ||p - x||`; invariant under scaling about the base.
    #[default]
    Relative,
}

/// Tuning of tangent detection and the outgoing test.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentConfig<T> {
    /// Only points this close to the base are considered (`None`: all of them).
    pub radius: Option<T>,
    /// Fewest points near a base for detection to run.
    pub min_points: usize,
    /// Fewest points in a cluster, flat set or outgoing ball.
    pub min_tail: usize,
    /// Number of deepest directions a cluster is judged on.
    pub window: usize,
    /// Directions within this angle (radians) of a cluster's representative join it.
    pub cluster_angle: T,
    /// A cluster's deepest window has converged outright below this spread.
    pub angle_tol: T,
    /// Otherwise its spread must be below this fraction of the spread at twice the
    /// distance.
    pub shrink_factor: T,
    /// Deepest over coarsest distance of a determining subsequence.
    pub convergence_ratio: T,
    /// A point lies in a subspace when its residual is below `flat_tol * ||p - x||`.
    pub flat_tol: T,
    /// Deepest frame length explored (`None`: the ambient dimension).
    pub max_depth: Option<usize>,
    pub mem_tol: T,
    pub mem_mode: ToleranceMode,
    /// Flag scales for the outgoing test; default is half the radius of the
    /// determining subsequence at every level.
    pub scales: Option<Vec<T>>,
    pub tol: Tolerances<T>,
}

impl<T: Scalar> Default for TangentConfig<T> {
    fn default() -> Self {
        Self {
            radius: None,
            min_points: 5,
            min_tail: 10,
            window: 5,
            cluster_angle: T::lit(0.3),
            angle_tol: T::tol_at_least(1e-4, 1024.0),
            shrink_factor: T::lit(0.9),
            convergence_ratio: T::lit(0.1),
            flat_tol: T::tol_at_least(1e-9, 4096.0),
            max_depth: None,
            mem_tol: T::tol_at_least(1e-10, 1024.0),
            mem_mode: ToleranceMode::Relative,
            scales: None,
            tol: Tolerances::default(),
        }
    }
}

impl<T: Scalar> TangentConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.window < 2 {
            return Err(Error::InvalidConfig(format!("window {} < 2", self.window)));
        }
        if self.min_tail < 1 || self.min_points < 1 {
            return Err(Error::InvalidConfig("min_tail and min_points must be positive".into()));
        }
        let mut checks = vec![
            ("cluster_angle", self.cluster_angle),
            ("angle_tol", self.angle_tol),
            ("shrink_factor", self.shrink_factor),
            ("convergence_ratio", self.convergence_ratio),
            ("flat_tol", self.flat_tol),
            ("mem_tol", self.mem_tol),
        ];
        if let Some(r) = self.radius {
            checks.push(("radius", r));
        }
        for (name, v) in checks {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be positive")));
            }
        }
        if let Some(s) = &self.scales {
            if let Some(level) = s.iter().position(|&l| !(l > T::zero() && l.is_finite())) {
                return Err(Error::NonPositiveScale { level: level + 1 });
            }
        }
        Ok(())
    }

    /// Membership tolerance for a point at distance `r` from the base.
    pub fn membership_tolerance(&self, r: T) -> T {
        match self.mem_mode {
            ToleranceMode::Absolute => self.mem_tol,
            ToleranceMode::Relative => self.mem_tol * r,
        }
    }
}

/// Verdict of the outgoing test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outgoing {
    Yes,
    No,
    /// Too few determining points at the tested scale to say anything.
    Vacuous,
}

/// A tangent frame at `base` together with the sample indices determining it, listed
/// from the farthest to the closest point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct TangentRecord<T: Scalar> {
    pub base: Vector<T>,
    pub frame: Frame<T>,
    pub determining_indices: Vec<usize>,
    /// Filled in by [`analyze`].
    pub outgoing: Option<Outgoing>,
}

impl<T: Scalar> TangentRecord<T> {
    pub fn k(&self) -> usize {
        self.frame.len()
    }
}
