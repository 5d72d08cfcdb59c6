//! Derivative-free Frenet frames of convergent point sequences.
//!
//! Level `j` of the frame of `x_i -> x` is the limit of the normalized components of
//! `x_i - x` orthogonal to the span of the first `j - 1` levels. The span used for
//! point `i` is the one of its next `j - 1` deeper neighbours `x_{i+1}, ..., x_{i+j-1}`
//! (orthonormalized deepest first); it converges to the same subspace as the limiting
//! prefix, but its error shrinks with the point being processed, so the residual keeps
//! the right sign all the way down the tail. A level is accepted from the deepest
//! window of consecutive usable directions whose pairwise angles agree, which skips
//! tails where cancellation noise dominates.

mod curves;

pub use curves::{sample_curve, CurveSpec, Phase, SamplePlan};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{gram_schmidt, Frame, Tolerances, Vector};
use crate::scalar::Scalar;

/// A finite sample `x_1, x_2, ...` (in convergence order) of a sequence with limit `base`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PointSequenceFile<T>", into = "PointSequenceFile<T>")]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct PointSequence<T: Scalar> {
    base: Vector<T>,
    points: Vec<Vector<T>>,
}

#[derive(Serialize, Deserialize)]
struct PointSequenceFile<T> {
    dim: usize,
    base: Vec<T>,
    points: Vec<Vec<T>>,
}

impl<T: Scalar> TryFrom<PointSequenceFile<T>> for PointSequence<T> {
    type Error = Error;
    fn try_from(f: PointSequenceFile<T>) -> Result<Self> {
        let base = Vector::new(f.base)?;
        base.check_dim(f.dim)?;
        let points = f.points.into_iter().map(Vector::new).collect::<Result<Vec<_>>>()?;
        Self::new(base, points)
    }
}

impl<T: Scalar> From<PointSequence<T>> for PointSequenceFile<T> {
    fn from(s: PointSequence<T>) -> Self {
        Self {
            dim: s.base.dim(),
            base: s.base.into_vec(),
            points: s.points.into_iter().map(Vector::into_vec).collect(),
        }
    }
}

impl<T: Scalar> PointSequence<T> {
    /// Checks dimensions and warns when the distances to the base are not eventually
    /// decreasing. Points equal to the base are accepted here and rejected by
    /// [`estimate_frame`].
    pub fn new(base: Vector<T>, points: Vec<Vector<T>>) -> Result<Self> {
        for p in &points {
            p.check_dim(base.dim())?;
        }
        let seq = Self { base, points };
        if !seq.tail_is_monotone() {
            log::warn!("distances to the base are not decreasing over the last half of the sequence");
        }
        Ok(seq)
    }

    pub fn base(&self) -> &Vector<T> {
        &self.base
    }

    pub fn points(&self) -> &[Vector<T>] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn tail_is_monotone(&self) -> bool {
        let d: Vec<T> = self.points.iter().map(|p| p.distance(&self.base)).collect();
        let start = d.len() / 2;
        d[start..].windows(2).all(|w| w[1] <= w[0])
    }

    /// Every `step`-th point, starting with the first.
    pub fn every_nth(&self, step: usize) -> Self {
        Self {
            base: self.base.clone(),
            points: self.points.iter().step_by(step.max(1)).cloned().collect(),
        }
    }

    /// Applies an affine map to the base and all points.
    pub fn map<F: Fn(&Vector<T>) -> Vector<T>>(&self, f: F) -> Self {
        Self {
            base: f(&self.base),
            points: self.points.iter().map(&f).collect(),
        }
    }
}

/// Tuning of [`estimate_frame`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig<T> {
    /// Number of consecutive directions a level is judged on.
    pub window: usize,
    /// A window converges when its largest pairwise angle is at most this (radians).
    pub angle_tol: T,
    /// Spread (radians) above which a non-shrinking tail is reported as divergent.
    pub divergence_angle: T,
    /// Residuals below `floor * ||x_i - x||` count as lying in the prefix span.
    pub floor: T,
    /// A tail "shrinks" when its spread is below this fraction of the previous window's.
    pub shrink_factor: T,
    pub tol: Tolerances<T>,
}

impl<T: Scalar> Default for EstimatorConfig<T> {
    fn default() -> Self {
        Self {
            window: 5,
            angle_tol: T::tol_at_least(1e-4, 1024.0),
            divergence_angle: T::lit(0.5),
            floor: T::tol_at_least(1e-13, 512.0),
            shrink_factor: T::lit(0.9),
            tol: Tolerances::default(),
        }
    }
}

impl<T: Scalar> EstimatorConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.window < 3 {
            return Err(Error::InvalidConfig(format!("window {} < 3", self.window)));
        }
        for (name, v) in [
            ("angle_tol", self.angle_tol),
            ("divergence_angle", self.divergence_angle),
            ("floor", self.floor),
            ("shrink_factor", self.shrink_factor),
        ] {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

/// Outcome of one frame level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelStatus {
    Converged,
    /// Tail directions keep disagreeing by more than the divergence angle.
    Diverged,
    /// The tail of the sequence lies in the span of the previous levels.
    ResidualFloor,
    /// Not enough agreeing data to decide.
    Exhausted,
}

/// Per-level diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct LevelDiagnostics<T: Scalar> {
    /// 1-based level.
    pub level: usize,
    pub status: LevelStatus,
    /// Indices (into the sequence) of the window the verdict is based on.
    pub window: Vec<usize>,
    /// Largest pairwise angle in that window.
    pub spread: T,
    /// Spread of the window just before it, when there is one.
    pub previous_spread: Option<T>,
    /// Residual norm per sequence index; `None` where the local prefix was degenerate
    /// or there were not enough deeper points.
    pub residual_norms: Vec<Option<T>>,
    /// Normalized residual direction per index, `None` when unusable.
    pub directions: Vec<Option<Vector<T>>>,
    /// Two directions of the window with angle above the divergence angle.
    pub witnesses: Option<(Vector<T>, Vector<T>)>,
}

/// The frame of levels `1..=k` that converged, and diagnostics for every level tried.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct FrameEstimate<T: Scalar> {
    pub frame: Frame<T>,
    pub levels: Vec<LevelDiagnostics<T>>,
}

impl<T: Scalar> FrameEstimate<T> {
    pub fn statuses(&self) -> Vec<LevelStatus> {
        self.levels.iter().map(|l| l.status).collect()
    }

    pub fn diverged(&self) -> bool {
        self.levels.iter().any(|l| l.status == LevelStatus::Diverged)
    }

    /// Angle between each usable direction and the final estimate of its level.
    pub fn angle_series(&self, level: usize) -> Vec<(usize, T)> {
        let Some(diag) = self.levels.get(level - 1) else {
            return Vec::new();
        };
        let Some(u) = self.frame.get(level - 1) else {
            return Vec::new();
        };
        diag.directions
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.as_ref().map(|d| (i, d.angle_to(u))))
            .collect()
    }
}

/// `(p - base) - proj_{span(prefix)}(p - base)`.
pub fn residual<T: Scalar>(p: &Vector<T>, base: &Vector<T>, prefix: &Frame<T>) -> Result<Vector<T>> {
    p.check_dim(base.dim())?;
    prefix.reject(&(p - base))
}

/// The classical Frenet frame: Gram–Schmidt of `phi'(t0), ..., phi^(k)(t0)`.
pub fn classical_frame<T: Scalar>(derivatives: &[Vector<T>], rank_tol: T) -> Result<Frame<T>> {
    gram_schmidt(derivatives, rank_tol)
}

pub(crate) fn max_pairwise_angle<T: Scalar>(dirs: &[&Vector<T>]) -> (T, usize, usize) {
    let mut best = (T::zero(), 0, 0);
    for i in 0..dirs.len() {
        for j in i + 1..dirs.len() {
            let a = dirs[i].angle_to(dirs[j]);
            if a > best.0 {
                best = (a, i, j);
            }
        }
    }
    best
}

/// Estimates the Frenet frame of `seq` up to `k_max` levels. Stops at the first level
/// that does not converge; levels past it are never reported.
pub fn estimate_frame<T: Scalar>(
    seq: &PointSequence<T>,
    k_max: usize,
    cfg: &EstimatorConfig<T>,
) -> Result<FrameEstimate<T>> {
    cfg.validate()?;
    let n = seq.dim();
    if k_max == 0 || k_max > n {
        return Err(Error::InvalidConfig(format!("k_max {k_max} not in 1..={n}")));
    }
    let count = seq.len();
    if cfg.window > count {
        return Err(Error::WindowTooLarge {
            window: cfg.window,
            available: count,
        });
    }
    let offsets: Vec<Vector<T>> = seq.points.iter().map(|p| p - &seq.base).collect();
    if let Some(i) = offsets.iter().position(|d| d.max_abs() == T::zero()) {
        return Err(Error::PointAtBase { index: i });
    }
    let mut frame = Frame::empty(n);
    let mut levels = Vec::new();
    for level in 1..=k_max {
        let diag = estimate_level(&offsets, &frame, level, cfg);
        let status = diag.0.status;
        levels.push(diag.0);
        match (status, diag.1) {
            (LevelStatus::Converged, Some(u)) => frame.push_unchecked(u),
            _ => break,
        }
    }
    Ok(FrameEstimate { frame, levels })
}

fn local_direction<T: Scalar>(
    offsets: &[Vector<T>],
    i: usize,
    level: usize,
    floor: T,
    rank_tol: T,
) -> (Option<T>, Option<Vector<T>>) {
    let floor = floor * offsets[i].norm();
    if i + level > offsets.len() {
        return (None, None);
    }
    let deeper: Vec<Vector<T>> = (1..level).rev().map(|m| offsets[i + m].clone()).collect();
    let prefix = if deeper.is_empty() {
        Frame::empty(offsets[i].dim())
    } else {
        match gram_schmidt(&deeper, rank_tol) {
            Ok(f) => f,
            // The deeper points already lie in a lower-dimensional span.
            Err(_) => return (Some(T::zero()), None),
        }
    };
    let r = prefix.reject(&offsets[i]).expect("dimension checked");
    let norm = r.norm();
    if norm <= floor {
        (Some(norm), None)
    } else {
        (Some(norm), Some(r.scaled(T::one() / norm)))
    }
}

fn estimate_level<T: Scalar>(
    offsets: &[Vector<T>],
    frame: &Frame<T>,
    level: usize,
    cfg: &EstimatorConfig<T>,
) -> (LevelDiagnostics<T>, Option<Vector<T>>) {
    let computed: Vec<(Option<T>, Option<Vector<T>>)> = (0..offsets.len())
        .map(|i| local_direction(offsets, i, level, cfg.floor, cfg.tol.rank_tol))
        .collect();
    let (residual_norms, directions): (Vec<_>, Vec<_>) = computed.into_iter().unzip();
    let usable: Vec<usize> = directions
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_some())
        .map(|(i, _)| i)
        .collect();
    // Indices that had enough deeper points to be evaluated at all.
    let evaluated: Vec<usize> = residual_norms
        .iter()
        .enumerate()
        .filter(|(_, r)| r.is_some())
        .map(|(i, _)| i)
        .collect();
    let tail_is_flat = evaluated.len() >= cfg.window
        && evaluated[evaluated.len() - cfg.window..]
            .iter()
            .all(|&i| directions[i].is_none());

    let mut diag = LevelDiagnostics {
        level,
        status: LevelStatus::Exhausted,
        window: Vec::new(),
        spread: T::zero(),
        previous_spread: None,
        residual_norms,
        directions,
        witnesses: None,
    };
    let w = cfg.window;
    if usable.len() < w {
        diag.status = if tail_is_flat || usable.is_empty() {
            LevelStatus::ResidualFloor
        } else {
            LevelStatus::Exhausted
        };
        diag.window = usable;
        return (diag, None);
    }

    let spread_of = |idx: &[usize]| {
        let dirs: Vec<&Vector<T>> = idx.iter().map(|&i| diag.directions[i].as_ref().unwrap()).collect();
        max_pairwise_angle(&dirs)
    };

    // Deepest window first.
    let mut end = usable.len();
    while end >= w {
        let idx = &usable[end - w..end];
        let (spread, _, _) = spread_of(idx);
        if spread <= cfg.angle_tol {
            let mut mean = Vector::zeros(frame.dim());
            for &i in idx {
                mean.axpy_in_place(T::one(), diag.directions[i].as_ref().unwrap());
            }
            let u = frame.reject(&mean).expect("dimension checked").normalized();
            diag.window = idx.to_vec();
            diag.spread = spread;
            diag.previous_spread = (end >= 2 * w).then(|| spread_of(&usable[end - 2 * w..end - w]).0);
            diag.status = if u.is_some() {
                LevelStatus::Converged
            } else {
                LevelStatus::ResidualFloor
            };
            return (diag, u);
        }
        end -= 1;
    }

    let tail = &usable[usable.len() - w..];
    let (spread, a, b) = spread_of(tail);
    let previous = (usable.len() >= 2 * w).then(|| spread_of(&usable[usable.len() - 2 * w..usable.len() - w]).0);
    diag.window = tail.to_vec();
    diag.spread = spread;
    diag.previous_spread = previous;
    let shrinking = previous.is_some_and(|p| spread < cfg.shrink_factor * p);
    if tail_is_flat {
        diag.status = LevelStatus::ResidualFloor;
    } else if spread > cfg.divergence_angle && !shrinking {
        diag.status = LevelStatus::Diverged;
        diag.witnesses = Some((
            diag.directions[tail[a]].clone().unwrap(),
            diag.directions[tail[b]].clone().unwrap(),
        ));
    }
    (diag, None)
}
