use serde::{Deserialize, Serialize};

use super::PointSequence;
use crate::error::{Error, Result};
use crate::geometry::Vector;
use crate::scalar::Scalar;

/// Which sign of `sin(1/t)` the parameters of the `(t, t^2 sin(1/t))` curve are
/// snapped to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    /// Use the geometric parameters as they are.
    #[default]
    Plain,
    /// `t = 1 / (2 pi m + pi / 2)`, where `sin(1/t) = 1`.
    Peaks,
    /// `t = 1 / (2 pi m + 3 pi / 2)`, where `sin(1/t) = -1`.
    Troughs,
    /// Alternate peaks and troughs, starting with a peak.
    Mixed,
}

/// Builtin curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveSpec<T> {
    /// `(cos t, sin t, t)` in R^3.
    Helix,
    /// `(t, t^3)` in R^2.
    Cubic,
    /// `(t, t^2 sin(1/t))` in R^2, extended by `(0, 0)` at `t = 0`.
    Sin2 {
        #[serde(default)]
        phase: Phase,
    },
    /// Row `r` holds the coefficients `c_0, c_1, ...` of coordinate `r` in powers of `t`.
    Polynomial { coefficients: Vec<Vec<T>> },
}

impl<T: Scalar> CurveSpec<T> {
    pub fn polynomial(coefficients: Vec<Vec<T>>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Empty("polynomial curve needs at least one row"));
        }
        if coefficients.iter().any(|row| row.iter().any(|c| !c.is_finite())) {
            return Err(Error::NonFinite);
        }
        Ok(Self::Polynomial { coefficients })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Helix => 3,
            Self::Cubic | Self::Sin2 { .. } => 2,
            Self::Polynomial { coefficients } => coefficients.len(),
        }
    }

    pub fn eval(&self, t: T) -> Vector<T> {
        let coords = match self {
            Self::Helix => vec![t.cos(), t.sin(), t],
            Self::Cubic => vec![t, t * t * t],
            Self::Sin2 { .. } => {
                if t == T::zero() {
                    vec![T::zero(), T::zero()]
                } else {
                    vec![t, t * t * (T::one() / t).sin()]
                }
            }
            Self::Polynomial { coefficients } => coefficients
                .iter()
                .map(|row| row.iter().rev().fold(T::zero(), |acc, &c| acc * t + c))
                .collect(),
        };
        Vector::from_vec_unchecked(coords)
    }

    /// `phi'(t), ..., phi^(k)(t)` for the curves that are smooth at `t`; `None` for the
    /// `sin(1/t)` curve, which has no second derivative at the origin.
    pub fn derivatives(&self, t: T, k: usize) -> Option<Vec<Vector<T>>> {
        let half_pi = T::lit(std::f64::consts::FRAC_PI_2);
        let out = match self {
            Self::Helix => (1..=k)
                .map(|m| {
                    let shift = half_pi * T::lit(m as f64);
                    let z = if m == 1 { T::one() } else { T::zero() };
                    Vector::from_vec_unchecked(vec![(t + shift).cos(), (t + shift).sin(), z])
                })
                .collect(),
            Self::Cubic => (1..=k)
                .map(|m| {
                    let y = match m {
                        1 => T::lit(3.0) * t * t,
                        2 => T::lit(6.0) * t,
                        3 => T::lit(6.0),
                        _ => T::zero(),
                    };
                    let x = if m == 1 { T::one() } else { T::zero() };
                    Vector::from_vec_unchecked(vec![x, y])
                })
                .collect(),
            Self::Sin2 { .. } => return None,
            Self::Polynomial { coefficients } => (1..=k)
                .map(|m| {
                    Vector::from_vec_unchecked(
                        coefficients.iter().map(|row| poly_derivative(row, m, t)).collect(),
                    )
                })
                .collect(),
        };
        Some(out)
    }
}

// m-th derivative of sum_p c_p t^p at t.
fn poly_derivative<T: Scalar>(coeffs: &[T], m: usize, t: T) -> T {
    let mut acc = T::zero();
    for p in (m..coeffs.len()).rev() {
        let falling: f64 = (p + 1 - m..=p).map(|q| q as f64).product();
        acc = acc * t + coeffs[p] * T::lit(falling);
    }
    acc
}

/// Geometric parameter schedule `t_i = t0 + (t_start - t0) * ratio^i`, `i = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan<T> {
    pub t0: T,
    pub ratio: T,
    pub count: usize,
    pub t_start: T,
}

impl<T: Scalar> SamplePlan<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.ratio > T::zero() && self.ratio < T::one()) {
            return Err(Error::InvalidPlan(format!("ratio {} not in (0, 1)", self.ratio)));
        }
        if self.count < 3 {
            return Err(Error::InvalidPlan(format!("count {} < 3", self.count)));
        }
        if !(self.t_start > self.t0) || !self.t_start.is_finite() || !self.t0.is_finite() {
            return Err(Error::InvalidPlan("t_start must exceed t0".into()));
        }
        Ok(())
    }

    pub fn parameters(&self) -> Result<Vec<T>> {
        self.validate()?;
        let mut out = Vec::with_capacity(self.count);
        let mut step = self.t_start - self.t0;
        for _ in 0..self.count {
            let t = self.t0 + step;
            if t <= self.t0 {
                return Err(Error::InvalidPlan(
                    "parameters collapse onto t0 in floating point".into(),
                ));
            }
            out.push(t);
            step *= self.ratio;
        }
        Ok(out)
    }
}

// Snaps offsets from t0 to the nearest peak/trough parameter of sin(1/t), keeping the
// sequence strictly decreasing.
fn snap_phase<T: Scalar>(offsets: &[T], phase: Phase) -> Vec<T> {
    if phase == Phase::Plain {
        return offsets.to_vec();
    }
    let two_pi = T::lit(std::f64::consts::TAU);
    let mut out: Vec<T> = Vec::with_capacity(offsets.len());
    let mut next_m: u64 = 1;
    for (i, &tau) in offsets.iter().enumerate() {
        let peak = match phase {
            Phase::Peaks => true,
            Phase::Troughs => false,
            _ => i % 2 == 0,
        };
        let shift = T::lit(if peak { 0.25 } else { 0.75 }) * two_pi;
        let m_real = ((T::one() / tau - shift) / two_pi).round();
        let mut m = m_real.to_u64().unwrap_or(1).max(1).max(next_m);
        let mut t = T::one() / (two_pi * T::lit(m as f64) + shift);
        while let Some(&prev) = out.last() {
            if t < prev {
                break;
            }
            m += 1;
            t = T::one() / (two_pi * T::lit(m as f64) + shift);
        }
        // Peaks and troughs with the same m interleave; only same-kind repeats clash.
        next_m = if phase == Phase::Mixed { m } else { m + 1 };
        out.push(t);
    }
    out
}

/// Samples `phi(t_i)` along the plan; the base is `phi(t0)`. Points that coincide with
/// the base in floating point are dropped with a warning.
pub fn sample_curve<T: Scalar>(spec: &CurveSpec<T>, plan: &SamplePlan<T>) -> Result<PointSequence<T>> {
    let params = plan.parameters()?;
    let base = spec.eval(plan.t0);
    let offsets: Vec<T> = params.iter().map(|&t| t - plan.t0).collect();
    let offsets = match spec {
        CurveSpec::Sin2 { phase } => {
            if plan.t0 != T::zero() && *phase != Phase::Plain {
                return Err(Error::InvalidPlan("phase snapping requires t0 = 0".into()));
            }
            snap_phase(&offsets, *phase)
        }
        _ => offsets,
    };
    let mut points = Vec::with_capacity(offsets.len());
    for (i, &dt) in offsets.iter().enumerate() {
        let p = spec.eval(plan.t0 + dt);
        if !p.is_finite() {
            return Err(Error::NonFinite);
        }
        if p == base {
            log::warn!("sample {i} coincides with the base point and was dropped");
            continue;
        }
        points.push(p);
    }
    PointSequence::new(base, points)
}
