//! Piecewise-linear witness pairs for flag simplices and multiplier ratio tables.
//!
//! With frame coordinates `s_i = <y - x, u_i>` in a completed orthonormal basis and
//! chain ratios `r_i = s_i / l_i`, the first function vanishes exactly on the flag
//! simplex `C` and the second exactly on its facet `C'`, where it is the linear map
//! `y -> s_k` on `C`. A sample on which the second stays large compared to the first at
//! every multiplier shows the second is not in the ideal generated by the first.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{FlagSimplex, Frame, Tolerances, Vector};
use crate::scalar::Scalar;
use crate::tangent::{SampledSet, ToleranceMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlKind {
    /// Vanishes exactly on `C`.
    ZeroOnC,
    /// Vanishes exactly on the facet `C'`.
    ZeroOnCfacet,
}

/// One summand of a witness. Indices are 1-based frame levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "term", rename_all = "snake_case")]
pub enum PlTerm {
    /// `|s_i|`
    Abs { index: usize },
    /// `(-r_i)+`
    NegRatio { index: usize },
    /// `(r_upper - r_lower)+` with `upper = lower + 1`
    RatioStep { lower: usize, upper: usize },
    /// `(r_1 - 1)+`
    RatioExcess,
}

/// A nonnegative piecewise-linear function given as a sum of terms in the frame
/// coordinates of a base point and a full orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct PlFormula<T: Scalar> {
    pub base: Vector<T>,
    /// Full basis whose first `scales.len()` vectors are the flag frame.
    pub frame: Frame<T>,
    pub scales: Vec<T>,
    pub kind: PlKind,
    pub terms: Vec<PlTerm>,
}

impl<T: Scalar> PlFormula<T> {
    pub fn k(&self) -> usize {
        self.scales.len()
    }

    pub fn eval(&self, p: &Vector<T>) -> Result<T> {
        let s = frame_coordinates(p, &self.base, &self.frame)?;
        let r = |i: usize| s[i - 1] / self.scales[i - 1];
        let pos = |v: T| v.max(T::zero());
        Ok(self
            .terms
            .iter()
            .map(|t| match *t {
                PlTerm::Abs { index } => s[index - 1].abs(),
                PlTerm::NegRatio { index } => pos(-r(index)),
                PlTerm::RatioStep { lower, upper } => pos(r(upper) - r(lower)),
                PlTerm::RatioExcess => pos(r(1) - T::one()),
            })
            .sum())
    }

    /// The flag simplex this formula (or its partner) vanishes on.
    pub fn flag(&self, tol: Tolerances<T>) -> Result<FlagSimplex<T>> {
        FlagSimplex::new(self.base.clone(), self.frame.prefix(self.k()), self.scales.clone(), tol)
    }
}

/// `s_i = <p - x, u_i>` for a basis `fullframe` of R^n.
pub fn frame_coordinates<T: Scalar>(p: &Vector<T>, x: &Vector<T>, fullframe: &Frame<T>) -> Result<Vec<T>> {
    if fullframe.len() != fullframe.dim() {
        return Err(Error::FrameNotFull {
            rank: fullframe.len(),
            dim: fullframe.dim(),
        });
    }
    x.check_dim(fullframe.dim())?;
    fullframe.coordinates(&(p - x))
}

/// The witness pair `(f1, f2)` of the flag simplex on `(x, u, l)`.
pub fn build_witness<T: Scalar>(
    x: &Vector<T>,
    u: &Frame<T>,
    scales: &[T],
    tol: Tolerances<T>,
) -> Result<(PlFormula<T>, PlFormula<T>)> {
    // Validates scales, dimensions and orthonormality.
    FlagSimplex::new(x.clone(), u.clone(), scales.to_vec(), tol)?;
    let k = u.len();
    let n = u.dim();
    let full = u.extend_to_basis();

    let mut f1 = Vec::new();
    f1.extend((k + 1..=n).map(|index| PlTerm::Abs { index }));
    if k >= 1 {
        f1.push(PlTerm::NegRatio { index: k });
        f1.extend((1..k).map(|lower| PlTerm::RatioStep { lower, upper: lower + 1 }));
        f1.push(PlTerm::RatioExcess);
    }

    let mut f2 = Vec::new();
    f2.extend((k.max(1)..=n).map(|index| PlTerm::Abs { index }));
    if k >= 2 {
        f2.push(PlTerm::NegRatio { index: k - 1 });
        f2.extend((1..k - 1).map(|lower| PlTerm::RatioStep { lower, upper: lower + 1 }));
        f2.push(PlTerm::RatioExcess);
    }

    let make = |kind, terms| PlFormula {
        base: x.clone(),
        frame: full.clone(),
        scales: scales.to_vec(),
        kind,
        terms,
    };
    Ok((make(PlKind::ZeroOnC, f1), make(PlKind::ZeroOnCfacet, f2)))
}

/// `f(p)`, always `>= 0`.
pub fn eval_pl<T: Scalar>(f: &PlFormula<T>, p: &Vector<T>) -> Result<T> {
    f.eval(p)
}

/// One multiplier of a ratio table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow<T> {
    pub multiplier: u64,
    /// `max_i f2(x_i) - m f1(x_i)`.
    pub max_value: T,
    /// Sample index attaining it (the first one on ties).
    pub argmax: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RatioVerdict {
    /// Strictly positive rows up to and including this multiplier.
    Certified { scale: u64 },
    NoCertificate,
    /// The two functions do not vanish on the same sample points, so positive rows
    /// prove nothing.
    ZeroSetMismatch { points: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioTable<T> {
    pub rows: Vec<RatioRow<T>>,
    pub verdict: RatioVerdict,
}

impl<T: Scalar> RatioTable<T> {
    pub fn certified(&self) -> Option<u64> {
        match self.verdict {
            RatioVerdict::Certified { scale } => Some(scale),
            _ => None,
        }
    }

    /// Two-column `multiplier,max_value` CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("multiplier,max_value\n");
        for r in &self.rows {
            out.push_str(&format!("{},{:e}\n", r.multiplier, r.max_value));
        }
        out
    }
}

/// The multipliers `1, 10, ..., 10^6`.
pub fn default_multipliers() -> Vec<u64> {
    (0..=6).map(|e| 10u64.pow(e)).collect()
}

/// Rows `max_i f2(x_i) - m f1(x_i)` for each multiplier. Zero sets are compared on the
/// sample with per-point tolerance `mem_tol` (scaled by the distance to the base in
/// relative mode); a mismatch withholds the certificate.
pub fn ratio_table<T: Scalar>(
    f1: &PlFormula<T>,
    f2: &PlFormula<T>,
    set: &SampledSet<T>,
    multipliers: &[u64],
    mem_tol: T,
    mode: ToleranceMode,
) -> Result<RatioTable<T>> {
    if set.is_empty() {
        return Err(Error::Empty("ratio table needs sample points"));
    }
    if multipliers.is_empty() || multipliers[0] == 0 || multipliers.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidConfig("multipliers must be positive and increasing".into()));
    }
    let mut v1 = Vec::with_capacity(set.len());
    let mut v2 = Vec::with_capacity(set.len());
    let mut mismatched = Vec::new();
    for (i, p) in set.points().iter().enumerate() {
        let a = f1.eval(p)?;
        let b = f2.eval(p)?;
        let tol = match mode {
            ToleranceMode::Absolute => mem_tol,
            ToleranceMode::Relative => mem_tol * p.distance(&f1.base),
        };
        if (a <= tol) != (b <= tol) {
            mismatched.push(i);
        }
        v1.push(a);
        v2.push(b);
    }
    let rows: Vec<RatioRow<T>> = multipliers
        .iter()
        .map(|&m| {
            let mf = T::lit(m as f64);
            let (argmax, max_value) = v1
                .iter()
                .zip(&v2)
                .map(|(&a, &b)| b - mf * a)
                .enumerate()
                .fold((0, T::neg_infinity()), |best, (i, v)| if v > best.1 { (i, v) } else { best });
            RatioRow {
                multiplier: m,
                max_value,
                argmax,
            }
        })
        .collect();
    let verdict = if !mismatched.is_empty() {
        RatioVerdict::ZeroSetMismatch { points: mismatched }
    } else {
        match rows.iter().rev().find(|r| r.max_value > T::zero()) {
            Some(r) => RatioVerdict::Certified { scale: r.multiplier },
            None => RatioVerdict::NoCertificate,
        }
    };
    Ok(RatioTable { rows, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn v(c: &[f64]) -> Vector<f64> {
        Vector::from_f64(c).unwrap()
    }

    fn unit_segment() -> (PlFormula<f64>, PlFormula<f64>) {
        build_witness(&Vector::zeros(2), &Frame::canonical(2, 1), &[1.0], Tolerances::default()).unwrap()
    }

    #[test]
    fn coordinates() {
        let x = v(&[1.0, 2.0, 3.0]);
        let full = Frame::canonical(3, 3);
        assert_eq!(frame_coordinates(&x, &x, &full).unwrap(), vec![0.0; 3]);
        assert_eq!(frame_coordinates(&v(&[2.0, 2.0, 3.0]), &x, &full).unwrap(), vec![1.0, 0.0, 0.0]);
        assert_eq!(
            frame_coordinates(&x, &x, &Frame::canonical(3, 2)),
            Err(Error::FrameNotFull { rank: 2, dim: 3 })
        );
    }

    #[test]
    fn segment_witness_values() {
        let (f1, f2) = unit_segment();
        assert_eq!(f1.eval(&v(&[0.5, 0.25])).unwrap(), 0.25);
        assert_eq!(f1.eval(&v(&[2.0, 0.0])).unwrap(), 1.0);
        assert_eq!(f1.eval(&v(&[-1.0, 0.5])).unwrap(), 1.5);
        assert_eq!(f2.eval(&v(&[0.0, 0.0])).unwrap(), 0.0);
        assert_eq!(f2.eval(&v(&[-0.5, 0.5])).unwrap(), 1.0);
    }

    #[test]
    fn triangle_f2_is_second_coordinate() {
        let (f1, f2) =
            build_witness(&Vector::zeros(2), &Frame::canonical(2, 2), &[1.0, 1.0], Tolerances::default()).unwrap();
        for i in 1..10 {
            for j in 1..i {
                let p = v(&[i as f64 / 10.0, j as f64 / 10.0]);
                assert_eq!(f1.eval(&p).unwrap(), 0.0);
                assert_abs_diff_eq!(f2.eval(&p).unwrap(), p[1], epsilon = 1e-12);
            }
        }
        for vert in f1.flag(Tolerances::default()).unwrap().vertices() {
            assert_eq!(f1.eval(&vert).unwrap(), 0.0);
        }
    }

    #[test]
    fn nonpositive_scale_is_rejected() {
        let r = build_witness(&Vector::zeros(2), &Frame::canonical(2, 1), &[0.0], Tolerances::default());
        assert!(matches!(r, Err(Error::NonPositiveScale { level: 1 })));
    }

    #[test]
    fn parabola_is_certified_and_segment_is_not() {
        let (f1, f2) = unit_segment();
        let mut pts = vec![v(&[0.0, 0.0])];
        pts.extend((1..=22).map(|i| {
            let t = 0.5f64.powi(i);
            v(&[t, t * t])
        }));
        let s = SampledSet::new(2, pts, None).unwrap();
        let table = ratio_table(&f1, &f2, &s, &default_multipliers(), 1e-10, ToleranceMode::Relative).unwrap();
        assert_eq!(table.certified(), Some(1_000_000));
        assert!(table.rows.iter().all(|r| r.max_value > 0.0));

        let seg = SampledSet::new(2, (0..=20).map(|i| v(&[i as f64 / 20.0, 0.0])).collect(), None).unwrap();
        let table = ratio_table(&f1, &f2, &seg, &default_multipliers(), 1e-10, ToleranceMode::Relative).unwrap();
        assert!(table.rows.iter().all(|r| r.max_value > 0.0));
        assert!(matches!(table.verdict, RatioVerdict::ZeroSetMismatch { .. }));
    }

    #[test]
    fn zero_f2_gives_no_certificate() {
        let (f1, mut f2) = unit_segment();
        f2.terms.clear();
        let s = SampledSet::new(2, vec![v(&[0.0, 0.0]), v(&[0.5, 0.5])], None).unwrap();
        let table = ratio_table(&f1, &f2, &s, &[1, 10], 1e-10, ToleranceMode::Absolute);
        // f2 = 0 everywhere while f1 is not: rows are nonpositive and zero sets differ.
        let table = table.unwrap();
        assert!(table.rows.iter().all(|r| r.max_value <= 0.0));
        assert_eq!(table.certified(), None);
    }

    #[test]
    fn multipliers_must_increase() {
        let (f1, f2) = unit_segment();
        let s = SampledSet::new(2, vec![v(&[0.0, 0.0]), v(&[0.5, 0.5])], None).unwrap();
        assert!(ratio_table(&f1, &f2, &s, &[10, 1], 1e-10, ToleranceMode::Absolute).is_err());
    }
}
