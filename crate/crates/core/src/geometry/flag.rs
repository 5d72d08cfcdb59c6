use super::{Frame, Simplex, Tolerances, Vector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The simplex `conv(x, x + l_1 u_1, ..., x + l_1 u_1 + ... + l_k u_k)` spanned by a
/// base point, an orthonormal frame and strictly positive scales.
///
/// In frame coordinates `s_i = <p - x, u_i>` a point belongs to it iff it has no
/// component off the span of the frame and
/// `0 <= s_k / l_k <= s_{k-1} / l_{k-1} <= ... <= s_1 / l_1 <= 1`.
/// `k = 0` is the single point `{x}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlagSimplex<T> {
    base: Vector<T>,
    frame: Frame<T>,
    scales: Vec<T>,
    tol: Tolerances<T>,
}

impl<T: Scalar> FlagSimplex<T> {
    pub fn new(base: Vector<T>, frame: Frame<T>, scales: Vec<T>, tol: Tolerances<T>) -> Result<Self> {
        base.check_dim(frame.dim())?;
        if scales.len() != frame.len() {
            return Err(Error::DimensionMismatch {
                expected: frame.len(),
                found: scales.len(),
            });
        }
        if let Some(level) = scales.iter().position(|&l| !(l > T::zero() && l.is_finite())) {
            return Err(Error::NonPositiveScale { level: level + 1 });
        }
        if frame.orthonormality_defect() > tol.tol_orth {
            return Err(Error::NotOrthonormal);
        }
        let flag = Self {
            base,
            frame,
            scales,
            tol,
        };
        // Orthonormal frame plus positive scales makes the vertices affinely
        // independent; checked anyway.
        debug_assert!(flag.to_simplex().is_ok());
        Ok(flag)
    }

    pub fn base(&self) -> &Vector<T> {
        &self.base
    }

    pub fn frame(&self) -> &Frame<T> {
        &self.frame
    }

    pub fn scales(&self) -> &[T] {
        &self.scales
    }

    pub fn levels(&self) -> usize {
        self.scales.len()
    }

    pub fn tolerances(&self) -> &Tolerances<T> {
        &self.tol
    }

    /// `x, x + l_1 u_1, ..., x + sum l_i u_i`.
    pub fn vertices(&self) -> Vec<Vector<T>> {
        let mut out = Vec::with_capacity(self.levels() + 1);
        let mut z = self.base.clone();
        out.push(z.clone());
        for (u, &l) in self.frame.vectors().iter().zip(&self.scales) {
            z.axpy_in_place(l, u);
            out.push(z.clone());
        }
        out
    }

    /// The vertex-list simplex of the same set.
    pub fn to_simplex(&self) -> Result<Simplex<T>> {
        Simplex::new(self.vertices(), self.tol)
    }

    /// The facet obtained by dropping the last level.
    pub fn facet(&self) -> Self {
        let k = self.levels().saturating_sub(1);
        Self {
            base: self.base.clone(),
            frame: self.frame.prefix(k),
            scales: self.scales[..k].to_vec(),
            tol: self.tol,
        }
    }

    /// The first `j` levels.
    pub fn truncated(&self, j: usize) -> Self {
        let j = j.min(self.levels());
        Self {
            base: self.base.clone(),
            frame: self.frame.prefix(j),
            scales: self.scales[..j].to_vec(),
            tol: self.tol,
        }
    }

    /// Frame coordinates `s_i` of `p` and the norm of its component off the frame span.
    pub fn chain_coordinates(&self, p: &Vector<T>) -> Result<(Vec<T>, T)> {
        let d = p - &self.base;
        let s = self.frame.coordinates(&d)?;
        let off = self.frame.reject(&d)?.norm();
        Ok((s, off))
    }

    /// Worst violation (in length units) of the chain inequalities and the span
    /// condition; `p` is a member iff this is `<= tol`.
    pub fn chain_violation(&self, p: &Vector<T>) -> Result<T> {
        let (s, off) = self.chain_coordinates(p)?;
        let k = self.levels();
        let mut worst = off;
        if k == 0 {
            return Ok(worst);
        }
        worst = worst.max(-s[k - 1]);
        for i in 0..k - 1 {
            worst = worst.max(s[i + 1] - self.scales[i + 1] / self.scales[i] * s[i]);
        }
        worst = worst.max(s[0] - self.scales[0]);
        Ok(worst)
    }

    /// Chain-description membership with an explicit tolerance.
    pub fn contains_within(&self, p: &Vector<T>, tol: T) -> bool {
        self.chain_violation(p).map(|v| v <= tol).unwrap_or(false)
    }

    /// Chain-description membership within `tol_aff`.
    pub fn contains(&self, p: &Vector<T>) -> bool {
        self.contains_within(p, self.tol.tol_aff)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.levels() != other.levels() {
            return Err(Error::MismatchedFlags(format!(
                "level counts {} and {}",
                self.levels(),
                other.levels()
            )));
        }
        if self.base.dim() != other.base.dim() {
            return Err(Error::MismatchedFlags("ambient dimensions differ".into()));
        }
        if self.base.distance(&other.base) > self.tol.tol_aff {
            return Err(Error::MismatchedFlags("base points differ".into()));
        }
        let same_frame = self
            .frame
            .vectors()
            .iter()
            .zip(other.frame.vectors())
            .all(|(a, b)| a.distance(b) <= self.tol.tol_orth);
        if !same_frame {
            return Err(Error::MismatchedFlags("frames differ".into()));
        }
        Ok(())
    }
}

/// Membership of `p` in the flag simplex via its chain description.
pub fn flag_membership<T: Scalar>(flag: &FlagSimplex<T>, p: &Vector<T>) -> bool {
    flag.contains(p)
}

/// Intersection of two flag simplices over the same base and frame.
///
/// The result is again a flag simplex: `nu_1 = min(l_1, m_1)` and
/// `nu_t = nu_{t-1} * min(l_t / l_{t-1}, m_t / m_{t-1})`.
pub fn intersect_flags<T: Scalar>(a: &FlagSimplex<T>, b: &FlagSimplex<T>) -> Result<FlagSimplex<T>> {
    a.check_compatible(b)?;
    let (l, m) = (a.scales(), b.scales());
    let mut nu: Vec<T> = Vec::with_capacity(l.len());
    for t in 0..l.len() {
        let next = if t == 0 {
            l[0].min(m[0])
        } else {
            nu[t - 1] * (l[t] / l[t - 1]).min(m[t] / m[t - 1])
        };
        nu.push(next);
    }
    FlagSimplex::new(a.base.clone(), a.frame.clone(), nu, a.tol)
}

/// The same intersection computed level by level with ray casts: from the running top
/// vertex `z`, `nu_t` is the smaller of the largest steps along `u_t` that stay in
/// the level-`t` simplices of `a` and `b`.
pub fn intersect_flags_by_ray_casting<T: Scalar>(
    a: &FlagSimplex<T>,
    b: &FlagSimplex<T>,
) -> Result<Vec<T>> {
    a.check_compatible(b)?;
    let mut z = a.base.clone();
    let mut nu = Vec::with_capacity(a.levels());
    for t in 0..a.levels() {
        let u = &a.frame.vectors()[t];
        let ua = a.truncated(t + 1).to_simplex()?;
        let vb = b.truncated(t + 1).to_simplex()?;
        let eta = ua.max_step(&z, u)?.min(vb.max_step(&z, u)?);
        z.axpy_in_place(eta, u);
        nu.push(eta);
    }
    Ok(nu)
}

/// Builds a flag simplex on `frame` at `x` contained in `t`, halving the largest
/// admissible step at every level.
///
/// Fails with [`Error::NoPositiveStep`] at the first level where the running top
/// vertex cannot move along the next frame vector.
pub fn find_flag_in_simplex<T: Scalar>(
    t: &Simplex<T>,
    x: &Vector<T>,
    frame: &Frame<T>,
) -> Result<FlagSimplex<T>> {
    x.check_dim(t.dim())?;
    if frame.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            found: frame.dim(),
        });
    }
    if !t.contains(x) {
        return Err(Error::NotInSimplex);
    }
    let half = T::lit(0.5);
    let mut z = x.clone();
    let mut scales = Vec::with_capacity(frame.len());
    for (level, u) in frame.vectors().iter().enumerate() {
        let step = t.max_step(&z, u)?;
        if step <= T::zero() {
            return Err(Error::NoPositiveStep { level: level + 1 });
        }
        let lambda = step * half;
        z.axpy_in_place(lambda, u);
        scales.push(lambda);
    }
    FlagSimplex::new(x.clone(), frame.clone(), scales, *t.tolerances())
}
