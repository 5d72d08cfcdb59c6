use super::{Frame, Tolerances, Vector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Affine weights of a point with respect to the vertices of a simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricCoords<T> {
    pub weights: Vec<T>,
}

impl<T: Scalar> BarycentricCoords<T> {
    pub fn sum(&self) -> T {
        self.weights.iter().copied().sum()
    }

    /// All weights `>= -tol`.
    pub fn is_member(&self, tol: T) -> bool {
        self.weights.iter().all(|&w| w >= -tol)
    }

    /// All weights `> tol`.
    pub fn is_relint(&self, tol: T) -> bool {
        self.weights.iter().all(|&w| w > tol)
    }

    /// Indices of the weights exceeding `tol`.
    pub fn support(&self, tol: T) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > tol)
            .map(|(i, _)| i)
            .collect()
    }
}

/// A d-simplex `conv(v_0, ..., v_d)` in R^n with affinely independent vertices.
///
/// Construction factors the edge matrix `[v_1 - v_0, ..., v_d - v_0] = Q R` with `Q`
/// orthonormal; barycentric solves and ray casts reuse the factorization.
#[derive(Debug, Clone)]
pub struct Simplex<T> {
    vertices: Vec<Vector<T>>,
    tol: Tolerances<T>,
    edge_basis: Frame<T>,
    // Upper triangular, row-major, d x d.
    r: Vec<Vec<T>>,
}

impl<T: Scalar> PartialEq for Simplex<T> {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl<T: Scalar> Simplex<T> {
    pub fn new(vertices: Vec<Vector<T>>, tol: Tolerances<T>) -> Result<Self> {
        let Some(v0) = vertices.first() else {
            return Err(Error::Empty("simplex needs at least one vertex"));
        };
        let dim = v0.dim();
        for v in &vertices {
            v.check_dim(dim)?;
        }
        let d = vertices.len() - 1;
        if d > dim {
            return Err(Error::DegenerateSimplex);
        }
        let edges: Vec<Vector<T>> = vertices[1..].iter().map(|v| v - v0).collect();
        let edge_basis = if edges.is_empty() {
            Frame::empty(dim)
        } else {
            super::gram_schmidt(&edges, tol.rank_tol).map_err(|_| Error::DegenerateSimplex)?
        };
        let mut r = vec![vec![T::zero(); d]; d];
        for (j, e) in edges.iter().enumerate() {
            for (i, q) in edge_basis.vectors()[..=j].iter().enumerate() {
                r[i][j] = q.dot(e);
            }
        }
        Ok(Self {
            vertices,
            tol,
            edge_basis,
            r,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    /// Simplex dimension `d` (number of vertices minus one).
    #[inline]
    pub fn order(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vector<T>] {
        &self.vertices
    }

    pub fn tolerances(&self) -> &Tolerances<T> {
        &self.tol
    }

    /// Gram determinant of the edge vectors, `prod R_jj^2`.
    pub fn gram_determinant(&self) -> T {
        (0..self.order()).map(|j| self.r[j][j] * self.r[j][j]).fold(T::one(), |a, b| a * b)
    }

    /// The face spanned by the given vertex indices.
    pub fn face(&self, indices: &[usize]) -> Result<Self> {
        let verts = indices
            .iter()
            .map(|&i| self.vertices.get(i).cloned().ok_or(Error::NotInSimplex))
            .collect::<Result<Vec<_>>>()?;
        Self::new(verts, self.tol)
    }

    // Solves R c = y by back substitution.
    fn back_substitute(&self, y: &[T]) -> Vec<T> {
        let d = self.order();
        let mut c = vec![T::zero(); d];
        for j in (0..d).rev() {
            let mut acc = y[j];
            for l in j + 1..d {
                acc -= self.r[j][l] * c[l];
            }
            c[j] = acc / self.r[j][j];
        }
        c
    }

    // Edge-space coordinates of a displacement plus its off-hull residual norm.
    fn edge_coordinates(&self, w: &Vector<T>) -> (Vec<T>, T) {
        let y = self.edge_basis.coordinates(w).expect("dimension checked");
        let residual = self.edge_basis.reject(w).expect("dimension checked").norm();
        (self.back_substitute(&y), residual)
    }

    /// Barycentric coordinates of `p`. Fails when `p` is farther than `tol_aff` from
    /// the affine hull.
    pub fn barycentric(&self, p: &Vector<T>) -> Result<BarycentricCoords<T>> {
        p.check_dim(self.dim())?;
        let (c, residual) = self.edge_coordinates(&(p - &self.vertices[0]));
        if residual > self.tol.tol_aff {
            return Err(Error::OffAffineHull {
                distance: residual.to_f64().unwrap_or(f64::INFINITY),
            });
        }
        let mut weights = Vec::with_capacity(c.len() + 1);
        weights.push(T::one() - c.iter().copied().sum::<T>());
        weights.extend(c);
        Ok(BarycentricCoords { weights })
    }

    /// Barycentric membership within `tol_bary`.
    pub fn contains(&self, p: &Vector<T>) -> bool {
        self.barycentric(p)
            .map(|b| b.is_member(self.tol.tol_bary))
            .unwrap_or(false)
    }

    /// Whether `z` lies in the relative interior (all weights `> tol_bary`).
    pub fn in_relint(&self, z: &Vector<T>) -> bool {
        self.barycentric(z)
            .map(|b| b.is_relint(self.tol.tol_bary))
            .unwrap_or(false)
    }

    fn member_coords(&self, z: &Vector<T>) -> Result<BarycentricCoords<T>> {
        match self.barycentric(z) {
            Ok(b) if b.is_member(self.tol.tol_bary) => Ok(b),
            Ok(_) | Err(Error::OffAffineHull { .. }) => Err(Error::NotInSimplex),
            Err(e) => Err(e),
        }
    }

    /// Vertex indices of the smallest face containing `z`.
    pub fn smallest_face_indices(&self, z: &Vector<T>) -> Result<Vec<usize>> {
        Ok(self.member_coords(z)?.support(self.tol.tol_bary))
    }

    /// The smallest face of the simplex containing `z`; `z` lies in its relative interior.
    pub fn smallest_face(&self, z: &Vector<T>) -> Result<Self> {
        let idx = self.smallest_face_indices(z)?;
        self.face(&idx)
    }

    /// Largest `eta >= 0` with `z + eta * u` in the simplex (ratio test over the
    /// barycentric constraints). Returns 0 when `u` leaves the affine hull.
    pub fn max_step(&self, z: &Vector<T>, u: &Vector<T>) -> Result<T> {
        u.check_dim(self.dim())?;
        let bz = self.member_coords(z)?;
        let un = u.norm();
        if un == T::zero() {
            return Err(Error::Empty("max_step direction has zero length"));
        }
        let (du, off) = self.edge_coordinates(u);
        if off > self.tol.tol_aff * un {
            return Ok(T::zero());
        }
        let mut dirs = Vec::with_capacity(du.len() + 1);
        dirs.push(-du.iter().copied().sum::<T>());
        dirs.extend(du);
        let scale = dirs.iter().fold(T::zero(), |m, d| m.max(d.abs()));
        let threshold = -self.tol.tol_bary * scale;
        let mut eta = T::infinity();
        for (&w, &d) in bz.weights.iter().zip(&dirs) {
            if d < threshold {
                let w = if w <= self.tol.tol_bary { T::zero() } else { w };
                eta = eta.min(w / -d);
            }
        }
        // A bounded simplex always has a blocking constraint for a nonzero in-hull move.
        Ok(if eta.is_finite() { eta } else { T::zero() })
    }

    /// Membership of `y` in `Cone(T, x) = { y | x + rho (y - x) in T for some rho > 0 }`.
    pub fn in_cone(&self, x: &Vector<T>, y: &Vector<T>) -> Result<bool> {
        y.check_dim(self.dim())?;
        self.member_coords(x)?;
        let dir = y - x;
        if dir.norm() <= self.tol.tol_aff {
            return Ok(true);
        }
        Ok(self.max_step(x, &dir)? > T::zero())
    }
}

/// Free-function form of [`Simplex::barycentric`].
pub fn barycentric<T: Scalar>(t: &Simplex<T>, p: &Vector<T>) -> Result<BarycentricCoords<T>> {
    t.barycentric(p)
}

pub fn smallest_face<T: Scalar>(t: &Simplex<T>, z: &Vector<T>) -> Result<Simplex<T>> {
    t.smallest_face(z)
}

pub fn in_relint<T: Scalar>(f: &Simplex<T>, z: &Vector<T>) -> bool {
    f.in_relint(z)
}

pub fn in_cone<T: Scalar>(t: &Simplex<T>, x: &Vector<T>, y: &Vector<T>) -> Result<bool> {
    t.in_cone(x, y)
}

pub fn max_step<T: Scalar>(t: &Simplex<T>, z: &Vector<T>, u: &Vector<T>) -> Result<T> {
    t.max_step(z, u)
}
