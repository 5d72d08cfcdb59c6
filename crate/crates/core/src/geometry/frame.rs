use serde::{Deserialize, Serialize};

use super::Vector;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An ordered tuple `(u_1, ..., u_k)` of pairwise orthogonal unit vectors in R^n.
///
/// `k = 0` is allowed and stands for the zero subspace (the empty prefix).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frame<T> {
    dim: usize,
    vectors: Vec<Vector<T>>,
}

impl<T: Scalar> Frame<T> {
    /// Validates orthonormality within `tol_orth`.
    pub fn new(dim: usize, vectors: Vec<Vector<T>>, tol_orth: T) -> Result<Self> {
        if vectors.len() > dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: vectors.len(),
            });
        }
        for v in &vectors {
            v.check_dim(dim)?;
        }
        for (i, a) in vectors.iter().enumerate() {
            if (a.norm() - T::one()).abs() > tol_orth {
                return Err(Error::NotOrthonormal);
            }
            for b in &vectors[..i] {
                if a.dot(b).abs() > tol_orth {
                    return Err(Error::NotOrthonormal);
                }
            }
        }
        Ok(Self { dim, vectors })
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            vectors: Vec::new(),
        }
    }

    /// `(e_1, ..., e_k)` in R^dim.
    pub fn canonical(dim: usize, k: usize) -> Self {
        Self {
            dim,
            vectors: (0..k.min(dim)).map(|i| Vector::basis(dim, i)).collect(),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vector<T>] {
        &self.vectors
    }

    pub fn get(&self, i: usize) -> Option<&Vector<T>> {
        self.vectors.get(i)
    }

    pub fn into_vectors(self) -> Vec<Vector<T>> {
        self.vectors
    }

    /// The first `j` vectors.
    pub fn prefix(&self, j: usize) -> Self {
        Self {
            dim: self.dim,
            vectors: self.vectors[..j.min(self.len())].to_vec(),
        }
    }

    pub(crate) fn push_unchecked(&mut self, v: Vector<T>) {
        debug_assert_eq!(v.dim(), self.dim);
        self.vectors.push(v);
    }

    /// Orthogonal projection onto the span of the frame.
    pub fn project(&self, v: &Vector<T>) -> Result<Vector<T>> {
        v.check_dim(self.dim)?;
        let mut out = Vector::zeros(self.dim);
        for u in &self.vectors {
            out.axpy_in_place(v.dot(u), u);
        }
        Ok(out)
    }

    /// Component of `v` orthogonal to the span of the frame.
    ///
    /// Uses two passes of modified Gram–Schmidt so the result stays orthogonal to
    /// every frame vector even when `v` is nearly inside the span.
    pub fn reject(&self, v: &Vector<T>) -> Result<Vector<T>> {
        v.check_dim(self.dim)?;
        let mut r = v.clone();
        for _ in 0..2 {
            for u in &self.vectors {
                let c = r.dot(u);
                r.axpy_in_place(-c, u);
            }
        }
        Ok(r)
    }

    /// Coordinates `<v, u_i>` in frame order.
    pub fn coordinates(&self, v: &Vector<T>) -> Result<Vec<T>> {
        v.check_dim(self.dim)?;
        Ok(self.vectors.iter().map(|u| v.dot(u)).collect())
    }

    /// Largest deviation from orthonormality, `max(|<u_i,u_j>|, | ||u_i|| - 1 |)`.
    pub fn orthonormality_defect(&self) -> T {
        let mut worst = T::zero();
        for (i, a) in self.vectors.iter().enumerate() {
            worst = worst.max((a.norm() - T::one()).abs());
            for b in &self.vectors[..i] {
                worst = worst.max(a.dot(b).abs());
            }
        }
        worst
    }

    /// Completes the frame to an orthonormal basis of R^n by adjoining canonical basis
    /// vectors in index order, skipping those nearly inside the current span.
    pub fn extend_to_basis(&self) -> Self {
        let mut full = self.clone();
        // Threshold well above rounding noise, well below the 1/sqrt(n) that some
        // canonical vector is guaranteed to leave over.
        let keep = T::lit(0.5) / T::lit(self.dim as f64).sqrt();
        for i in 0..self.dim {
            if full.len() == self.dim {
                break;
            }
            let e = Vector::basis(self.dim, i);
            let r = full.reject(&e).expect("dimension matches");
            let n = r.norm();
            if n > keep {
                full.push_unchecked(r.scaled(T::one() / n));
            }
        }
        debug_assert_eq!(full.len(), self.dim);
        full
    }

    /// Applies a linear map (given by its action on vectors) to every frame vector.
    pub fn map<F: Fn(&Vector<T>) -> Vector<T>>(&self, f: F) -> Self {
        Self {
            dim: self.dim,
            vectors: self.vectors.iter().map(f).collect(),
        }
    }

    /// Largest angle (radians) between corresponding vectors of two frames.
    pub fn max_angle_to(&self, other: &Self) -> T {
        self.vectors
            .iter()
            .zip(&other.vectors)
            .map(|(a, b)| a.angle_to(b))
            .fold(T::zero(), T::max)
    }
}

/// `sum_j <v, u_j> u_j`, the orthogonal projection of `v` onto the span of `prefix`.
pub fn project_onto_span<T: Scalar>(v: &Vector<T>, prefix: &Frame<T>) -> Result<Vector<T>> {
    prefix.project(v)
}

/// Orthonormalizes `vectors` in order, preserving the flag of spans.
///
/// Fails with [`Error::RankDeficient`] at the first (1-based) index whose residual
/// against the previous vectors has norm at most `rank_tol * ||v_j||`.
pub fn gram_schmidt<T: Scalar>(vectors: &[Vector<T>], rank_tol: T) -> Result<Frame<T>> {
    let Some(first) = vectors.first() else {
        return Err(Error::Empty("gram_schmidt needs at least one vector"));
    };
    let dim = first.dim();
    let mut frame = Frame::empty(dim);
    for (j, v) in vectors.iter().enumerate() {
        v.check_dim(dim)?;
        let size = v.norm();
        let r = frame.reject(v)?;
        let rn = r.norm();
        if size == T::zero() || rn <= rank_tol * size || frame.len() == dim {
            return Err(Error::RankDeficient { index: j + 1 });
        }
        frame.push_unchecked(r.scaled(T::one() / rn));
    }
    Ok(frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn v(c: &[f64]) -> Vector<f64> {
        Vector::from_f64(c).unwrap()
    }

    #[test]
    fn projection_examples() {
        let e1 = Frame::canonical(2, 1);
        assert_eq!(project_onto_span(&v(&[3.0, 4.0]), &e1).unwrap(), v(&[3.0, 0.0]));
        assert_eq!(
            project_onto_span(&v(&[1.0, 1.0, 1.0]), &Frame::empty(3)).unwrap(),
            v(&[0.0, 0.0, 0.0])
        );
        let s = 0.5f64.sqrt();
        let diag = Frame::new(2, vec![v(&[s, s])], 1e-9).unwrap();
        let p = project_onto_span(&v(&[1.0, 2.0]), &diag).unwrap();
        // Least-squares oracle: argmin_c ||(1,2) - c (1,1)|| has c = 3/2.
        assert_abs_diff_eq!(p[0], 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p[1], 1.5, epsilon = 1e-15);
    }

    #[test]
    fn projection_dimension_mismatch() {
        let e1 = Frame::<f64>::canonical(2, 1);
        assert!(matches!(
            project_onto_span(&v(&[1.0, 2.0, 3.0]), &e1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn gram_schmidt_examples() {
        let f = gram_schmidt(&[v(&[2.0, 0.0]), v(&[1.0, 3.0])], 1e-10).unwrap();
        assert_eq!(f.vectors(), &[v(&[1.0, 0.0]), v(&[0.0, 1.0])]);

        assert_eq!(
            gram_schmidt(&[v(&[1.0, 0.0]), v(&[2.0, 0.0])], 1e-10),
            Err(Error::RankDeficient { index: 2 })
        );

        let f = gram_schmidt(&[v(&[1.0, 1.0, 0.0]), v(&[0.0, 1.0, 1.0])], 1e-10).unwrap();
        let (a, b) = (1.0 / 2f64.sqrt(), 1.0 / 6f64.sqrt());
        let expect = [v(&[a, a, 0.0]), v(&[-b, b, 2.0 * b])];
        for (got, want) in f.vectors().iter().zip(&expect) {
            for i in 0..3 {
                assert_abs_diff_eq!(got[i], want[i], epsilon = 1e-15);
            }
        }
        assert!(f.orthonormality_defect() < 1e-15);
    }

    #[test]
    fn zero_vector_is_rank_deficient() {
        assert_eq!(
            gram_schmidt(&[v(&[0.0, 0.0])], 1e-10),
            Err(Error::RankDeficient { index: 1 })
        );
    }

    #[test]
    fn frame_rejects_non_orthonormal() {
        assert_eq!(
            Frame::new(2, vec![v(&[1.0, 0.0]), v(&[1.0, 1.0])], 1e-9),
            Err(Error::NotOrthonormal)
        );
    }

    #[test]
    fn basis_extension_is_orthonormal_and_keeps_prefix() {
        let f = gram_schmidt(&[v(&[1.0, 1.0, 0.0]), v(&[0.0, 1.0, 1.0])], 1e-10).unwrap();
        let full = f.extend_to_basis();
        assert_eq!(full.len(), 3);
        assert_eq!(&full.vectors()[..2], f.vectors());
        assert!(full.orthonormality_defect() < 1e-14);
    }

    #[test]
    fn works_in_single_precision() {
        let f = gram_schmidt(
            &[
                Vector::<f32>::from_f64(&[1.0, 1.0, 0.0]).unwrap(),
                Vector::<f32>::from_f64(&[0.0, 1.0, 1.0]).unwrap(),
            ],
            1e-5,
        )
        .unwrap();
        assert!(f.orthonormality_defect() < 1e-6);
    }
}
