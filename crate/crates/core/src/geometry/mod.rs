//! Low-dimensional polyhedral geometry: projections, orthonormalization, simplices,
//! positive cones, ray casts and flag simplices.

mod flag;
mod frame;
mod simplex;
mod vector;

pub use flag::{
    find_flag_in_simplex, flag_membership, intersect_flags, intersect_flags_by_ray_casting,
    FlagSimplex,
};
pub use frame::{gram_schmidt, project_onto_span, Frame};
pub use simplex::{
    barycentric, in_cone, in_relint, max_step, smallest_face, BarycentricCoords, Simplex,
};
pub use vector::Vector;

use crate::scalar::Scalar;

/// Numerical tolerances shared by the geometric predicates.
///
/// Defaults are `1e-9` (orthogonality, barycentric, affine) and `1e-10` (rank),
/// raised to a few thousand ulps for low-precision scalars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    pub tol_orth: T,
    pub tol_bary: T,
    pub tol_aff: T,
    pub rank_tol: T,
}

impl<T: Scalar> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            tol_orth: T::tol_at_least(1e-9, 4096.0),
            tol_bary: T::tol_at_least(1e-9, 4096.0),
            tol_aff: T::tol_at_least(1e-9, 4096.0),
            rank_tol: T::tol_at_least(1e-10, 1024.0),
        }
    }
}
