use super::SampledSet;
use crate::geometry::Vector;
use crate::scalar::Scalar;

/// Euclidean distance from `p` to the convex hull of `points` (Wolfe's minimum-norm-point
/// algorithm on the translated points `q - p`).
pub fn distance_to_hull<T: Scalar>(p: &Vector<T>, points: &[&Vector<T>]) -> T {
    if points.is_empty() {
        return T::infinity();
    }
    let q: Vec<Vector<T>> = points.iter().map(|v| *v - p).collect();
    min_norm_point(&q).norm()
}

/// Indices of the points that are not convex combinations of the others. Points that
/// coincide up to `tol` are merged first; the lowest index represents them.
pub fn extreme_points<T: Scalar>(set: &SampledSet<T>, tol: T) -> Vec<usize> {
    extreme_points_of(set.points(), tol)
}

pub(crate) fn extreme_points_of<T: Scalar>(points: &[Vector<T>], tol: T) -> Vec<usize> {
    let scale = points.iter().map(|p| p.max_abs()).fold(T::one(), T::max);
    let merge = tol * scale;
    let mut reps: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if !reps.iter().any(|&r| points[r].distance(p) <= merge) {
            reps.push(i);
        }
    }
    if reps.len() <= 2 {
        return reps;
    }
    reps.iter()
        .copied()
        .filter(|&i| {
            let others: Vec<&Vector<T>> = reps.iter().filter(|&&j| j != i).map(|&j| &points[j]).collect();
            distance_to_hull(&points[i], &others) > merge
        })
        .collect()
}

/// Minimum-norm point of `conv(q)`.
fn min_norm_point<T: Scalar>(q: &[Vector<T>]) -> Vector<T> {
    let n = q.len();
    let scale2 = q.iter().map(|v| v.norm_squared()).fold(T::zero(), T::max);
    let eps = T::epsilon() * T::lit(64.0);
    let start = (0..n)
        .min_by(|&a, &b| q[a].norm_squared().partial_cmp(&q[b].norm_squared()).expect("finite"))
        .expect("non-empty");
    let mut support = vec![start];
    let mut weights = vec![T::one()];
    let mut x = q[start].clone();
    let tiny = eps * eps * scale2;
    for _ in 0..(10 * n + 100) {
        if x.norm_squared() <= tiny {
            break;
        }
        let (j, best) = (0..n)
            .map(|k| (k, x.dot(&q[k])))
            .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite"))
            .expect("non-empty");
        if x.norm_squared() - best <= tiny || support.contains(&j) {
            break;
        }
        support.push(j);
        weights.push(T::zero());
        // Minor cycles: move towards the affine minimizer over the support, dropping
        // points whose weight reaches zero.
        loop {
            let Some(alpha) = affine_min_norm(q, &support) else {
                break;
            };
            if alpha.iter().all(|&a| a > eps) {
                weights = alpha;
                break;
            }
            let mut theta = T::one();
            for (w, a) in weights.iter().zip(&alpha) {
                if *a <= eps && *w - *a > T::zero() {
                    theta = theta.min(*w / (*w - *a));
                }
            }
            for (w, a) in weights.iter_mut().zip(&alpha) {
                *w = theta * *a + (T::one() - theta) * *w;
            }
            let mut keep = 0;
            for i in 0..support.len() {
                if weights[i] > eps {
                    support[keep] = support[i];
                    weights[keep] = weights[i];
                    keep += 1;
                }
            }
            support.truncate(keep);
            weights.truncate(keep);
            if support.len() <= 1 {
                weights = vec![T::one(); support.len()];
                break;
            }
        }
        let total: T = weights.iter().copied().sum();
        let mut next = Vector::zeros(x.dim());
        for (&s, &w) in support.iter().zip(&weights) {
            next.axpy_in_place(w / total, &q[s]);
        }
        if next.norm_squared() >= x.norm_squared() {
            break;
        }
        x = next;
    }
    x
}

/// Weights `a` with `sum a = 1` minimizing `||sum a_i q_{s_i}||`: least squares on the
/// edge vectors `q_{s_i} - q_{s_0}` by modified Gram–Schmidt. `None` if the support is
/// affinely dependent.
fn affine_min_norm<T: Scalar>(q: &[Vector<T>], support: &[usize]) -> Option<Vec<T>> {
    let m = support.len();
    let origin = &q[support[0]];
    let mut cols: Vec<Vector<T>> = support[1..].iter().map(|&s| &q[s] - origin).collect();
    let mut r = vec![vec![T::zero(); m - 1]; m - 1];
    for j in 0..cols.len() {
        let size = cols[j].norm();
        for i in 0..j {
            let c = cols[i].dot(&cols[j]);
            r[i][j] = c;
            let qi = cols[i].clone();
            cols[j].axpy_in_place(-c, &qi);
        }
        let rn = cols[j].norm();
        if rn <= T::epsilon() * T::lit(1e4) * size || rn == T::zero() {
            return None;
        }
        r[j][j] = rn;
        cols[j] = cols[j].scaled(T::one() / rn);
    }
    // Solve R b = -Q^T origin.
    let rhs: Vec<T> = cols.iter().map(|c| -c.dot(origin)).collect();
    let mut b = vec![T::zero(); m - 1];
    for i in (0..m - 1).rev() {
        let mut v = rhs[i];
        for j in i + 1..m - 1 {
            v -= r[i][j] * b[j];
        }
        b[i] = v / r[i][i];
    }
    let mut alpha = Vec::with_capacity(m);
    alpha.push(T::one() - b.iter().copied().sum::<T>());
    alpha.extend(b);
    Some(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pts(c: &[[f64; 2]]) -> Vec<Vector<f64>> {
        c.iter().map(|p| Vector::from_f64(p).unwrap()).collect()
    }

    #[test]
    fn square_with_midpoints() {
        let p = pts(&[
            [0.0, 0.0],
            [0.5, 0.0],
            [1.0, 0.0],
            [1.0, 0.5],
            [1.0, 1.0],
            [0.5, 1.0],
            [0.0, 1.0],
            [0.0, 0.5],
        ]);
        assert_eq!(extreme_points_of(&p, 1e-9), vec![0, 2, 4, 6]);
    }

    #[test]
    fn circle_points_are_all_extreme() {
        let p: Vec<Vector<f64>> = (0..50)
            .map(|i| {
                let a = i as f64 * std::f64::consts::TAU / 50.0;
                Vector::from_f64(&[a.cos(), a.sin()]).unwrap()
            })
            .collect();
        assert_eq!(extreme_points_of(&p, 1e-9).len(), 50);
    }

    #[test]
    fn collinear_endpoints() {
        let p = pts(&[[0.0, 0.0], [2.0, 2.0], [1.0, 1.0]]);
        assert_eq!(extreme_points_of(&p, 1e-9), vec![0, 1]);
    }

    #[test]
    fn duplicates_are_merged() {
        let p = pts(&[[0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 1.0]]);
        assert_eq!(extreme_points_of(&p, 1e-9), vec![0, 1, 3]);
    }

    #[test]
    fn distance_to_triangle() {
        let t = pts(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        let refs: Vec<&Vector<f64>> = t.iter().collect();
        let d = distance_to_hull(&Vector::from_f64(&[1.0, 1.0]).unwrap(), &refs);
        assert_abs_diff_eq!(d, 0.5f64.sqrt(), epsilon = 1e-12);
        let d = distance_to_hull(&Vector::from_f64(&[-1.0, -2.0]).unwrap(), &refs);
        assert_abs_diff_eq!(d, 5f64.sqrt(), epsilon = 1e-12);
        let d = distance_to_hull(&Vector::from_f64(&[0.2, 0.2]).unwrap(), &refs);
        assert_abs_diff_eq!(d, 0.0, epsilon = 1e-12);
    }
}
