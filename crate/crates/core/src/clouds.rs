//! Ready-made sample clouds with labeled accumulation bases.

use crate::error::Result;
use crate::geometry::Vector;
use crate::scalar::Scalar;
use crate::tangent::SampledSet;

fn pt<T: Scalar>(c: &[f64]) -> Vector<T> {
    Vector::from_f64(c).expect("finite coordinates")
}

/// The origin, the axis points `(1/n, 0)` and the parabola points `(1/n, 1/n^2)` for
/// `n = 1..=count`; base at the origin.
pub fn axis_and_parabola<T: Scalar>(count: usize) -> Result<SampledSet<T>> {
    let mut points = vec![pt(&[0.0, 0.0])];
    for n in 1..=count {
        let t = 1.0 / n as f64;
        points.push(pt(&[t, 0.0]));
        points.push(pt(&[t, t * t]));
    }
    SampledSet::new(2, points, Some(vec![pt(&[0.0, 0.0])]))
}

/// The origin and `(t, t^2)` for `t = 2^-i`, `i = 1..=depth`; base at the origin.
pub fn parabola_arc<T: Scalar>(depth: usize) -> Result<SampledSet<T>> {
    let mut points = vec![pt(&[0.0, 0.0])];
    points.extend((1..=depth).map(|i| {
        let t = 0.5f64.powi(i as i32);
        pt(&[t, t * t])
    }));
    SampledSet::new(2, points, Some(vec![pt(&[0.0, 0.0])]))
}

/// Points of the segment from the origin to `(1, 0)` accumulating geometrically at both
/// endpoints; bases at the endpoints.
pub fn unit_segment<T: Scalar>(depth: usize) -> Result<SampledSet<T>> {
    polyline(&[[0.0, 0.0], [1.0, 0.0]], depth, false)
}

/// Boundary of the polygon with the given vertices (in order), sampled geometrically
/// towards every vertex and every edge midpoint from both sides; those are the bases.
pub fn polygon_boundary<T: Scalar>(vertices: &[[f64; 2]], depth: usize) -> Result<SampledSet<T>> {
    polyline(vertices, depth, true)
}

fn polyline<T: Scalar>(vertices: &[[f64; 2]], depth: usize, closed: bool) -> Result<SampledSet<T>> {
    let mut points = Vec::new();
    let mut bases = Vec::new();
    let edges = if closed { vertices.len() } else { vertices.len() - 1 };
    let lerp = |a: [f64; 2], b: [f64; 2], f: f64| [a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])];
    for v in vertices {
        points.push(pt(v));
    }
    for &v in vertices.iter().take(if closed { vertices.len() } else { 0 }) {
        bases.push(pt(&v));
    }
    if !closed {
        bases.extend(vertices.iter().map(|v| pt(v)));
    }
    for e in 0..edges {
        let a = vertices[e];
        let b = vertices[(e + 1) % vertices.len()];
        let mid = lerp(a, b, 0.5);
        points.push(pt(&mid));
        if closed {
            bases.push(pt(&mid));
        }
        for i in 2..=depth + 1 {
            let f = 0.5f64.powi(i as i32);
            points.push(pt(&lerp(a, b, f)));
            points.push(pt(&lerp(b, a, f)));
            if i >= 3 {
                points.push(pt(&lerp(a, b, 0.5 + f)));
                points.push(pt(&lerp(a, b, 0.5 - f)));
            }
        }
    }
    SampledSet::new(2, points, Some(bases))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(axis_and_parabola::<f64>(200).unwrap().len(), 401);
        assert_eq!(parabola_arc::<f64>(12).unwrap().len(), 13);
        let tri = polygon_boundary::<f64>(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], 12).unwrap();
        assert_eq!(tri.bases().unwrap().len(), 6);
        assert_eq!(unit_segment::<f64>(12).unwrap().bases().unwrap().len(), 2);
    }
}
