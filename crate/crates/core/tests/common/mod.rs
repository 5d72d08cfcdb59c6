#![allow(dead_code)]

use frenet_core::geometry::{gram_schmidt, FlagSimplex, Frame, Simplex, Tolerances, Vector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn v(c: &[f64]) -> Vector<f64> {
    Vector::from_f64(c).unwrap()
}

pub fn random_vector(rng: &mut impl Rng, n: usize, scale: f64) -> Vector<f64> {
    Vector::new((0..n).map(|_| rng.gen_range(-scale..scale)).collect()).unwrap()
}

/// A random orthonormal k-frame in R^n.
pub fn random_frame(rng: &mut impl Rng, n: usize, k: usize) -> Frame<f64> {
    loop {
        let vs: Vec<_> = (0..k).map(|_| random_vector(rng, n, 1.0)).collect();
        if let Ok(f) = gram_schmidt(&vs, 1e-3) {
            return f;
        }
    }
}

fn det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).unwrap();
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    d
}

/// A proper rotation of R^n; `apply` maps a vector by it.
#[derive(Clone)]
pub struct Rotation {
    rows: Vec<Vec<f64>>,
}

impl Rotation {
    pub fn random(rng: &mut impl Rng, n: usize) -> Self {
        let f = random_frame(rng, n, n);
        let mut rows: Vec<Vec<f64>> = f.vectors().iter().map(|u| u.to_f64()).collect();
        if det(rows.clone()) < 0.0 {
            for x in &mut rows[0] {
                *x = -*x;
            }
        }
        Self { rows }
    }

    pub fn apply(&self, p: &Vector<f64>) -> Vector<f64> {
        Vector::new(self.rows.iter().map(|r| r.iter().zip(p.iter()).map(|(a, b)| a * b).sum()).collect()).unwrap()
    }
}

/// `R p + b`.
pub fn rigid<'a>(rot: &'a Rotation, shift: &Vector<f64>) -> impl Fn(&Vector<f64>) -> Vector<f64> + 'a {
    let shift = shift.clone();
    move |p| &rot.apply(p) + &shift
}

pub fn random_flag(rng: &mut impl Rng, n: usize, k: usize) -> FlagSimplex<f64> {
    let base = random_vector(rng, n, 1.0);
    let frame = random_frame(rng, n, k);
    let scales = (0..k).map(|_| rng.gen_range(0.1..2.0)).collect();
    FlagSimplex::new(base, frame, scales, Tolerances::default()).unwrap()
}

pub fn same_flag_with(flag: &FlagSimplex<f64>, scales: Vec<f64>) -> FlagSimplex<f64> {
    FlagSimplex::new(flag.base().clone(), flag.frame().clone(), scales, Tolerances::default()).unwrap()
}

/// Random convex weights of the given length (with occasional exact zeros).
pub fn convex_weights(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..m).map(|_| if rng.gen_bool(0.15) { 0.0 } else { rng.gen::<f64>() }).collect();
    if w.iter().all(|&x| x == 0.0) {
        w[0] = 1.0;
    }
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    w
}

pub fn combine(points: &[Vector<f64>], w: &[f64]) -> Vector<f64> {
    let mut out = Vector::zeros(points[0].dim());
    for (p, &c) in points.iter().zip(w) {
        out = &out + &p.scaled(c);
    }
    out
}

/// A random non-degenerate simplex of dimension d in R^n.
pub fn random_simplex(rng: &mut impl Rng, n: usize, d: usize) -> Simplex<f64> {
    loop {
        let verts: Vec<_> = (0..=d).map(|_| random_vector(rng, n, 1.0)).collect();
        let Ok(s) = Simplex::new(verts, Tolerances::default()) else { continue };
        if s.gram_determinant() > 1e-3 {
            return s;
        }
    }
}
