use anyhow::{bail, Result};
use frenet_core::geometry::{gram_schmidt, intersect_flags, intersect_flags_by_ray_casting, FlagSimplex, Frame, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{read_json, write_json};
use crate::cli::IntersectArgs;
use crate::config::RunConfig;
use crate::exit;
use crate::report::{FlagVerification, FlagsReport, SCHEMA_VERSION};

fn random_frame(rng: &mut impl Rng, dim: usize, k: usize) -> Frame<f64> {
    loop {
        let vs: Vec<Vector<f64>> = (0..k)
            .map(|_| Vector::new((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()).expect("finite"))
            .collect();
        if let Ok(f) = gram_schmidt(&vs, 1e-3) {
            return f;
        }
    }
}

pub fn intersect(args: &IntersectArgs, cfg: &RunConfig, seed: u64) -> Result<i32> {
    let k = args.lambda.len();
    if args.mu.len() != k {
        bail!("flag simplices need the same number of levels: {} and {}", k, args.mu.len());
    }
    let tol = cfg.geometry();
    let dim = args
        .dim
        .or(args.base.as_ref().map(Vec::len))
        .unwrap_or(k);
    let base = match &args.base {
        Some(b) => Vector::new(b.clone())?,
        None => Vector::zeros(dim),
    };
    base.check_dim(dim)?;
    let frame = match &args.frame {
        Some(path) => {
            let vs: Vec<Vector<f64>> = read_json(path)?;
            Frame::new(dim, vs, tol.tol_orth)?
        }
        None if args.random_frame => random_frame(&mut ChaCha8Rng::seed_from_u64(seed), dim, k),
        None => {
            if k > dim {
                bail!("{k} levels do not fit in dimension {dim}");
            }
            Frame::canonical(dim, k)
        }
    };
    let a = FlagSimplex::new(base.clone(), frame.clone(), args.lambda.clone(), tol)?;
    let b = FlagSimplex::new(base.clone(), frame.clone(), args.mu.clone(), tol)?;
    let nu = intersect_flags(&a, &b)?.scales().to_vec();

    let verification = if args.verify {
        let ray = intersect_flags_by_ray_casting(&a, &b)?;
        let max_difference = nu.iter().zip(&ray).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let reach = nu.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        Some(FlagVerification {
            nu: ray,
            max_difference,
            agrees: max_difference <= tol.tol_aff * reach,
        })
    } else {
        None
    };
    let agrees = verification.as_ref().is_none_or(|v| v.agrees);
    let report = FlagsReport {
        schema_version: SCHEMA_VERSION,
        base,
        frame,
        lambda: args.lambda.clone(),
        mu: args.mu.clone(),
        nu,
        verification,
    };
    write_json(args.out.as_deref().or(cfg.outputs.report.as_deref()), &report)?;
    if !agrees {
        bail!("ray-casting recomputation disagrees with the closed form");
    }
    Ok(exit::OK)
}
