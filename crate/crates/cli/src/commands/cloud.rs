use anyhow::{bail, Result};
use frenet_core::clouds;
use frenet_core::geometry::Vector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{parse_rows, write_json};
use crate::cli::{CloudArgs, CloudKind};
use crate::exit;

pub fn run(args: &CloudArgs, seed: u64) -> Result<i32> {
    let mut set = match args.kind {
        CloudKind::AxisParabola => clouds::axis_and_parabola::<f64>(args.count)?,
        CloudKind::ParabolaArc => clouds::parabola_arc::<f64>(args.depth)?,
        CloudKind::Segment => clouds::unit_segment::<f64>(args.depth)?,
        CloudKind::Polygon => {
            let rows = match &args.vertices {
                Some(text) => parse_rows(text)?,
                None => vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
            };
            if rows.len() < 3 || rows.iter().any(|r| r.len() != 2) {
                bail!("--vertices needs at least three planar points");
            }
            let verts: Vec<[f64; 2]> = rows.iter().map(|r| [r[0], r[1]]).collect();
            clouds::polygon_boundary::<f64>(&verts, args.depth)?
        }
    };
    if args.jitter < 0.0 || !args.jitter.is_finite() {
        bail!("--jitter must be a non-negative number");
    }
    if args.jitter > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noisy: Vec<Vec<f64>> = set
            .points()
            .iter()
            .map(|p| p.iter().map(|&x| x + rng.gen_range(-args.jitter..=args.jitter)).collect())
            .collect();
        set = frenet_core::tangent::SampledSet::new(
            set.dim(),
            noisy.into_iter().map(Vector::new).collect::<frenet_core::Result<_>>()?,
            set.bases().map(<[_]>::to_vec),
        )?;
    }
    if args.no_bases {
        set = set.with_bases(None)?;
    }
    write_json(args.out.as_deref(), &set)?;
    Ok(exit::OK)
}
