use anyhow::{bail, Context, Result};
use frenet_core::estimator::{sample_curve, CurveSpec, Phase, SamplePlan};

use super::{parse_rows, write_json};
use crate::cli::{CurveKind, PhaseArg, SampleArgs};
use crate::exit;

pub fn sample(args: &SampleArgs) -> Result<i32> {
    let phase = match args.phase {
        PhaseArg::Plain => Phase::Plain,
        PhaseArg::Peaks => Phase::Peaks,
        PhaseArg::Troughs => Phase::Troughs,
        PhaseArg::Mixed => Phase::Mixed,
    };
    if phase != Phase::Plain && !matches!(args.kind, CurveKind::Sin2) {
        bail!("--phase only applies to --kind sin2");
    }
    let spec = match args.kind {
        CurveKind::Helix => CurveSpec::Helix,
        CurveKind::Cubic => CurveSpec::Cubic,
        CurveKind::Sin2 => CurveSpec::Sin2 { phase },
        CurveKind::Polynomial => {
            let text = args.coeffs.as_deref().context("--kind polynomial needs --coeffs")?;
            CurveSpec::polynomial(parse_rows(text)?)?
        }
    };
    if args.coeffs.is_some() && !matches!(args.kind, CurveKind::Polynomial) {
        bail!("--coeffs only applies to --kind polynomial");
    }
    let plan = SamplePlan {
        t0: args.t0,
        ratio: args.ratio,
        count: args.count,
        t_start: args.t_start,
    };
    let seq = sample_curve(&spec, &plan)?;
    write_json(args.out.as_deref(), &seq)?;
    if let Some(path) = &args.derivatives_out {
        let derivs = spec
            .derivatives(args.t0, spec.dim())
            .context("this curve has no derivative table at t0")?;
        write_json(Some(path), &derivs)?;
    }
    Ok(exit::OK)
}
