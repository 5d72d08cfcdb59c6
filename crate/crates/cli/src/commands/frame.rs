use anyhow::Result;
use frenet_core::estimator::{classical_frame, estimate_frame, LevelStatus, PointSequence};
use frenet_core::geometry::Vector;

use super::{read_json, tagged, write_json, write_text};
use crate::cli::EstimateArgs;
use crate::config::RunConfig;
use crate::exit;
use crate::report::{ClassicalComparison, FrameReport, SCHEMA_VERSION};

pub fn estimate(args: &EstimateArgs, cfg: &RunConfig) -> Result<i32> {
    let seq: PointSequence<f64> = read_json(&args.input)?;
    let k_max = args.k_max.unwrap_or(seq.dim());
    let est = estimate_frame(&seq, k_max, &cfg.estimator())?;

    let classical = match &args.compare_classical {
        Some(path) => {
            let derivs: Vec<Vector<f64>> = read_json(path)?;
            Some(match classical_frame(&derivs, cfg.geometry().rank_tol) {
                Ok(frame) => {
                    let angles = est
                        .frame
                        .vectors()
                        .iter()
                        .zip(frame.vectors())
                        .map(|(a, b)| a.angle_to(b))
                        .collect();
                    ClassicalComparison {
                        frame: Some(frame),
                        error: None,
                        angles,
                    }
                }
                Err(e) => ClassicalComparison {
                    frame: None,
                    error: Some(e.to_string()),
                    angles: Vec::new(),
                },
            })
        }
        None => None,
    };

    if let Some(path) = args.csv.as_ref().or(cfg.outputs.csv.as_ref()) {
        for level in 1..=est.frame.len() {
            let mut csv = String::from("index,angle_rad\n");
            for (i, a) in est.angle_series(level) {
                csv.push_str(&format!("{i},{a:e}\n"));
            }
            write_text(Some(&tagged(path, &format!("level{level}"))), &csv)?;
        }
    }

    for diag in &est.levels {
        match diag.status {
            LevelStatus::Converged => log::info!("level {}: converged, spread {:e}", diag.level, diag.spread),
            s => log::warn!("level {}: {s:?}, spread {:e}", diag.level, diag.spread),
        }
    }
    let report = FrameReport {
        schema_version: SCHEMA_VERSION,
        k_max,
        converged_levels: est.frame.len(),
        diverged: est.diverged(),
        estimate: est,
        classical,
    };
    write_json(args.out.as_deref().or(cfg.outputs.report.as_deref()), &report)?;
    Ok(if report.diverged { exit::DIVERGED } else { exit::OK })
}
