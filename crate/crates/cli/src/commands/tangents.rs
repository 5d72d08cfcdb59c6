use anyhow::{Context, Result};
use frenet_core::tangent::{analyze, SampledSet};
use frenet_core::witness::{build_witness, ratio_table, RatioVerdict};

use super::{read_json, tagged, write_json, write_text};
use crate::cli::TangentsArgs;
use crate::config::RunConfig;
use crate::exit;
use crate::report::{TangentsReport, WitnessEntry, SCHEMA_VERSION};

pub fn run(args: &TangentsArgs, cfg: &RunConfig) -> Result<i32> {
    let set: SampledSet<f64> = read_json(&args.input)?;
    let mut tcfg = cfg.tangent();
    tcfg.radius = args.radius;
    let analysis = analyze(&set, &tcfg)?;
    for b in &analysis.bases {
        if let Some(w) = &b.warning {
            log::warn!("base {:?}: {w}", b.base.to_f64());
        }
    }

    let ratio_csv = args.ratio_csv.as_ref().or(cfg.outputs.ratio_csv.as_ref());
    let mut witnesses = Vec::new();
    if args.witness || ratio_csv.is_some() {
        let multipliers = cfg.multipliers();
        for (b, r, k) in analysis.outgoing_frames() {
            let base = &analysis.bases[b];
            let record = &base.records[r];
            let scales = if k == record.k() {
                &base.outgoing[r].scales
            } else {
                &base
                    .prefixes
                    .iter()
                    .find(|p| p.record == r && p.k == k)
                    .context("outgoing prefix without a report")?
                    .report
                    .scales
            };
            let (f1, f2) = build_witness(&base.base, &record.frame.prefix(k), scales, tcfg.tol)?;
            let table = ratio_table(&f1, &f2, &set, &multipliers, tcfg.mem_tol, tcfg.mem_mode)?;
            match &table.verdict {
                RatioVerdict::Certified { scale } => log::info!("base {b} record {r} k={k}: certified through {scale}"),
                v => log::info!("base {b} record {r} k={k}: {v:?}"),
            }
            if let Some(path) = ratio_csv {
                write_text(Some(&tagged(path, &format!("b{b}_r{r}_k{k}"))), &table.to_csv())?;
            }
            witnesses.push(WitnessEntry {
                base: b,
                record: r,
                k,
                f1,
                f2,
                table,
            });
        }
    }

    let report = TangentsReport {
        schema_version: SCHEMA_VERSION,
        analysis,
        witnesses,
    };
    write_json(args.out.as_deref().or(cfg.outputs.report.as_deref()), &report)?;
    Ok(exit::OK)
}
