use serde::{Deserialize, Serialize};

use super::hull::extreme_points_of;
use super::outgoing::smallest_squared_offset;
use super::{detect_tangent_frames, outgoing_test, Outgoing, OutgoingReport, SampledSet, TangentConfig, TangentRecord};
use crate::error::Result;
use crate::geometry::Vector;
use crate::scalar::Scalar;

/// Number of halvings of the neighbourhood radius used by base detection.
const BASE_LEVELS: i32 = 4;

/// Outgoing test of a proper prefix of a detected frame (itself a tangent frame,
/// determined by the same subsequence).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct PrefixCheck<T: Scalar> {
    /// Index of the record in [`BaseReport::records`].
    pub record: usize,
    pub k: usize,
    pub report: OutgoingReport<T>,
}

/// Everything found at one base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct BaseReport<T: Scalar> {
    pub base: Vector<T>,
    pub records: Vec<TangentRecord<T>>,
    pub outgoing: Vec<OutgoingReport<T>>,
    pub prefixes: Vec<PrefixCheck<T>>,
    /// Set when detection could not run at this base.
    pub error: Option<String>,
    /// Set when the membership tolerance is not far below the smallest squared offset.
    pub warning: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolyhedronVerdict {
    /// The extreme-point count stopped growing as the sample was refined.
    PolyhedronLike,
    /// It kept growing.
    NonPolyhedral,
    Indeterminate,
}

/// Extreme-point counts of nested subsamples (every 4th, every 2nd, all points).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremeTrend {
    /// `(sample size, extreme-point count)`, coarsest first.
    pub counts: Vec<(usize, usize)>,
    pub verdict: PolyhedronVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct TangentReport<T: Scalar> {
    /// Whether the bases were given with the sample or detected.
    pub bases_detected: bool,
    pub bases: Vec<BaseReport<T>>,
    pub extreme_points: Vec<usize>,
    pub extreme_trend: ExtremeTrend,
    /// Some record or prefix tested outgoing.
    pub outgoing_found: bool,
    /// No outgoing tangent found at any base.
    pub strongly_semisimple_surrogate: bool,
}

impl<T: Scalar> TangentReport<T> {
    pub fn records(&self) -> impl Iterator<Item = (&TangentRecord<T>, &OutgoingReport<T>)> {
        self.bases.iter().flat_map(|b| b.records.iter().zip(&b.outgoing))
    }

    /// Outgoing frames: terminal records and prefixes with verdict yes, as
    /// `(base index, record index, k)`.
    pub fn outgoing_frames(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (b, rep) in self.bases.iter().enumerate() {
            for (r, o) in rep.outgoing.iter().enumerate() {
                if o.verdict == Outgoing::Yes {
                    out.push((b, r, rep.records[r].k()));
                }
            }
            for p in &rep.prefixes {
                if p.report.verdict == Outgoing::Yes {
                    out.push((b, p.record, p.k));
                }
            }
        }
        out
    }
}

/// Indices of sample points around which the sample accumulates: points keeping at
/// least `min_points` neighbours as the radius is quartered repeatedly, thinned so
/// that no two detected bases are close at the second radius.
pub fn detect_bases<T: Scalar>(set: &SampledSet<T>, cfg: &TangentConfig<T>) -> Vec<usize> {
    let pts = set.points();
    let m = pts.len();
    let mut centroid = Vector::zeros(set.dim());
    for p in pts {
        centroid = &centroid + p;
    }
    let centroid = centroid.scaled(T::one() / T::lit(m as f64));
    let extent = pts.iter().map(|p| p.distance(&centroid)).fold(T::zero(), T::max);
    let top = cfg.radius.unwrap_or(extent);
    let radii: Vec<T> = (1..=BASE_LEVELS).map(|l| top * T::lit(0.25f64.powi(l))).collect();

    let mut scored: Vec<(usize, Vec<usize>, T)> = Vec::new();
    for i in 0..m {
        let dists: Vec<T> = (0..m).filter(|&j| j != i).map(|j| pts[i].distance(&pts[j])).collect();
        let counts: Vec<usize> = radii
            .iter()
            .map(|&r| dists.iter().filter(|&&d| d > T::zero() && d <= r).count())
            .collect();
        if counts.iter().all(|&c| c >= cfg.min_points) {
            let nearest = dists.iter().copied().filter(|&d| d > T::zero()).fold(T::infinity(), T::min);
            scored.push((i, counts, nearest));
        }
    }
    // Most persistent neighbourhoods first, then the tightest.
    scored.sort_by(|a, b| {
        b.1.iter()
            .rev()
            .cmp(a.1.iter().rev())
            .then(a.2.partial_cmp(&b.2).expect("finite"))
            .then(a.0.cmp(&b.0))
    });
    let mut chosen: Vec<usize> = Vec::new();
    for (i, _, _) in scored {
        if chosen.iter().all(|&c| pts[c].distance(&pts[i]) > radii[1]) {
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Tangent frames with outgoing verdicts at every base, extreme points and the
/// semisimplicity surrogate.
pub fn analyze<T: Scalar>(set: &SampledSet<T>, cfg: &TangentConfig<T>) -> Result<TangentReport<T>> {
    cfg.validate()?;
    let (bases, bases_detected) = match set.bases() {
        Some(b) => (b.to_vec(), false),
        None => {
            let found = detect_bases(set, cfg);
            log::info!("detected {} accumulation bases", found.len());
            (found.into_iter().map(|i| set.points()[i].clone()).collect(), true)
        }
    };

    let mut reports = Vec::with_capacity(bases.len());
    for base in bases {
        reports.push(analyze_base(set, base, cfg)?);
    }

    let tol = cfg.tol.tol_bary;
    let extreme = extreme_points_of(set.points(), tol);
    let extreme_trend = trend(set, tol, extreme.len());
    let outgoing_found = reports.iter().any(|b| {
        b.outgoing.iter().any(|o| o.verdict == Outgoing::Yes)
            || b.prefixes.iter().any(|p| p.report.verdict == Outgoing::Yes)
    });
    Ok(TangentReport {
        bases_detected,
        bases: reports,
        extreme_points: extreme,
        extreme_trend,
        outgoing_found,
        strongly_semisimple_surrogate: !outgoing_found,
    })
}

fn analyze_base<T: Scalar>(set: &SampledSet<T>, base: Vector<T>, cfg: &TangentConfig<T>) -> Result<BaseReport<T>> {
    let warning = smallest_squared_offset(set, &base).and_then(|d2| {
        let tol = cfg.membership_tolerance(d2.sqrt());
        (d2 < T::lit(100.0) * tol).then(|| {
            format!("membership tolerance {tol} is not far below the smallest squared offset {d2}")
        })
    });
    let mut records = match detect_tangent_frames(set, &base, cfg) {
        Ok(r) => r,
        Err(e) => {
            log::warn!("no tangent detection at base {:?}: {e}", base.to_f64());
            return Ok(BaseReport {
                base,
                records: Vec::new(),
                outgoing: Vec::new(),
                prefixes: Vec::new(),
                error: Some(e.to_string()),
                warning,
            });
        }
    };
    if let Some(w) = &warning {
        log::warn!("{w}");
    }
    let mut outgoing = Vec::with_capacity(records.len());
    for rec in &mut records {
        let rep = outgoing_test(set, rec, cfg)?;
        rec.outgoing = Some(rep.verdict);
        outgoing.push(rep);
    }

    // Each proper prefix of a frame is a tangent frame too; test the distinct ones that
    // are not already terminal records.
    let mut prefixes = Vec::new();
    let mut seen: Vec<crate::geometry::Frame<T>> = records.iter().map(|r| r.frame.clone()).collect();
    for (idx, rec) in records.iter().enumerate() {
        for k in 1..rec.k() {
            let frame = rec.frame.prefix(k);
            if seen.iter().any(|f| f.len() == k && f.max_angle_to(&frame) <= cfg.tol.tol_orth) {
                continue;
            }
            seen.push(frame.clone());
            let sub = TangentRecord {
                base: rec.base.clone(),
                frame,
                determining_indices: rec.determining_indices.clone(),
                outgoing: None,
            };
            let report = outgoing_test(set, &sub, cfg)?;
            prefixes.push(PrefixCheck { record: idx, k, report });
        }
    }
    Ok(BaseReport {
        base,
        records,
        outgoing,
        prefixes,
        error: None,
        warning,
    })
}

fn trend<T: Scalar>(set: &SampledSet<T>, tol: T, full: usize) -> ExtremeTrend {
    let mut counts = Vec::new();
    for step in [4usize, 2] {
        let sub: Vec<Vector<T>> = set.points().iter().step_by(step).cloned().collect();
        if sub.len() >= 3 {
            counts.push((sub.len(), extreme_points_of(&sub, tol).len()));
        }
    }
    counts.push((set.len(), full));
    // Subsamples that miss corners can have more extreme points than the full sample,
    // so only growth at every refinement step counts against a polytope.
    let verdict = match counts.as_slice() {
        [(_, a), (_, b), (_, c)] if a < b && b < c => PolyhedronVerdict::NonPolyhedral,
        [.., (_, b), (_, c)] if counts.len() == 3 && c <= b => PolyhedronVerdict::PolyhedronLike,
        _ => PolyhedronVerdict::Indeterminate,
    };
    ExtremeTrend { counts, verdict }
}
