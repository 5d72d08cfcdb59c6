use serde::{Deserialize, Serialize};

use super::{Outgoing, SampledSet, TangentConfig, TangentRecord};
use crate::error::Result;
use crate::geometry::{FlagSimplex, Vector};
use crate::scalar::Scalar;

/// Which sample points the flag simplex `C` and its facet `C'` contain, and the verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct OutgoingReport<T: Scalar> {
    pub scales: Vec<T>,
    /// Radius of the ball the sample was classified in.
    pub ball_radius: T,
    pub in_c: usize,
    pub in_facet: usize,
    /// Determining points inside the ball.
    pub determining_in_ball: usize,
    pub verdict: Outgoing,
    /// Indices of sample points in `C` but not in `C'`.
    pub witnesses: Vec<usize>,
}

/// Tests whether `rec` is outgoing: builds `C` on the record's frame (scales from the
/// config or half the radius of the determining subsequence) and checks that no sample
/// point in the surrounding ball lies in `C` off its facet.
///
/// A point counts as a member of `C'` only if it is also a member of `C`, so the facet
/// count never exceeds the simplex count.
pub fn outgoing_test<T: Scalar>(
    set: &SampledSet<T>,
    rec: &TangentRecord<T>,
    cfg: &TangentConfig<T>,
) -> Result<OutgoingReport<T>> {
    cfg.validate()?;
    let x = &rec.base;
    let k = rec.k();
    let reach = rec
        .determining_indices
        .iter()
        .map(|&i| set.points()[i].distance(x))
        .fold(T::zero(), T::max);
    let scales = match &cfg.scales {
        Some(s) => s.iter().copied().cycle().take(k).collect(),
        None => vec![reach / T::two(); k],
    };
    let c = FlagSimplex::new(x.clone(), rec.frame.clone(), scales.clone(), cfg.tol)?;
    let facet = c.facet();
    let apex = c.vertices().last().map(|v| v.distance(x)).unwrap_or_else(T::zero);
    let ball_radius = reach.max(apex);

    let mut in_c = 0;
    let mut in_facet = 0;
    let mut witnesses = Vec::new();
    for (i, p) in set.points().iter().enumerate() {
        let r = p.distance(x);
        if r > ball_radius {
            continue;
        }
        let tol = cfg.membership_tolerance(r);
        if !c.contains_within(p, tol) {
            continue;
        }
        in_c += 1;
        if facet.contains_within(p, tol) {
            in_facet += 1;
        } else {
            witnesses.push(i);
        }
    }
    let determining_in_ball = rec
        .determining_indices
        .iter()
        .filter(|&&i| set.points()[i].distance(x) <= ball_radius)
        .count();
    let verdict = if determining_in_ball < cfg.min_tail || k == 0 {
        Outgoing::Vacuous
    } else if witnesses.is_empty() {
        Outgoing::Yes
    } else {
        Outgoing::No
    };
    Ok(OutgoingReport {
        scales,
        ball_radius,
        in_c,
        in_facet,
        determining_in_ball,
        verdict,
        witnesses,
    })
}

/// Smallest squared offset from `base` among the sample points other than the base; the
/// membership tolerance should sit well below it.
pub(crate) fn smallest_squared_offset<T: Scalar>(set: &SampledSet<T>, base: &Vector<T>) -> Option<T> {
    set.points()
        .iter()
        .map(|p| p.distance(base))
        .filter(|&r| r > T::zero())
        .fold(None, |acc: Option<T>, r| Some(acc.map_or(r, |a| a.min(r))))
        .map(|r| r * r)
}
