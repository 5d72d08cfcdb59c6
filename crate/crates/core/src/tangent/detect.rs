use super::{SampledSet, TangentConfig, TangentRecord};
use crate::error::{Error, Result};
use crate::estimator::max_pairwise_angle;
use crate::geometry::{gram_schmidt, Frame, Vector};
use crate::scalar::Scalar;

/// Candidate subspaces tried per flat search; the deepest points are tried first.
const FLAT_CANDIDATES: usize = 64;

struct Offset<T> {
    index: usize,
    d: Vector<T>,
    r: T,
}

struct Ctx<'a, T: Scalar> {
    base: &'a Vector<T>,
    cfg: &'a TangentConfig<T>,
    offsets: Vec<Offset<T>>,
    max_depth: usize,
    out: Vec<TangentRecord<T>>,
}

/// Tangent frames of the sample at `base`, one per terminal branch of the recursive
/// clustering of residual directions.
///
/// At each depth the points lying in a subspace spanned by the current prefix (refined
/// to fit them exactly) end their branch there; the others are clustered by residual
/// direction and every cluster that converges onto `base` extends the prefix by its
/// limit direction.
pub fn detect_tangent_frames<T: Scalar>(
    set: &SampledSet<T>,
    base: &Vector<T>,
    cfg: &TangentConfig<T>,
) -> Result<Vec<TangentRecord<T>>> {
    cfg.validate()?;
    base.check_dim(set.dim())?;
    let mut offsets: Vec<Offset<T>> = set
        .points()
        .iter()
        .enumerate()
        .map(|(index, p)| {
            let d = p - base;
            let r = d.norm();
            Offset { index, d, r }
        })
        .filter(|o| cfg.radius.is_none_or(|rad| o.r <= rad))
        .collect();
    // Points that coincide with the base up to rounding are the base itself.
    let scale = offsets.iter().map(|o| o.r).fold(T::zero(), T::max);
    let same = scale * T::epsilon() * T::lit(1024.0);
    offsets.retain(|o| o.r > same);
    if offsets.len() < cfg.min_points {
        return Err(Error::TooFewPoints {
            found: offsets.len(),
            required: cfg.min_points,
        });
    }
    offsets.sort_by(|a, b| b.r.partial_cmp(&a.r).expect("finite").then(a.index.cmp(&b.index)));

    let n = set.dim();
    let mut ctx = Ctx {
        base,
        cfg,
        offsets,
        max_depth: cfg.max_depth.unwrap_or(n).min(n),
        out: Vec::new(),
    };
    let all: Vec<usize> = (0..ctx.offsets.len()).collect();
    ctx.descend(all, Frame::empty(n), true);
    Ok(ctx.out)
}

impl<T: Scalar> Ctx<'_, T> {
    fn record(&mut self, frame: Frame<T>, members: &[usize]) {
        log::debug!("tangent record k={} with {} points", frame.len(), members.len());
        self.out.push(TangentRecord {
            base: self.base.clone(),
            frame,
            determining_indices: members.iter().map(|&m| self.offsets[m].index).collect(),
            outgoing: None,
        });
    }

    /// `members` are positions into `offsets`, farthest first. `exact` says whether
    /// the prefix spans the members' lower levels exactly (rather than in the limit).
    fn descend(&mut self, members: Vec<usize>, mut prefix: Frame<T>, mut exact: bool) {
        let j = prefix.len();
        if j == self.max_depth {
            self.record(prefix, &members);
            return;
        }
        let before = self.out.len();
        let mut rest = members;
        if j >= 1 {
            if let Some((flat, refined)) = self.find_flat(&rest, &prefix) {
                if flat.len() >= self.cfg.min_tail && self.approaches_base(&flat) {
                    self.record(refined.clone(), &flat);
                    rest.retain(|m| !flat.contains(m));
                    prefix = refined;
                    exact = true;
                }
            }
        }

        let dirs = self.level_directions(&rest, &prefix, exact);
        for cluster in self.cluster(dirs) {
            if let Some(u) = self.converged_direction(&cluster, &prefix) {
                let mut next = prefix.clone();
                next.push_unchecked(u);
                let positions = cluster.into_iter().map(|(m, _)| m).collect();
                self.descend(positions, next, false);
            }
        }

        if j >= 1 && self.out.len() == before && rest.len() >= self.cfg.min_tail {
            // Nothing finer was found: the prefix itself is the tangent of this branch.
            self.record(prefix, &rest);
        }
    }

    fn approaches_base(&self, members: &[usize]) -> bool {
        match (members.first(), members.last()) {
            (Some(&far), Some(&near)) => {
                self.offsets[near].r <= self.cfg.convergence_ratio * self.offsets[far].r
            }
            _ => false,
        }
    }

    fn is_flat(&self, m: usize, span: &Frame<T>) -> bool {
        let o = &self.offsets[m];
        span.reject(&o.d).map(|r| r.norm() <= self.cfg.flat_tol * o.r).unwrap_or(false)
    }

    /// The largest set of members lying in one `j`-dimensional subspace that contains
    /// the first `j - 1` prefix vectors, and the prefix re-fitted to that subspace.
    fn find_flat(&self, members: &[usize], prefix: &Frame<T>) -> Option<(Vec<usize>, Frame<T>)> {
        let j = prefix.len();
        let parent = prefix.prefix(j - 1);
        let mut best: Option<(Vec<usize>, Frame<T>)> = None;
        for &c in members.iter().rev().take(FLAT_CANDIDATES) {
            let o = &self.offsets[c];
            let Ok(w) = parent.reject(&o.d) else { continue };
            let wn = w.norm();
            if wn <= self.cfg.flat_tol * o.r {
                continue;
            }
            let mut span = parent.clone();
            span.push_unchecked(w.scaled(T::one() / wn));
            if best.as_ref().is_some_and(|(b, s)| b.len() > 1 && self.is_flat(c, s)) {
                continue;
            }
            let inside: Vec<usize> = members.iter().copied().filter(|&m| self.is_flat(m, &span)).collect();
            if best.as_ref().is_none_or(|(b, _)| inside.len() > b.len()) {
                let full = inside.len() == members.len();
                best = Some((inside, span));
                if full {
                    break;
                }
            }
        }
        let (inside, span) = best?;
        if inside.len() < 2 {
            return None;
        }
        // Re-fit the estimated prefix inside the subspace, keeping its orientation.
        let projected: Vec<Vector<T>> = prefix
            .vectors()
            .iter()
            .map(|u| span.project(u).expect("dimension matches"))
            .collect();
        let refined = gram_schmidt(&projected, self.cfg.tol.rank_tol).ok()?;
        Some((inside, refined))
    }

    /// Normalized level-`j+1` residual directions of the members, farthest first.
    fn level_directions(&self, members: &[usize], prefix: &Frame<T>, exact: bool) -> Vec<(usize, Vector<T>)> {
        let j = prefix.len();
        let mut out = Vec::with_capacity(members.len());
        for (pos, &m) in members.iter().enumerate() {
            let o = &self.offsets[m];
            let w = if exact || j == 0 {
                prefix.reject(&o.d).ok()
            } else {
                // Span of the next j deeper members, deepest first.
                if pos + j >= members.len() {
                    continue;
                }
                let deeper: Vec<Vector<T>> = (1..=j).rev().map(|s| self.offsets[members[pos + s]].d.clone()).collect();
                gram_schmidt(&deeper, self.cfg.tol.rank_tol).ok().and_then(|local| local.reject(&o.d).ok())
            };
            let Some(w) = w else { continue };
            let wn = w.norm();
            if wn > self.cfg.flat_tol * o.r {
                out.push((m, w.scaled(T::one() / wn)));
            }
        }
        out
    }

    /// Leader clustering from the deepest point outwards; a cluster's representative
    /// is the mean direction of its first `window` (deepest) members. Clusters come
    /// back with members farthest first.
    fn cluster(&self, dirs: Vec<(usize, Vector<T>)>) -> Vec<Vec<(usize, Vector<T>)>> {
        struct Cl<T> {
            rep: Vector<T>,
            sum: Vector<T>,
            members: Vec<(usize, Vector<T>)>,
        }
        let mut clusters: Vec<Cl<T>> = Vec::new();
        for (m, w) in dirs.into_iter().rev() {
            let nearest = clusters
                .iter()
                .enumerate()
                .map(|(i, c)| (i, c.rep.angle_to(&w)))
                .filter(|&(_, a)| a <= self.cfg.cluster_angle)
                .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite"));
            match nearest {
                Some((i, _)) => {
                    let c = &mut clusters[i];
                    if c.members.len() < self.cfg.window {
                        c.sum = &c.sum + &w;
                        if let Some(rep) = c.sum.normalized() {
                            c.rep = rep;
                        }
                    }
                    c.members.push((m, w));
                }
                None => clusters.push(Cl {
                    rep: w.clone(),
                    sum: w.clone(),
                    members: vec![(m, w)],
                }),
            }
        }
        clusters
            .into_iter()
            .map(|mut c| {
                c.members.reverse();
                c.members
            })
            .collect()
    }

    /// The cluster's limit direction, if it is large enough, approaches the base and its
    /// deepest directions either agree or tighten as the distance halves.
    fn converged_direction(&self, cluster: &[(usize, Vector<T>)], prefix: &Frame<T>) -> Option<Vector<T>> {
        let cfg = self.cfg;
        let w = cfg.window;
        if cluster.len() < cfg.min_tail.max(w) {
            return None;
        }
        let positions: Vec<usize> = cluster.iter().map(|c| c.0).collect();
        if !self.approaches_base(&positions) {
            return None;
        }
        let deep = &cluster[cluster.len() - w..];
        let spread = max_pairwise_angle(&deep.iter().map(|c| &c.1).collect::<Vec<_>>()).0;
        let ok = spread <= cfg.angle_tol || {
            let reach = T::two() * self.offsets[deep[0].0].r;
            let far: Vec<&Vector<T>> = cluster
                .iter()
                .filter(|c| self.offsets[c.0].r >= reach)
                .map(|c| &c.1)
                .collect();
            far.len() >= w && spread <= cfg.cluster_angle && {
                let far_spread = max_pairwise_angle(&far[far.len() - w..]).0;
                spread <= cfg.shrink_factor * far_spread
            }
        };
        if !ok {
            return None;
        }
        let mut mean = Vector::zeros(prefix.dim());
        for c in deep {
            mean = &mean + &c.1;
        }
        prefix.reject(&mean).ok()?.normalized()
    }
}
