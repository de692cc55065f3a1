//! Total boundedness at a fixed scale: greedy ε-nets and ε-separated sets.
//!
//! Nets cover with closed balls (`d <= eps`); separation is strict
//! (`d > eps`). With these two conventions a maximal ε-separated set is
//! always an ε-net.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{FiniteMetricSpace, PointSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetCertificate {
    pub eps: f64,
    pub centers: PointSet,
    /// Centers in the order the farthest-point traversal picked them.
    pub order: Vec<usize>,
    /// `(point, center)` for every target point, sorted by point.
    pub assignment: Vec<(usize, usize)>,
}

impl NetCertificate {
    pub fn size(&self) -> usize {
        self.centers.len()
    }

    pub fn verify(&self, space: &FiniteMetricSpace, target: &PointSet) -> bool {
        self.assignment.len() == target.len()
            && self
                .assignment
                .iter()
                .zip(target.iter())
                .all(|(&(p, c), t)| {
                    p == t && self.centers.contains(c) && space.dist(p, c) <= self.eps
                })
    }
}

/// A set of points pairwise more than `eps` apart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationWitness {
    pub eps: f64,
    pub indices: PointSet,
}

impl SeparationWitness {
    /// Validates strict pairwise separation.
    pub fn new(space: &FiniteMetricSpace, eps: f64, indices: PointSet) -> Result<Self> {
        if !(eps >= 0.0) {
            return Err(Error::invalid(format!("eps must be >= 0, got {eps}")));
        }
        space.check_set(&indices)?;
        let pts = indices.as_slice();
        for (a, &i) in pts.iter().enumerate() {
            for &j in &pts[a + 1..] {
                if space.dist(i, j) <= eps {
                    return Err(Error::invalid(format!(
                        "points {i} and {j} are only {} apart, not more than {eps}",
                        space.dist(i, j)
                    )));
                }
            }
        }
        Ok(SeparationWitness { eps, indices })
    }

    pub fn size(&self) -> usize {
        self.indices.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub eps: f64,
    pub net_size: usize,
    pub packing_size: usize,
}

fn check_target(space: &FiniteMetricSpace, target: &PointSet) -> Result<()> {
    if target.is_empty() {
        return Err(Error::EmptySet);
    }
    space.check_set(target)
}

/// Farthest-point traversal of `target` starting from its lowest index.
///
/// Entry `k` is `(center_k, r_k)` where `r_k` is the distance from
/// `center_k` to the first `k` centers (infinite for the seed). Ties go to
/// the lowest index. The sequence does not depend on any scale, so the net
/// at scale `eps` is the shortest prefix whose next radius is `<= eps`.
pub fn farthest_point_order(
    space: &FiniteMetricSpace,
    target: &PointSet,
    eps_stop: f64,
) -> Vec<(usize, f64)> {
    let pts = target.as_slice();
    let Some(&seed) = pts.first() else {
        return Vec::new();
    };
    let mut order = vec![(seed, f64::INFINITY)];
    let mut near: Vec<f64> = pts.iter().map(|&p| space.dist(seed, p)).collect();
    loop {
        let mut far = 0;
        for k in 1..pts.len() {
            if near[k] > near[far] {
                far = k;
            }
        }
        let radius = near[far];
        if radius <= eps_stop || radius == 0.0 {
            break;
        }
        let c = pts[far];
        order.push((c, radius));
        let row = space.row(c);
        for (k, &p) in pts.iter().enumerate() {
            near[k] = near[k].min(row[p]);
        }
    }
    order
}

/// Greedy farthest-point ε-net of `target`.
pub fn greedy_eps_net(
    space: &FiniteMetricSpace,
    target: &PointSet,
    eps: f64,
) -> Result<NetCertificate> {
    if !(eps > 0.0) {
        return Err(Error::invalid(format!("eps must be > 0, got {eps}")));
    }
    check_target(space, target)?;
    let order: Vec<usize> = farthest_point_order(space, target, eps)
        .into_iter()
        .map(|(c, _)| c)
        .collect();
    // nearest center, earliest-picked on ties
    let assignment = target
        .iter()
        .map(|p| {
            let row = space.row(p);
            let mut best = order[0];
            for &c in &order[1..] {
                if row[c] < row[best] {
                    best = c;
                }
            }
            (p, best)
        })
        .collect();
    Ok(NetCertificate {
        eps,
        centers: order.iter().copied().collect(),
        order,
        assignment,
    })
}

/// Maximal ε-separated subset of `target`, built greedily in index order.
pub fn max_separated_subset(
    space: &FiniteMetricSpace,
    target: &PointSet,
    eps: f64,
) -> Result<SeparationWitness> {
    if !(eps >= 0.0) {
        return Err(Error::invalid(format!("eps must be >= 0, got {eps}")));
    }
    check_target(space, target)?;
    let mut chosen: Vec<usize> = Vec::new();
    for p in target.iter() {
        let row = space.row(p);
        if chosen.iter().all(|&c| row[c] > eps) {
            chosen.push(p);
        }
    }
    Ok(SeparationWitness {
        eps,
        indices: PointSet::new(chosen),
    })
}

/// True when every target point is within `eps` (closed) of some center.
pub fn is_eps_net(
    space: &FiniteMetricSpace,
    target: &PointSet,
    centers: &PointSet,
    eps: f64,
) -> bool {
    target
        .iter()
        .all(|p| centers.iter().any(|c| space.dist(p, c) <= eps))
}

/// Net and packing sizes per scale.
///
/// The net size is nonincreasing in `eps` because the farthest-point order
/// is scale-free. The index-order packing size carries no such guarantee.
pub fn covering_profile(
    space: &FiniteMetricSpace,
    target: &PointSet,
    eps_list: &[f64],
) -> Result<Vec<ProfileEntry>> {
    if let Some(&bad) = eps_list.iter().find(|&&e| !(e > 0.0)) {
        return Err(Error::invalid(format!("eps must be > 0, got {bad}")));
    }
    check_target(space, target)?;
    let traversal = farthest_point_order(space, target, 0.0);
    eps_list
        .iter()
        .map(|&eps| {
            let net_size = 1 + traversal[1..].iter().take_while(|&&(_, r)| r > eps).count();
            Ok(ProfileEntry {
                eps,
                net_size,
                packing_size: max_separated_subset(space, target, eps)?.size(),
            })
        })
        .collect()
}
