//! ε-chains, ε-components and finite chainability.
//!
//! Everything here works on the threshold graph at scale `eps`: points are
//! adjacent when `d(a, b) <= eps` (non-strict, as in the chain condition).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{FiniteMetricSpace, PointSet};
use crate::union_find::DisjointSet;

/// A sequence `a_0 .. a_n` with consecutive distances at most `eps`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainCertificate {
    pub eps: f64,
    pub points: Vec<usize>,
    pub length: usize,
}

impl ChainCertificate {
    fn from_points(eps: f64, points: Vec<usize>) -> Self {
        let length = points.len().saturating_sub(1);
        ChainCertificate {
            eps,
            points,
            length,
        }
    }

    /// Re-checks every step against the space.
    pub fn verify(&self, space: &FiniteMetricSpace) -> bool {
        !self.points.is_empty()
            && self.length + 1 == self.points.len()
            && self.points.iter().all(|&p| p < space.len())
            && self
                .points
                .windows(2)
                .all(|w| space.dist(w[0], w[1]) <= self.eps)
    }

    pub fn start(&self) -> usize {
        self.points[0]
    }

    pub fn end(&self) -> usize {
        *self.points.last().expect("chain is nonempty")
    }

    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        ChainCertificate::from_points(self.eps, points)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentsAt {
    pub eps: f64,
    pub components: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainabilityProfile {
    pub threshold: f64,
    pub components_at: Vec<ComponentsAt>,
}

/// Which points a chain may pass through.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Through {
    /// Chains may use any point of the space (subset variant).
    #[default]
    WholeSpace,
    /// Chains stay inside the target set (subspace variant).
    TargetOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub point: usize,
    pub center: usize,
    pub chain: ChainCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteChainabilityCertificate {
    pub eps: f64,
    pub m: usize,
    pub centers: PointSet,
    pub through: Through,
    pub assignment: Vec<Assignment>,
}

impl FiniteChainabilityCertificate {
    pub fn verify(&self, space: &FiniteMetricSpace, target: &PointSet) -> bool {
        let allowed = match self.through {
            Through::WholeSpace => None,
            Through::TargetOnly => Some(target),
        };
        target.len() == self.assignment.len()
            && self.assignment.iter().zip(target.iter()).all(|(a, p)| {
                a.point == p
                    && a.chain.start() == p
                    && a.chain.end() == a.center
                    && self.centers.contains(a.center)
                    && a.chain.length <= self.m
                    && a.chain.eps <= self.eps
                    && a.chain.verify(space)
                    && allowed.is_none_or(|t| a.chain.points.iter().all(|&q| t.contains(q)))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum FiniteChainability {
    Certified(FiniteChainabilityCertificate),
    /// `point` cannot reach any center within `m` steps.
    Unreachable {
        point: usize,
    },
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && !eps.is_nan() {
        Ok(())
    } else {
        Err(Error::invalid(format!("eps must be > 0, got {eps}")))
    }
}

struct Bfs {
    depth: Vec<Option<usize>>,
    pred: Vec<usize>,
}

/// Level-synchronous BFS over the threshold graph. A newly reached point's
/// predecessor is the smallest-index point of the previous level adjacent
/// to it, which makes every returned chain deterministic.
fn bfs(
    space: &FiniteMetricSpace,
    sources: &[usize],
    eps: f64,
    allowed: Option<&[bool]>,
    max_depth: usize,
    stop_at: Option<usize>,
) -> Bfs {
    let n = space.len();
    let mut depth = vec![None; n];
    let mut pred: Vec<usize> = (0..n).collect();
    let mut frontier: Vec<usize> = sources.to_vec();
    frontier.sort_unstable();
    frontier.dedup();
    for &s in &frontier {
        depth[s] = Some(0);
    }
    let mut level = 0;
    while !frontier.is_empty() && level < max_depth {
        if stop_at.is_some_and(|t| depth[t].is_some()) {
            break;
        }
        let mut next = Vec::new();
        for v in 0..n {
            if depth[v].is_some() || allowed.is_some_and(|a| !a[v]) {
                continue;
            }
            let row = space.row(v);
            if let Some(&u) = frontier.iter().find(|&&u| row[u] <= eps) {
                depth[v] = Some(level + 1);
                pred[v] = u;
                next.push(v);
            }
        }
        frontier = next;
        level += 1;
    }
    Bfs { depth, pred }
}

/// Walks predecessors from `v` back to its BFS root: `v, pred(v), ..., root`.
fn walk_back(bfs: &Bfs, mut v: usize) -> Vec<usize> {
    let mut path = vec![v];
    while bfs.depth[v] != Some(0) {
        v = bfs.pred[v];
        path.push(v);
    }
    path
}

/// Shortest ε-chain from `x` to `y`, or `None` when they lie in different
/// ε-components.
pub fn eps_chain(
    space: &FiniteMetricSpace,
    x: usize,
    y: usize,
    eps: f64,
) -> Result<Option<ChainCertificate>> {
    check_eps(eps)?;
    space.check_index(x)?;
    space.check_index(y)?;
    let bfs = bfs(space, &[x], eps, None, usize::MAX, Some(y));
    if bfs.depth[y].is_none() {
        return Ok(None);
    }
    let mut points = walk_back(&bfs, y);
    points.reverse();
    Ok(Some(ChainCertificate::from_points(eps, points)))
}

/// Connected components of the ε-threshold graph, each sorted, ordered by
/// smallest member.
pub fn eps_components(space: &FiniteMetricSpace, eps: f64) -> Result<Vec<Vec<usize>>> {
    check_eps(eps)?;
    let n = space.len();
    let mut ds = DisjointSet::new(n);
    for i in 0..n {
        if ds.sets == 1 {
            break;
        }
        let row = space.row(i);
        for j in i + 1..n {
            if row[j] <= eps {
                ds.union(i, j);
            }
        }
    }
    Ok(ds.parts())
}

/// Least ε for which the space is a single ε-component: the bottleneck edge
/// of a minimum spanning tree (Prim on the dense matrix). 0 for singletons.
pub fn chainability_threshold(space: &FiniteMetricSpace) -> f64 {
    let n = space.len();
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    best[0] = 0.0;
    let mut bottleneck: f64 = 0.0;
    for _ in 0..n {
        let mut u = usize::MAX;
        for v in 0..n {
            if !in_tree[v] && (u == usize::MAX || best[v] < best[u]) {
                u = v;
            }
        }
        in_tree[u] = true;
        bottleneck = bottleneck.max(best[u]);
        let row = space.row(u);
        for v in 0..n {
            if !in_tree[v] && row[v] < best[v] {
                best[v] = row[v];
            }
        }
    }
    bottleneck
}

pub fn chainability_profile(
    space: &FiniteMetricSpace,
    eps_list: &[f64],
) -> Result<ChainabilityProfile> {
    let components_at = eps_list
        .iter()
        .map(|&eps| {
            Ok(ComponentsAt {
                eps,
                components: eps_components(space, eps)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ChainabilityProfile {
        threshold: chainability_threshold(space),
        components_at,
    })
}

/// Checks that every point of `target` reaches some center by an ε-chain of
/// at most `m` steps. A shorter chain counts as length `m` by repeating its
/// last point, since `d(a, a) = 0 <= eps`.
///
/// With [`Through::TargetOnly`] chains may not leave `target` and the centers
/// must lie in it.
pub fn finite_chainability_check(
    space: &FiniteMetricSpace,
    target: &PointSet,
    eps: f64,
    m: usize,
    centers: &PointSet,
    through: Through,
) -> Result<FiniteChainability> {
    check_eps(eps)?;
    if m == 0 {
        return Err(Error::invalid("chain length bound m must be >= 1"));
    }
    if centers.is_empty() {
        return Err(Error::invalid("at least one center is required"));
    }
    space.check_set(target)?;
    space.check_set(centers)?;
    let mask;
    let allowed = match through {
        Through::WholeSpace => None,
        Through::TargetOnly => {
            if !centers.is_subset(target) {
                return Err(Error::invalid(
                    "target-only chainability needs the centers inside the target",
                ));
            }
            mask = target.mask(space.len());
            Some(mask.as_slice())
        }
    };
    let bfs = bfs(space, centers.as_slice(), eps, allowed, m, None);
    if let Some(point) = target.iter().find(|&p| bfs.depth[p].is_none()) {
        return Ok(FiniteChainability::Unreachable { point });
    }
    let assignment = target
        .iter()
        .map(|p| {
            let points = walk_back(&bfs, p);
            let center = *points.last().expect("path is nonempty");
            Assignment {
                point: p,
                center,
                chain: ChainCertificate::from_points(eps, points),
            }
        })
        .collect();
    Ok(FiniteChainability::Certified(
        FiniteChainabilityCertificate {
            eps,
            m,
            centers: centers.clone(),
            through,
            assignment,
        },
    ))
}
