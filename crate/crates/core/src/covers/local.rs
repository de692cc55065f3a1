use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::RealizedCover;
use crate::error::{Error, Result};
use crate::space::{FiniteMetricSpace, PointSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalFinitenessProfile {
    pub delta: f64,
    /// `(point, members meeting B(point, delta))` per target point.
    pub counts: Vec<(usize, usize)>,
    pub max: usize,
    /// Smallest target point attaining `max`.
    pub argmax: usize,
}

/// Counts, for each target point `x`, the members that meet the open ball
/// `B(x, delta)`.
pub fn local_finiteness_profile(
    space: &FiniteMetricSpace,
    cover: &RealizedCover,
    delta: f64,
) -> Result<LocalFinitenessProfile> {
    if !(delta > 0.0) {
        return Err(Error::invalid(format!("delta must be > 0, got {delta}")));
    }
    let counts: Vec<(usize, usize)> = cover
        .target
        .as_slice()
        .par_iter()
        .map(|&x| {
            let ball = space.ball_unchecked(x, delta, false);
            let hits = cover
                .members
                .iter()
                .filter(|m| ball.iter().any(|p| m.contains(p)))
                .count();
            (x, hits)
        })
        .collect();
    let (argmax, max) =
        counts
            .iter()
            .copied()
            .fold((cover.target.as_slice()[0], 0), |(bp, bc), (p, c)| {
                if c > bc {
                    (p, c)
                } else {
                    (bp, bc)
                }
            });
    Ok(LocalFinitenessProfile {
        delta,
        counts,
        max,
        argmax,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Subcover {
    Found {
        labels: Vec<String>,
        members: Vec<usize>,
    },
    /// No member contains `uncovered`.
    Failed { uncovered: usize },
}

impl Subcover {
    pub fn size(&self) -> Option<usize> {
        match self {
            Subcover::Found { members, .. } => Some(members.len()),
            Subcover::Failed { .. } => None,
        }
    }
}

/// Greedy set cover of `b` by realized members: take the member covering the
/// most still-uncovered points, ties to the earlier member.
pub fn finite_subcover(
    space: &FiniteMetricSpace,
    cover: &RealizedCover,
    b: &PointSet,
) -> Result<Subcover> {
    space.check_set(b)?;
    let mut residual: Vec<usize> = b.as_slice().to_vec();
    let mut picked = Vec::new();
    while !residual.is_empty() {
        let mut best = (0usize, 0usize);
        for (m, member) in cover.members.iter().enumerate() {
            let gain = if member.set.len() < residual.len() {
                member
                    .set
                    .iter()
                    .filter(|p| residual.binary_search(p).is_ok())
                    .count()
            } else {
                residual.iter().filter(|&&p| member.contains(p)).count()
            };
            if gain > best.1 {
                best = (m, gain);
            }
        }
        if best.1 == 0 {
            return Ok(Subcover::Failed {
                uncovered: residual[0],
            });
        }
        let member = &cover.members[best.0];
        residual.retain(|&p| !member.contains(p));
        picked.push(best.0);
    }
    Ok(Subcover::Found {
        labels: picked
            .iter()
            .map(|&m| cover.members[m].label.clone())
            .collect(),
        members: picked,
    })
}
