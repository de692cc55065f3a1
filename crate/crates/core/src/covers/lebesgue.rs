//! Lebesgue numbers of realized covers.
//!
//! A set `A ⊆ target` is *bad* when no single member contains it. With the
//! strict `diam(A) < α` convention the supremal Lebesgue number is the
//! minimum diameter over bad sets, and that minimum is itself a valid
//! Lebesgue number.
//!
//! A bad set only has to meet the complement of every member, so every
//! minimal bad set is a transversal of those complements. The search fixes
//! the smallest index `x` of the bad set, notes that members missing `x` are
//! already refuted, and branches on points outside the remaining members,
//! pruning on the best diameter found so far.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{covers_check, RealizedCover};
use crate::error::{Error, Result};
use crate::serde_ext;
use crate::space::{FiniteMetricSpace, PointSet};

pub const DEFAULT_SEARCH_LIMIT: u64 = 1_000_000;

/// Largest target for the power-set enumeration.
const BRUTE_MAX_TARGET: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LebesgueMethod {
    Brute,
    MinimalBadSetSearch,
    /// The node limit was hit; only `bracket` is meaningful.
    Bracket,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    #[serde(with = "serde_ext")]
    pub lower: f64,
    #[serde(with = "serde_ext")]
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LebesgueReport {
    #[serde(with = "serde_ext")]
    pub ball_bound: f64,
    /// Supremal valid Lebesgue number; `+inf` when some member contains the
    /// whole target. `None` when the search was cut short.
    #[serde(with = "serde_ext::option")]
    pub exact: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bracket: Option<Bracket>,
    /// A bad set of diameter `exact` (the best one found, when bracketed).
    pub witness: Option<PointSet>,
    pub method: LebesgueMethod,
    pub nodes: u64,
    pub truncation: Option<usize>,
}

/// `min_x max_{O ∋ x} d(x, X \ O)` over target points, with
/// `d(x, ∅) = +inf`. Every set of smaller diameter through `x` sits inside
/// the maximizing member, so this is a valid Lebesgue number.
pub fn lebesgue_ball_bound(space: &FiniteMetricSpace, cover: &RealizedCover) -> Result<f64> {
    if let Some(p) = covers_check(cover) {
        return Err(Error::Uncovered(p));
    }
    let n = space.len();
    let per_point: Vec<f64> = cover
        .target
        .as_slice()
        .par_iter()
        .map(|&x| {
            let row = space.row(x);
            cover
                .members
                .iter()
                .filter(|m| m.contains(x))
                .map(|m| {
                    (0..n)
                        .filter(|&j| !m.contains(j))
                        .map(|j| row[j])
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(per_point.into_iter().fold(f64::INFINITY, f64::min))
}

struct BadSetSearch<'a> {
    space: &'a FiniteMetricSpace,
    cover: &'a RealizedCover,
    /// `|target \ member|` per member, used to pick the tightest branch.
    outside: Vec<usize>,
    best: f64,
    best_set: Option<Vec<usize>>,
    nodes: u64,
    limit: u64,
    first_only: bool,
    found: bool,
    aborted: bool,
}

impl<'a> BadSetSearch<'a> {
    fn new(
        space: &'a FiniteMetricSpace,
        cover: &'a RealizedCover,
        bound: f64,
        limit: u64,
        first_only: bool,
    ) -> Self {
        let outside = cover
            .members
            .iter()
            .map(|m| cover.target.iter().filter(|&p| !m.contains(p)).count())
            .collect();
        BadSetSearch {
            space,
            cover,
            outside,
            best: bound,
            best_set: None,
            nodes: 0,
            limit,
            first_only,
            found: false,
            aborted: false,
        }
    }

    fn stopped(&self) -> bool {
        self.aborted || (self.first_only && self.found)
    }

    fn run(&mut self) {
        let target = self.cover.target.as_slice();
        for (pos, &seed) in target.iter().enumerate() {
            if self.stopped() || self.best <= 0.0 {
                break;
            }
            let unhit = self.cover.containing(seed);
            if unhit.is_empty() {
                self.record(0.0, &[seed]);
                continue;
            }
            let row = self.space.row(seed);
            let mut cands: Vec<usize> = target[pos + 1..]
                .iter()
                .copied()
                .filter(|&p| row[p] < self.best)
                .collect();
            cands.sort_by(|&a, &b| row[a].total_cmp(&row[b]).then(a.cmp(&b)));
            let mut chosen = vec![seed];
            self.dfs(&mut chosen, 0.0, &unhit, &cands);
        }
    }

    fn record(&mut self, diam: f64, chosen: &[usize]) {
        if diam < self.best {
            self.best = diam;
            self.best_set = Some(chosen.to_vec());
            self.found = true;
        }
    }

    /// Every point of `chosen` lies in every member of `unhit`.
    fn dfs(&mut self, chosen: &mut Vec<usize>, diam: f64, unhit: &[usize], cands: &[usize]) {
        if self.stopped() {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            self.aborted = true;
            return;
        }
        if unhit.is_empty() {
            self.record(diam, chosen);
            return;
        }
        let branch = *unhit
            .iter()
            .min_by_key(|&&m| (self.outside[m], m))
            .expect("unhit is nonempty");
        let seed_row = self.space.row(chosen[0]);
        for &p in cands {
            if seed_row[p] >= self.best || self.stopped() {
                break;
            }
            if self.cover.members[branch].contains(p) {
                continue;
            }
            let row = self.space.row(p);
            let new_diam = chosen.iter().fold(diam, |d, &c| d.max(row[c]));
            if new_diam >= self.best {
                continue;
            }
            let rest: Vec<usize> = unhit
                .iter()
                .copied()
                .filter(|&m| self.cover.members[m].contains(p))
                .collect();
            chosen.push(p);
            self.dfs(chosen, new_diam, &rest, cands);
            chosen.pop();
        }
    }

    fn witness(&self) -> Option<PointSet> {
        self.best_set
            .as_ref()
            .map(|s| PointSet::new(s.iter().copied()))
    }
}

/// Supremal Lebesgue number by minimal-bad-set search.
///
/// If the search needs more than `search_limit` nodes the report carries a
/// bracket `[ball_bound, best diameter found]` instead of an exact value.
pub fn lebesgue_exact(
    space: &FiniteMetricSpace,
    cover: &RealizedCover,
    search_limit: u64,
) -> Result<LebesgueReport> {
    let ball_bound = lebesgue_ball_bound(space, cover)?;
    let mut search = BadSetSearch::new(space, cover, f64::INFINITY, search_limit, false);
    search.run();
    let witness = search.witness();
    let report = if search.aborted {
        LebesgueReport {
            ball_bound,
            exact: None,
            bracket: Some(Bracket {
                lower: ball_bound,
                upper: search.best,
            }),
            witness,
            method: LebesgueMethod::Bracket,
            nodes: search.nodes,
            truncation: cover.truncation,
        }
    } else {
        LebesgueReport {
            ball_bound,
            exact: Some(search.best),
            bracket: None,
            witness,
            method: LebesgueMethod::MinimalBadSetSearch,
            nodes: search.nodes,
            truncation: cover.truncation,
        }
    };
    Ok(report)
}

/// Supremal Lebesgue number by enumerating every subset of the target.
/// Limited to targets of at most 20 points.
pub fn lebesgue_exact_brute(
    space: &FiniteMetricSpace,
    cover: &RealizedCover,
) -> Result<LebesgueReport> {
    let ball_bound = lebesgue_ball_bound(space, cover)?;
    let pts = cover.target.as_slice();
    if pts.len() > BRUTE_MAX_TARGET {
        return Err(Error::invalid(format!(
            "brute force is limited to {BRUTE_MAX_TARGET} target points, got {}",
            pts.len()
        )));
    }
    let mut best = f64::INFINITY;
    let mut best_set = None;
    let mut subset = Vec::with_capacity(pts.len());
    for mask in 1u32..(1u32 << pts.len()) {
        subset.clear();
        subset.extend(
            (0..pts.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| pts[b]),
        );
        let bad = cover
            .members
            .iter()
            .all(|m| subset.iter().any(|&p| !m.contains(p)));
        if bad {
            let d = space.diameter_of(&subset);
            if d < best {
                best = d;
                best_set = Some(PointSet::new(subset.iter().copied()));
            }
        }
    }
    Ok(LebesgueReport {
        ball_bound,
        exact: Some(best),
        bracket: None,
        witness: best_set,
        method: LebesgueMethod::Brute,
        nodes: (1u64 << pts.len()) - 1,
        truncation: cover.truncation,
    })
}

/// A bad set of diameter `< alpha`, or `None` when `alpha` is a valid
/// Lebesgue number. An uncovered target point is itself a witness.
pub fn lebesgue_witness(
    space: &FiniteMetricSpace,
    cover: &RealizedCover,
    alpha: f64,
) -> Result<Option<PointSet>> {
    if !(alpha > 0.0) {
        return Err(Error::invalid(format!("alpha must be > 0, got {alpha}")));
    }
    let mut search = BadSetSearch::new(space, cover, alpha, DEFAULT_SEARCH_LIMIT, true);
    search.run();
    if search.found {
        Ok(search.witness())
    } else if search.aborted {
        Err(Error::SearchLimit(DEFAULT_SEARCH_LIMIT))
    } else {
        Ok(None)
    }
}
