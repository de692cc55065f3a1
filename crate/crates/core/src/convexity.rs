//! Tolerance-parameterized checks for property P, Menger convexity and
//! metric convexity.
//!
//! On a finite carrier none of these hold exactly except in degenerate
//! cases, so every check takes an explicit `tol`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::serde_ext;
use crate::space::FiniteMetricSpace;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub basepoint: usize,
    pub sorted_distances: Vec<f64>,
    pub sup: f64,
    pub max_gap: f64,
    /// First consecutive pair attaining `max_gap`.
    pub gap_location: (f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConvexityKind {
    PropertyP,
    Menger,
    MetricConvex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityViolation {
    /// `[x]` for property P, `[x, y]` for the pair checks.
    pub points: Vec<usize>,
    /// Uncovered radius `r` (property P, Menger) or the smallest additivity
    /// defect found (metric convexity).
    #[serde(with = "serde_ext")]
    pub value: f64,
    /// Point attaining the smallest defect (metric convexity only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub kind: ConvexityKind,
    pub tol: f64,
    pub holds: bool,
    pub violations: Vec<ConvexityViolation>,
}

impl ConvexityReport {
    fn new(kind: ConvexityKind, tol: f64, mut violations: Vec<ConvexityViolation>) -> Self {
        violations.sort_by(|a, b| a.points.cmp(&b.points).then(a.value.total_cmp(&b.value)));
        ConvexityReport {
            kind,
            tol,
            holds: violations.is_empty(),
            violations,
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol >= 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "tol must be finite and >= 0, got {tol}"
        )))
    }
}

fn sorted_row(space: &FiniteMetricSpace, x: usize) -> Vec<f64> {
    let mut d = space.row(x).to_vec();
    d.sort_by(f64::total_cmp);
    d
}

/// Ascending distances from `x` and the largest gap between neighbours.
pub fn spectrum(space: &FiniteMetricSpace, x: usize) -> Result<SpectrumReport> {
    space.check_index(x)?;
    let sorted = sorted_row(space, x);
    let mut max_gap = 0.0;
    let mut gap_location = (sorted[0], sorted[0]);
    for w in sorted.windows(2) {
        if w[1] - w[0] > max_gap {
            max_gap = w[1] - w[0];
            gap_location = (w[0], w[1]);
        }
    }
    Ok(SpectrumReport {
        basepoint: x,
        sup: *sorted.last().expect("row is nonempty"),
        sorted_distances: sorted,
        max_gap,
        gap_location,
    })
}

/// Approximate property P: from every basepoint, every `r` in `[0, sup)`
/// is within `tol` of an attained distance. Equivalently no consecutive gap
/// in any spectrum exceeds `2 * tol`. Each offending gap is reported with
/// its midpoint.
pub fn property_p_check(space: &FiniteMetricSpace, tol: f64) -> Result<ConvexityReport> {
    check_tol(tol)?;
    let violations: Vec<ConvexityViolation> = (0..space.len())
        .into_par_iter()
        .flat_map_iter(|x| {
            let sorted = sorted_row(space, x);
            sorted
                .windows(2)
                .filter(|w| w[1] - w[0] > 2.0 * tol)
                .map(|w| ConvexityViolation {
                    points: vec![x],
                    value: 0.5 * (w[0] + w[1]),
                    witness: None,
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(ConvexityReport::new(
        ConvexityKind::PropertyP,
        tol,
        violations,
    ))
}

/// Sweeps the certified radii of the pair `(x, y)`. Point `z` certifies `r`
/// when `d(x,z) <= r + tol` and `d(y,z) <= d(x,y) - r + tol`, an interval
/// `[d(x,z) - tol, d(x,y) - d(y,z) + tol]`. `order` lists all points by
/// distance from `x`, which is also the order of the interval left ends.
///
/// Returns the midpoint of the first uncovered stretch of `[0, d(x,y)]`.
fn menger_sweep(
    space: &FiniteMetricSpace,
    x: usize,
    y: usize,
    tol: f64,
    order: &[usize],
) -> Option<f64> {
    let d = space.dist(x, y);
    let rx = space.row(x);
    let ry = space.row(y);
    // [0, reach] is covered; reach < 0 means nothing is yet
    let mut reach = f64::NEG_INFINITY;
    for &z in order {
        let lo = rx[z] - tol;
        let hi = d - ry[z] + tol;
        let start = reach.max(0.0);
        if lo > start {
            return Some(0.5 * (start + lo.min(d)));
        }
        if hi >= 0.0 {
            reach = reach.max(hi);
        }
        if reach >= d {
            return None;
        }
    }
    let start = reach.max(0.0);
    Some(0.5 * (start + d))
}

/// First uncovered radius of the Menger condition for one pair, if any.
pub fn menger_gap(space: &FiniteMetricSpace, x: usize, y: usize, tol: f64) -> Result<Option<f64>> {
    check_tol(tol)?;
    space.check_index(x)?;
    space.check_index(y)?;
    Ok(menger_sweep(space, x, y, tol, &space.order_from(x)))
}

/// Approximate Menger convexity: for every pair and every
/// `0 <= r <= d(x,y)`, the closed balls `B[x, r + tol]` and
/// `B[y, d(x,y) - r + tol]` share a point. The radius sweep is exact.
pub fn menger_check(space: &FiniteMetricSpace, tol: f64) -> Result<ConvexityReport> {
    check_tol(tol)?;
    let n = space.len();
    let violations: Vec<ConvexityViolation> = (0..n)
        .into_par_iter()
        .flat_map_iter(|x| {
            let order = space.order_from(x);
            (x + 1..n)
                .filter_map(|y| {
                    menger_sweep(space, x, y, tol, &order).map(|r| ConvexityViolation {
                        points: vec![x, y],
                        value: r,
                        witness: None,
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(ConvexityReport::new(ConvexityKind::Menger, tol, violations))
}

/// Smallest `|d(x,z) + d(z,y) - d(x,y)|` over `z ∉ {x, y}` and the first
/// point attaining it; `(+inf, None)` when there is no such `z`.
pub fn metric_defect(space: &FiniteMetricSpace, x: usize, y: usize) -> (f64, Option<usize>) {
    let d = space.dist(x, y);
    let (rx, ry) = (space.row(x), space.row(y));
    let mut best = (f64::INFINITY, None);
    for z in 0..space.len() {
        if z == x || z == y {
            continue;
        }
        let defect = (rx[z] + ry[z] - d).abs();
        if defect < best.0 {
            best = (defect, Some(z));
        }
    }
    best
}

/// Approximate metric convexity: every pair of distinct points has a third
/// point whose additivity defect is at most `tol`.
pub fn metric_convexity_check(space: &FiniteMetricSpace, tol: f64) -> Result<ConvexityReport> {
    check_tol(tol)?;
    let n = space.len();
    let violations: Vec<ConvexityViolation> = (0..n)
        .into_par_iter()
        .flat_map_iter(|x| {
            (x + 1..n)
                .filter_map(|y| {
                    let (defect, witness) = metric_defect(space, x, y);
                    (defect > tol).then(|| ConvexityViolation {
                        points: vec![x, y],
                        value: defect,
                        witness,
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(ConvexityReport::new(
        ConvexityKind::MetricConvex,
        tol,
        violations,
    ))
}
