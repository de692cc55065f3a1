//! Finite metric spaces and the distance primitives everything else uses.
//!
//! A [`FiniteMetricSpace`] is a list of unique labels plus a dense distance
//! matrix, validated against the metric axioms up to `axiom_tol` at
//! construction. It is immutable afterwards.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative factor used for the default axiom tolerance.
pub const DEFAULT_AXIOM_TOL_FACTOR: f64 = 1e-9;

/// A sorted, duplicate-free set of point indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct PointSet(Vec<usize>);

impl PointSet {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        PointSet(v)
    }

    pub fn empty() -> Self {
        PointSet(Vec::new())
    }

    pub fn singleton(i: usize) -> Self {
        PointSet(vec![i])
    }

    /// All indices `0..n`.
    pub fn full(n: usize) -> Self {
        PointSet((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.iter().all(|i| other.contains(i))
    }

    /// Membership mask of length `n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for i in self.iter() {
            if i < n {
                m[i] = true;
            }
        }
        m
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl From<Vec<usize>> for PointSet {
    fn from(v: Vec<usize>) -> Self {
        PointSet::new(v)
    }
}

impl From<PointSet> for Vec<usize> {
    fn from(s: PointSet) -> Self {
        s.0
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        PointSet::new(iter)
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = usize;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, usize>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Asymmetry,
    Negative,
    NonzeroSelf,
    Triangle,
}

/// One failed metric axiom. `magnitude` is the amount by which the axiom is
/// broken and always exceeds the tolerance in force.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricViolation {
    pub kind: ViolationKind,
    pub witness: Vec<usize>,
    pub magnitude: f64,
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} at {:?} (magnitude {})",
            self.kind, self.witness, self.magnitude
        )
    }
}

/// Coordinate metrics understood by [`FiniteMetricSpace::from_points`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Euclidean,
    L1,
    Chebyshev,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::L1 => "l1",
            Metric::Chebyshev => "chebyshev",
        }
    }

    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        match self {
            Metric::Euclidean => {
                if a.len() == 1 {
                    (a[0] - b[0]).abs()
                } else {
                    diffs.map(|d| d * d).sum::<f64>().sqrt()
                }
            }
            Metric::L1 => diffs.sum(),
            Metric::Chebyshev => diffs.fold(0.0, f64::max),
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" | "l2" => Ok(Metric::Euclidean),
            "l1" | "manhattan" => Ok(Metric::L1),
            "chebyshev" | "max" | "linf" => Ok(Metric::Chebyshev),
            _ => Err(Error::UnknownMetric(s.to_string())),
        }
    }
}

/// Labeled points with a dense, validated distance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<f64>,
    axiom_tol: f64,
}

impl FiniteMetricSpace {
    /// Builds a space from an explicit matrix and checks every axiom,
    /// including the exhaustive triangle scan.
    ///
    /// When `axiom_tol` is `None` it defaults to `1e-9 * max entry`.
    pub fn from_matrix(
        labels: Vec<String>,
        matrix: Vec<Vec<f64>>,
        axiom_tol: Option<f64>,
    ) -> Result<Self> {
        let violations = validate_matrix(&labels, &matrix, axiom_tol)?;
        if !violations.is_empty() {
            return Err(Error::MetricViolations(violations));
        }
        let tol = resolve_tol(&matrix, axiom_tol);
        Ok(FiniteMetricSpace {
            labels,
            dist: matrix.into_iter().flatten().collect(),
            axiom_tol: tol,
        })
    }

    /// Builds a space from coordinates under one of the coordinate metrics.
    ///
    /// Labels default to `p0, p1, ...`. Distances come from a genuine norm so
    /// the triangle inequality holds up to rounding; the cubic triangle scan
    /// is skipped here.
    pub fn from_points(
        coords: &[Vec<f64>],
        metric: Metric,
        axiom_tol: Option<f64>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let n = coords.len();
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        let dim = coords[0].len();
        if dim == 0 {
            return Err(Error::invalid("coordinates must have dimension >= 1"));
        }
        for (index, c) in coords.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::RaggedCoordinates {
                    index,
                    found: c.len(),
                    expected: dim,
                });
            }
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid(format!(
                    "point {index} has a non-finite coordinate"
                )));
            }
        }
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| format!("p{i}")).collect());
        if labels.len() != n {
            return Err(Error::LabelCount {
                labels: labels.len(),
                rows: n,
            });
        }
        check_labels(&labels)?;

        let mut dist = vec![0.0; n * n];
        dist.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for (j, slot) in row.iter_mut().enumerate() {
                if i != j {
                    *slot = metric.distance(&coords[i], &coords[j]);
                }
            }
        });
        let max = dist.iter().copied().fold(0.0, f64::max);
        let tol = axiom_tol.unwrap_or(DEFAULT_AXIOM_TOL_FACTOR * max);
        if !(tol >= 0.0) {
            return Err(Error::invalid("axiom_tol must be nonnegative"));
        }
        Ok(FiniteMetricSpace {
            labels,
            dist,
            axiom_tol: tol,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false for a constructed space; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn axiom_tol(&self) -> f64 {
        self.axiom_tol
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.len() + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.dist[i * n..(i + 1) * n]
    }

    /// Copy of the matrix as nested rows.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.len()).map(|r| r.to_vec()).collect()
    }

    pub fn max_distance(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    pub fn all(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            })
        }
    }

    pub fn check_set(&self, set: &PointSet) -> Result<()> {
        match set.as_slice().last() {
            Some(&i) => self.check_index(i),
            None => Ok(()),
        }
    }

    /// Largest pairwise distance in `set`; 0 for singletons.
    pub fn diameter(&self, set: &PointSet) -> Result<f64> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        self.check_set(set)?;
        Ok(self.diameter_of(set.as_slice()))
    }

    /// Unchecked diameter of an index slice (0 when it has < 2 points).
    pub(crate) fn diameter_of(&self, pts: &[usize]) -> f64 {
        let mut d: f64 = 0.0;
        for (a, &i) in pts.iter().enumerate() {
            for &j in &pts[a + 1..] {
                d = d.max(self.dist(i, j));
            }
        }
        d
    }

    /// `d(x_i, X \ {x_i})`: distance from `i` to its nearest other point.
    pub fn isolation(&self, i: usize) -> Result<f64> {
        if self.len() < 2 {
            return Err(Error::SingletonSpace);
        }
        self.check_index(i)?;
        Ok(self
            .row(i)
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &d)| d)
            .fold(f64::INFINITY, f64::min))
    }

    /// Open (`d < r`) or closed (`d <= r`) ball around `center`.
    pub fn ball(&self, center: usize, radius: f64, closed: bool) -> Result<PointSet> {
        self.check_index(center)?;
        if !(radius >= 0.0) {
            return Err(Error::invalid(format!(
                "ball radius must be >= 0, got {radius}"
            )));
        }
        Ok(self.ball_unchecked(center, radius, closed))
    }

    pub(crate) fn ball_unchecked(&self, center: usize, radius: f64, closed: bool) -> PointSet {
        let row = self.row(center);
        PointSet(
            (0..self.len())
                .filter(|&j| {
                    if closed {
                        row[j] <= radius
                    } else {
                        row[j] < radius
                    }
                })
                .collect(),
        )
    }

    /// Indices of all points ordered by distance from `i` (ties by index).
    pub fn order_from(&self, i: usize) -> Vec<usize> {
        let row = self.row(i);
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| row[a].total_cmp(&row[b]).then(a.cmp(&b)));
        order
    }
}

fn resolve_tol(matrix: &[Vec<f64>], axiom_tol: Option<f64>) -> f64 {
    axiom_tol.unwrap_or_else(|| {
        let max = matrix
            .iter()
            .flatten()
            .copied()
            .filter(|x| x.is_finite())
            .fold(0.0, f64::max);
        DEFAULT_AXIOM_TOL_FACTOR * max
    })
}

fn check_labels(labels: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// Checks shape and labels, then returns every axiom violation beyond the
/// tolerance. Structural problems (shape, duplicate labels, non-finite
/// entries) are errors rather than violations.
pub fn validate_matrix(
    labels: &[String],
    matrix: &[Vec<f64>],
    axiom_tol: Option<f64>,
) -> Result<Vec<MetricViolation>> {
    let n = matrix.len();
    if n == 0 {
        return Err(Error::EmptySpace);
    }
    if labels.len() != n {
        return Err(Error::LabelCount {
            labels: labels.len(),
            rows: n,
        });
    }
    for (row, r) in matrix.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NotSquare {
                row,
                found: r.len(),
                expected: n,
            });
        }
        if let Some(col) = r.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(row, col));
        }
    }
    check_labels(labels)?;
    let tol = resolve_tol(matrix, axiom_tol);
    if !(tol >= 0.0) {
        return Err(Error::invalid("axiom_tol must be nonnegative"));
    }

    let mut out = Vec::new();
    for i in 0..n {
        let d = matrix[i][i];
        if d.abs() > tol {
            out.push(MetricViolation {
                kind: ViolationKind::NonzeroSelf,
                witness: vec![i],
                magnitude: d.abs(),
            });
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && -matrix[i][j] > tol {
                out.push(MetricViolation {
                    kind: ViolationKind::Negative,
                    witness: vec![i, j],
                    magnitude: -matrix[i][j],
                });
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let gap = (matrix[i][j] - matrix[j][i]).abs();
            if gap > tol {
                out.push(MetricViolation {
                    kind: ViolationKind::Asymmetry,
                    witness: vec![i, j],
                    magnitude: gap,
                });
            }
        }
    }
    let triangle: Vec<Vec<MetricViolation>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut local = Vec::new();
            for k in 0..n {
                if k == i {
                    continue;
                }
                let direct = matrix[i][k];
                for j in 0..n {
                    if j == i || j == k {
                        continue;
                    }
                    let excess = direct - (matrix[i][j] + matrix[j][k]);
                    if excess > tol {
                        local.push(MetricViolation {
                            kind: ViolationKind::Triangle,
                            witness: vec![i, j, k],
                            magnitude: excess,
                        });
                    }
                }
            }
            local
        })
        .collect();
    out.extend(triangle.into_iter().flatten());
    Ok(out)
}
