use serde_json::json;

use super::check::{Check, Expectation};
use super::{ExampleBundle, NamedCover};
use crate::boundedness::max_separated_subset;
use crate::chains::chainability_threshold;
use crate::covers::{adversarial_cover, Cover, CoverElement, ParametricBallFamily, RadiusFormula};
use crate::error::{Error, Result};
use crate::space::{FiniteMetricSpace, Metric, PointSet};

/// Grid tolerances sit exactly on distance ties; this absorbs the rounding
/// of non-dyadic sample coordinates.
const TIE_SLACK: f64 = 1e-9;

fn line_space(xs: &[f64], labels: Vec<String>) -> Result<FiniteMetricSpace> {
    let coords: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
    FiniteMetricSpace::from_points(&coords, Metric::L1, Some(0.0), Some(labels))
}

fn harmonic_family(n: usize) -> ParametricBallFamily {
    ParametricBallFamily {
        label: Some("B".into()),
        range: n,
        centers: (0..n).collect(),
        radius: RadiusFormula::Harmonic { c: 1.0 },
    }
}

/// `N` cell-centred samples of `(0,1) ∪ (1,2)` covered by the two halves.
pub fn gen_two_intervals(n: usize) -> Result<ExampleBundle> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::invalid(format!("N must be even and >= 4, got {n}")));
    }
    let step = 2.0 / n as f64;
    let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * step).collect();
    let labels = xs.iter().map(|x| format!("{x}")).collect();
    let space = line_space(&xs, labels)?;
    let half = n / 2;
    let mut cross_gap = f64::INFINITY;
    for i in 0..half {
        for j in half..n {
            cross_gap = cross_gap.min(space.dist(i, j));
        }
    }
    let cover = Cover::new()
        .element(CoverElement::explicit(0..half).labeled("(0,1)"))
        .element(CoverElement::explicit(half..n).labeled("(1,2)"));
    let halves = "halves".to_string();
    Ok(ExampleBundle {
        name: "two_intervals".into(),
        provenance: "totally bounded subset (0,1) ∪ (1,2) of the line".into(),
        params: [("N".to_string(), json!(n))].into(),
        resolution: step,
        space,
        covers: vec![NamedCover::new(&halves, cover)],
        expectations: vec![
            Expectation::new(
                "covers",
                Check::Covers {
                    cover: halves.clone(),
                },
                0.0,
            ),
            Expectation::new(
                "exact-is-cross-gap",
                Check::LebesgueExact {
                    cover: halves.clone(),
                    target: None,
                    min: cross_gap,
                    max: cross_gap,
                },
                1e-12,
            ),
            Expectation::new(
                "exact-at-most-4/N",
                Check::LebesgueExact {
                    cover: halves,
                    target: None,
                    min: 0.0,
                    max: 4.0 / n as f64,
                },
                0.0,
            ),
        ],
    })
}

/// Points `1/n` of `(0,2)` with the open balls `B(1/n, 1/n - 1/(n+1))`.
pub fn gen_harmonic_in_02(n: usize) -> Result<ExampleBundle> {
    if n < 2 {
        return Err(Error::invalid(format!("N must be >= 2, got {n}")));
    }
    let xs: Vec<f64> = (1..=n).map(|k| 1.0 / k as f64).collect();
    let labels = (1..=n).map(|k| format!("1/{k}")).collect();
    let space = line_space(&xs, labels)?;
    let name = "harmonic".to_string();
    let tail = PointSet::new(n / 2..n);
    Ok(ExampleBundle {
        name: "harmonic_in_02".into(),
        provenance: "S = {1/n} in (0,2) with balls of radius 1/n - 1/(n+1)".into(),
        params: [("N".to_string(), json!(n))].into(),
        resolution: 1.0 / (n * (n + 1)) as f64,
        space,
        covers: vec![NamedCover::new(
            &name,
            Cover::new().family(harmonic_family(n)),
        )],
        expectations: vec![
            Expectation::new(
                "covers",
                Check::Covers {
                    cover: name.clone(),
                },
                0.0,
            ),
            Expectation::new(
                "each-ball-holds-only-its-center",
                Check::OwnCenterOnly {
                    cover: name.clone(),
                },
                0.0,
            ),
            Expectation::new(
                "tail-subcover-needs-every-ball",
                Check::SubcoverSize {
                    cover: name.clone(),
                    expected: tail.len(),
                    set: tail,
                },
                0.0,
            ),
            Expectation::new(
                "subcover-of-S-has-size-N",
                Check::SubcoverSize {
                    cover: name,
                    set: PointSet::full(n),
                    expected: n,
                },
                0.0,
            ),
        ],
    })
}

/// `(0,1]` sampled by every `1/n` (`n <= N`) followed by `4N` cell-centred
/// fill points, under the truncated harmonic cover.
pub fn gen_unit_left_open(n: usize) -> Result<ExampleBundle> {
    if n < 2 {
        return Err(Error::invalid(format!("N must be >= 2, got {n}")));
    }
    let m = 4 * n;
    let mut xs: Vec<f64> = (1..=n).map(|k| 1.0 / k as f64).collect();
    let mut labels: Vec<String> = (1..=n).map(|k| format!("1/{k}")).collect();
    let mut uncovered = Vec::new();
    for j in 1..=m {
        // (2j-1)/(2M) == 1/k exactly
        if (1..=n).any(|k| (2 * j - 1) * k == 2 * m) {
            continue;
        }
        // at or below 1/(N+1)
        if (2 * j - 1) * (n + 1) <= 2 * m {
            uncovered.push(xs.len());
        }
        xs.push((j as f64 - 0.5) / m as f64);
        labels.push(format!("f{j}"));
    }
    let space = line_space(&xs, labels)?;
    let uncovered = PointSet::new(uncovered);
    let covered: PointSet = space
        .all()
        .iter()
        .filter(|&p| !uncovered.contains(p))
        .collect();
    let bound = 4.0 / n as f64;
    let mut alphas = vec![0.5];
    while alphas[alphas.len() - 1] / 2.0 >= bound {
        alphas.push(alphas[alphas.len() - 1] / 2.0);
    }
    let name = "harmonic".to_string();
    Ok(ExampleBundle {
        name: "unit_left_open".into(),
        provenance: "(0,1] with the locally finite harmonic ball cover".into(),
        params: [("N".to_string(), json!(n)), ("M".to_string(), json!(m))].into(),
        resolution: bound,
        space,
        covers: vec![NamedCover::new(
            &name,
            Cover::new().family(harmonic_family(n)),
        )],
        expectations: vec![
            Expectation::new(
                "truncation-misses-exactly-the-points-below-1/(N+1)",
                Check::UncoveredEquals {
                    cover: name.clone(),
                    expected: uncovered,
                },
                0.0,
            ),
            Expectation::new(
                "witnesses-down-to-4/N",
                Check::Witnesses {
                    cover: name.clone(),
                    target: Some(covered),
                    alphas,
                },
                0.0,
            ),
            Expectation::new(
                "ball-around-1-contains-target-{1}",
                Check::LebesgueExact {
                    cover: name,
                    target: Some(PointSet::singleton(0)),
                    min: f64::INFINITY,
                    max: f64::INFINITY,
                },
                0.0,
            ),
        ],
    })
}

/// Distance between `e_a/i` and `e_b/j` in `l1`.
pub fn l1_distance(a: usize, i: usize, b: usize, j: usize) -> f64 {
    let (x, y) = (1.0 / i as f64, 1.0 / j as f64);
    if a == b {
        (x - y).abs()
    } else {
        x + y
    }
}

/// The points `e_m/n` (`m <= M`, `n <= N`) and `0` of `l1`, with distances
/// from the closed formula.
pub fn gen_l1_family(m_count: usize, n_count: usize) -> Result<ExampleBundle> {
    if m_count == 0 || n_count == 0 {
        return Err(Error::invalid(format!(
            "M and N must be >= 1, got M={m_count}, N={n_count}"
        )));
    }
    let mut pts = Vec::new();
    for m in 1..=m_count {
        for n in 1..=n_count {
            pts.push((m, n));
        }
    }
    let size = pts.len() + 1;
    let mut matrix = vec![vec![0.0; size]; size];
    for (r, &(a, i)) in pts.iter().enumerate() {
        for (c, &(b, j)) in pts.iter().enumerate() {
            if r != c {
                matrix[r][c] = l1_distance(a, i, b, j);
            }
        }
        matrix[r][size - 1] = 1.0 / i as f64;
        matrix[size - 1][r] = 1.0 / i as f64;
    }
    let mut labels: Vec<String> = pts.iter().map(|(m, n)| format!("e{m}/{n}")).collect();
    labels.push("0".into());
    let space = FiniteMetricSpace::from_matrix(labels, matrix, Some(1e-12))?;
    Ok(ExampleBundle {
        name: "l1_family".into(),
        provenance: "S = {e_m/n} ∪ {0} in l1".into(),
        params: [
            ("M".to_string(), json!(m_count)),
            ("N".to_string(), json!(n_count)),
        ]
        .into(),
        resolution: 1.0 / (n_count * (n_count + 1).max(2)) as f64,
        space,
        covers: Vec::new(),
        expectations: vec![
            Expectation::new(
                "1.5-separated-subset-has-M-points",
                Check::SeparatedAtLeast {
                    eps: 1.5,
                    min_size: m_count,
                },
                0.0,
            ),
            Expectation::new("every-point-isolated", Check::IsolationPositive, 0.0),
        ],
    })
}

/// Two horizontal segments `y = 0` and `y = gap`, `N` cell-centred samples
/// each, Euclidean metric.
pub fn gen_parallel_lines(gap: f64, halfwidth: f64, n: usize) -> Result<ExampleBundle> {
    if !(gap > 0.0 && gap.is_finite() && halfwidth > 0.0 && halfwidth.is_finite()) || n < 2 {
        return Err(Error::invalid(format!(
            "need gap > 0, halfwidth > 0 and N >= 2, got gap={gap}, halfwidth={halfwidth}, N={n}"
        )));
    }
    let step = 2.0 * halfwidth / n as f64;
    let mut coords = Vec::with_capacity(2 * n);
    let mut labels = Vec::with_capacity(2 * n);
    for (row, y) in [(0, 0.0), (1, gap)] {
        for i in 0..n {
            coords.push(vec![-halfwidth + (i as f64 + 0.5) * step, y]);
            labels.push(format!("l{row}_{i}"));
        }
    }
    let space = FiniteMetricSpace::from_points(&coords, Metric::Euclidean, None, Some(labels))?;
    let mid = n / 2;
    Ok(ExampleBundle {
        name: "parallel_lines".into(),
        provenance:
            "union of two parallel lines: property P, neither chainable nor metrically convex"
                .into(),
        params: [
            ("gap".to_string(), json!(gap)),
            ("halfwidth".to_string(), json!(halfwidth)),
            ("N".to_string(), json!(n)),
        ]
        .into(),
        resolution: step,
        space,
        covers: Vec::new(),
        expectations: vec![
            Expectation::new(
                "property-p-at-sampling-step",
                Check::PropertyP,
                step * (1.0 + TIE_SLACK),
            ),
            Expectation::new(
                "split-at-half-gap",
                Check::ComponentsAtLeast {
                    eps: gap / 2.0,
                    min: 2,
                },
                0.0,
            ),
            Expectation::new(
                "cross-pair-not-metrically-convex",
                Check::MetricConvexityFails {
                    pair: [mid, n + mid],
                },
                // the smallest cross-pair defect exceeds one step
                (gap / 4.0).min(step),
            ),
        ],
    })
}

/// Cell-centred `N x N` grid of `[-2,2]^2` without the points within half a
/// step of the unit circle, Chebyshev metric.
pub fn gen_punctured_square_maxmetric(n: usize) -> Result<ExampleBundle> {
    if n < 8 {
        return Err(Error::invalid(format!("N must be >= 8, got {n}")));
    }
    let step = 4.0 / n as f64;
    let mut coords = Vec::new();
    let mut labels = Vec::new();
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (
                -2.0 + (i as f64 + 0.5) * step,
                -2.0 + (j as f64 + 0.5) * step,
            );
            let r = x.hypot(y);
            if (r - 1.0).abs() < step / 2.0 {
                continue;
            }
            if r < 1.0 {
                inside.push(coords.len());
            } else {
                outside.push(coords.len());
            }
            coords.push(vec![x, y]);
            labels.push(format!("{i},{j}"));
        }
    }
    let space = FiniteMetricSpace::from_points(&coords, Metric::Chebyshev, None, Some(labels))?;
    let mut moat = f64::INFINITY;
    for &a in &inside {
        let row = space.row(a);
        for &b in &outside {
            moat = moat.min(row[b]);
        }
    }
    let eps = 0.99 * moat;
    Ok(ExampleBundle {
        name: "punctured_square".into(),
        provenance:
            "plane minus the unit circle under the max metric: Menger convex, not connected".into(),
        params: [
            ("N".to_string(), json!(n)),
            ("moat".to_string(), json!(moat)),
        ]
        .into(),
        resolution: step,
        space,
        covers: Vec::new(),
        expectations: vec![
            Expectation::new(
                "menger-at-grid-step",
                Check::Menger,
                step * (1.0 + TIE_SLACK),
            ),
            Expectation::new(
                "split-below-moat-width",
                Check::ComponentsAtLeast { eps, min: 2 },
                0.0,
            ),
            Expectation::new(
                "inside-and-outside-separated-below-moat-width",
                Check::SeparatesSets {
                    eps,
                    a: PointSet::new(inside),
                    b: PointSet::new(outside),
                },
                0.0,
            ),
        ],
    })
}

/// Upper bound on the exact Lebesgue number of the adversarial cover built
/// from `separated` points: `eps/(4|S|)` plus the chainability threshold.
pub fn adversarial_resolution(space: &FiniteMetricSpace, eps: f64, separated: usize) -> f64 {
    eps / (4.0 * separated as f64) + chainability_threshold(space)
}

/// The cover `{B(x_n, eps/(4n))} ∪ {X \ S}` over a maximal ε-separated set.
pub fn gen_adversarial_from(
    space: &FiniteMetricSpace,
    eps: f64,
    base: &str,
) -> Result<ExampleBundle> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid(format!("eps must be > 0, got {eps}")));
    }
    let witness = max_separated_subset(space, &space.all(), eps)?;
    if witness.size() < 2 {
        return Err(Error::invalid(format!(
            "no eps-separated pair at eps={eps}"
        )));
    }
    let cover = adversarial_cover(space, &witness)?;
    let bound = adversarial_resolution(space, eps, witness.size());
    let mut alphas: Vec<f64> = [0.9, 0.5, 0.2, 0.1]
        .iter()
        .map(|f| f * eps)
        .filter(|&a| a > bound)
        .collect();
    alphas.push(bound * (1.0 + 1e-6));
    let name = "adversarial".to_string();
    Ok(ExampleBundle {
        name: format!("adversarial/{base}"),
        provenance: "cover {B(x_n, eps/4n)} ∪ {X \\ S} from a separated sequence".into(),
        params: [
            ("eps".to_string(), json!(eps)),
            ("separated".to_string(), json!(witness.size())),
            ("resolution".to_string(), json!(bound)),
        ]
        .into(),
        resolution: bound,
        space: space.clone(),
        covers: vec![NamedCover::new(&name, cover)],
        expectations: vec![
            Expectation::new(
                "incidence-at-most-two",
                Check::LocalFiniteness {
                    cover: name.clone(),
                    delta: eps / 8.0,
                    max: 2,
                },
                0.0,
            ),
            Expectation::new(
                "witnesses-above-resolution",
                Check::Witnesses {
                    cover: name.clone(),
                    target: None,
                    alphas,
                },
                0.0,
            ),
            Expectation::new(
                "exact-below-resolution",
                Check::LebesgueExact {
                    cover: name,
                    target: None,
                    min: 0.0,
                    max: bound,
                },
                0.0,
            ),
        ],
    })
}

/// Integer points `1..=n` on the line.
pub fn integer_line(n: usize) -> Result<FiniteMetricSpace> {
    let xs: Vec<f64> = (1..=n).map(|k| k as f64).collect();
    line_space(&xs, (1..=n).map(|k| k.to_string()).collect())
}
