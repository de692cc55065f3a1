#![allow(dead_code)]

use metriclab_core::covers::{realize, Cover, CoverElement, RealizedCover};
use metriclab_core::{FiniteMetricSpace, Metric, PointSet};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// Uniform `[0,1]` entries replaced by their shortest-path closure.
pub fn random_closure(rng: &mut ChaCha8Rng, n: usize) -> FiniteMetricSpace {
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v: f64 = rng.gen();
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    FiniteMetricSpace::from_matrix(labels(n), d, None).unwrap()
}

pub fn random_cloud(
    rng: &mut ChaCha8Rng,
    n: usize,
    dim: usize,
    metric: Metric,
) -> FiniteMetricSpace {
    let coords: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
        .collect();
    FiniteMetricSpace::from_points(&coords, metric, None, None).unwrap()
}

/// Mixed balls, explicit sets and complements (at most `max_members`),
/// patched with one explicit member if some point is left uncovered.
pub fn random_cover(
    rng: &mut ChaCha8Rng,
    space: &FiniteMetricSpace,
    max_members: usize,
) -> (Cover, RealizedCover) {
    let n = space.len();
    let k = rng.gen_range(1..max_members);
    let mut cover = Cover::new();
    for _ in 0..k {
        let e = match rng.gen_range(0..3) {
            0 => {
                let c = rng.gen_range(0..n);
                let r = rng.gen_range(0.05..1.0) * space.max_distance().max(1e-9);
                CoverElement::ball(c, r)
            }
            1 => CoverElement::explicit((0..n).filter(|_| rng.gen_bool(0.5))),
            _ => {
                let mut idx: Vec<usize> = (0..n).collect();
                idx.shuffle(rng);
                CoverElement::complement(idx.into_iter().take(rng.gen_range(1..=n.min(3))))
            }
        };
        cover = cover.element(e);
    }
    let missing = realize(space, &cover).unwrap().uncovered();
    if !missing.is_empty() {
        cover = cover.element(CoverElement::explicit(missing.iter()));
    }
    let realized = realize(space, &cover).unwrap();
    (cover, realized)
}

pub fn all_subsets(n: usize) -> impl Iterator<Item = PointSet> {
    (1u32..(1u32 << n)).map(move |m| (0..n).filter(|b| m >> b & 1 == 1).collect())
}
