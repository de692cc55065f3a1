//! Independent brute-force oracles checked against the library on seeded
//! random corpora.

mod common;

use common::{all_subsets, random_closure, random_cloud, random_cover};
use metriclab_core::boundedness::{greedy_eps_net, is_eps_net, max_separated_subset};
use metriclab_core::chains::{chainability_threshold, eps_chain, eps_components};
use metriclab_core::convexity::{menger_gap, property_p_check};
use metriclab_core::covers::{
    finite_subcover, lebesgue_ball_bound, lebesgue_exact, lebesgue_exact_brute, Subcover,
    DEFAULT_SEARCH_LIMIT,
};
use metriclab_core::{FiniteMetricSpace, Metric, PointSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected-component count by repeated flood fill.
fn flood_components(s: &FiniteMetricSpace, eps: f64) -> usize {
    let n = s.len();
    let mut seen = vec![false; n];
    let mut count = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if !seen[w] && s.dist(v, w) <= eps {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}

#[test]
fn threshold_is_smallest_connecting_entry() {
    let mut r = rng(11);
    for case in 0..60 {
        let n = r.gen_range(2..30);
        let s = if case % 2 == 0 {
            random_closure(&mut r, n)
        } else {
            random_cloud(&mut r, n, 2, Metric::Euclidean)
        };
        let mut entries: Vec<f64> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| s.dist(i, j))
            .collect();
        entries.sort_by(f64::total_cmp);
        entries.dedup();
        let oracle = entries
            .iter()
            .copied()
            .find(|&e| flood_components(&s, e) == 1)
            .unwrap();
        assert_eq!(chainability_threshold(&s), oracle, "case {case}");
    }
}

#[test]
fn components_and_chains_agree_with_flood_fill() {
    let mut r = rng(12);
    for _ in 0..40 {
        let n = r.gen_range(2..25);
        let s = random_cloud(&mut r, n, 2, Metric::L1);
        let eps = r.gen_range(0.05..0.5);
        let parts = eps_components(&s, eps).unwrap();
        assert_eq!(parts.len(), flood_components(&s, eps));
        for x in 0..n {
            for y in 0..n {
                let same = parts.iter().any(|p| p.contains(&x) && p.contains(&y));
                let chain = eps_chain(&s, x, y, eps).unwrap();
                assert_eq!(chain.is_some(), same);
                if let Some(c) = chain {
                    assert!(c.verify(&s));
                    assert_eq!((c.start(), c.end()), (x, y));
                }
            }
        }
    }
}

/// Minimum bad-set diameter over every nonempty subset of the target.
fn power_set_lebesgue(s: &FiniteMetricSpace, members: &[PointSet], target: &PointSet) -> f64 {
    let pts = target.as_slice();
    let mut best = f64::INFINITY;
    for sub in all_subsets(pts.len()) {
        let a: Vec<usize> = sub.iter().map(|k| pts[k]).collect();
        if members.iter().any(|m| a.iter().all(|&p| m.contains(p))) {
            continue;
        }
        let mut diam: f64 = 0.0;
        for &p in &a {
            for &q in &a {
                diam = diam.max(s.dist(p, q));
            }
        }
        best = best.min(diam);
    }
    best
}

#[test]
fn lebesgue_matches_power_set_oracle() {
    let mut r = rng(13);
    for case in 0..120 {
        let n = r.gen_range(1..=11);
        let s = random_closure(&mut r, n);
        let (_, cover) = random_cover(&mut r, &s, 6);
        let sets: Vec<PointSet> = cover.members.iter().map(|m| m.set.clone()).collect();
        let oracle = power_set_lebesgue(&s, &sets, &cover.target);
        let exact = lebesgue_exact(&s, &cover, DEFAULT_SEARCH_LIMIT).unwrap();
        let brute = lebesgue_exact_brute(&s, &cover).unwrap();
        assert_eq!(exact.exact, Some(oracle), "case {case}");
        assert_eq!(brute.exact, Some(oracle), "case {case}");
        assert!(lebesgue_ball_bound(&s, &cover).unwrap() <= oracle);
        if let Some(w) = exact.witness {
            assert_eq!(s.diameter(&w).unwrap(), oracle);
            assert!(!sets.iter().any(|m| w.is_subset(m)));
        } else {
            assert_eq!(oracle, f64::INFINITY);
        }
    }
}

/// Property P at `tol` checked on a grid of radii instead of spectrum gaps.
fn property_p_grid(s: &FiniteMetricSpace, tol: f64) -> bool {
    (0..s.len()).all(|x| {
        let row = s.row(x);
        let sup = row.iter().copied().fold(0.0, f64::max);
        let steps = 400;
        (0..steps).all(|k| {
            let r = sup * k as f64 / steps as f64;
            row.iter().any(|&d| (d - r).abs() <= tol)
        })
    })
}

#[test]
fn property_p_agrees_with_radius_grid() {
    let mut r = rng(14);
    for _ in 0..40 {
        let n = r.gen_range(2..15);
        let s = random_cloud(&mut r, n, 1, Metric::Euclidean);
        let tol = r.gen_range(0.01..0.3);
        let report = property_p_check(&s, tol).unwrap();
        if report.holds {
            assert!(property_p_grid(&s, tol));
        }
        for v in &report.violations {
            let row = s.row(v.points[0]);
            assert!(row.iter().all(|&d| (d - v.value).abs() > tol));
        }
    }
}

#[test]
fn menger_agrees_with_radius_grid() {
    let mut r = rng(15);
    for _ in 0..25 {
        let n = r.gen_range(2..12);
        let s = random_closure(&mut r, n);
        let tol = r.gen_range(0.0..0.2);
        for x in 0..n {
            for y in 0..n {
                let d = s.dist(x, y);
                let gap = menger_gap(&s, x, y, tol).unwrap();
                let steps = 500;
                let grid_ok = (0..=steps).all(|k| {
                    let rad = d * k as f64 / steps as f64;
                    (0..n).any(|z| s.dist(x, z) <= rad + tol && s.dist(z, y) <= d - rad + tol)
                });
                if gap.is_none() {
                    assert!(grid_ok, "sweep covered but grid found a hole");
                }
                if let Some(rad) = gap {
                    assert!(rad >= 0.0 && rad <= d);
                    let hole =
                        !(0..n).any(|z| s.dist(x, z) <= rad + tol && s.dist(z, y) <= d - rad + tol);
                    assert!(hole, "reported radius {rad} is certified");
                }
            }
        }
    }
}

/// Smallest ε-net by enumeration in order of size.
fn min_net_size(s: &FiniteMetricSpace, eps: f64) -> usize {
    let n = s.len();
    let mut best = n;
    for sub in all_subsets(n) {
        if sub.len() < best && is_eps_net(s, &s.all(), &sub, eps) {
            best = sub.len();
        }
    }
    best
}

#[test]
fn packing_is_sandwiched_by_covering_numbers() {
    let mut r = rng(16);
    for _ in 0..40 {
        let n = r.gen_range(2..=12);
        let s = random_cloud(&mut r, n, 2, Metric::Euclidean);
        for _ in 0..4 {
            let eps = r.gen_range(0.05..0.8);
            let all = s.all();
            let packing = max_separated_subset(&s, &all, eps).unwrap();
            assert!(is_eps_net(&s, &all, &packing.indices, eps));
            let net = greedy_eps_net(&s, &all, eps).unwrap();
            assert!(net.verify(&s, &all));
            let exact = min_net_size(&s, eps);
            assert!(exact <= packing.size());
            assert!(exact <= net.size());
            assert!(packing.size() <= min_net_size(&s, eps / 2.0));
            assert!(packing.size() <= greedy_eps_net(&s, &all, eps / 2.0).unwrap().size());
        }
    }
}

/// Optimal subcover size by enumeration over member subsets.
fn min_subcover(members: &[PointSet], set: &PointSet) -> Option<usize> {
    let mut best = None;
    for chosen in all_subsets(members.len()) {
        let covered = set
            .iter()
            .all(|p| chosen.iter().any(|m| members[m].contains(p)));
        if covered && best.map_or(true, |b| chosen.len() < b) {
            best = Some(chosen.len());
        }
    }
    if set.is_empty() {
        return Some(0);
    }
    best
}

#[test]
fn greedy_subcover_is_valid_and_fails_only_when_none_exists() {
    let mut r = rng(17);
    for _ in 0..80 {
        let n = r.gen_range(2..=10);
        let s = random_closure(&mut r, n);
        let (_, cover) = random_cover(&mut r, &s, 6);
        let sets: Vec<PointSet> = cover.members.iter().map(|m| m.set.clone()).collect();
        let b: PointSet = (0..n).filter(|_| r.gen_bool(0.6)).collect();
        let optimum = min_subcover(&sets, &b);
        match finite_subcover(&s, &cover, &b).unwrap() {
            Subcover::Found { members, labels } => {
                assert_eq!(members.len(), labels.len());
                assert!(b
                    .iter()
                    .all(|p| members.iter().any(|&m| sets[m].contains(p))));
                assert!(optimum.unwrap() <= members.len());
            }
            Subcover::Failed { uncovered } => {
                assert!(optimum.is_none());
                assert!(!sets.iter().any(|m| m.contains(uncovered)));
            }
        }
    }
}
