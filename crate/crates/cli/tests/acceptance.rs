//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use metriclab_core::boundedness::{greedy_eps_net, is_eps_net, max_separated_subset};
use metriclab_core::chains::{chainability_threshold, eps_components};
use metriclab_core::convexity::{menger_check, menger_gap, metric_defect};
use metriclab_core::covers::{
    lebesgue_ball_bound, lebesgue_exact, lebesgue_witness, local_finiteness_profile, realize,
    Cover, CoverElement, RealizedCover, DEFAULT_SEARCH_LIMIT,
};
use metriclab_core::examples::{
    gen_adversarial_from, gen_harmonic_in_02, gen_l1_family, gen_unit_left_open,
};
use metriclab_core::{FiniteMetricSpace, Metric, PointSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn within(limit: Duration, took: Duration) -> bool {
    took < limit
}

// --- corpora -------------------------------------------------------------

/// Uniform `[0,1]` entries closed under shortest paths.
fn closure_space(rng: &mut ChaCha8Rng, n: usize) -> FiniteMetricSpace {
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
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    FiniteMetricSpace::from_matrix(labels, d, None).expect("closure is a metric")
}

fn cloud_space(rng: &mut ChaCha8Rng, n: usize, metric: Metric) -> FiniteMetricSpace {
    let coords: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.gen(), rng.gen()]).collect();
    FiniteMetricSpace::from_points(&coords, metric, None, None).expect("coordinates are finite")
}

/// At most five members mixing balls, explicit sets and complements; the
/// last member absorbs whatever the others leave uncovered.
fn random_cover(rng: &mut ChaCha8Rng, space: &FiniteMetricSpace) -> RealizedCover {
    let n = space.len();
    let mut cover = Cover::new();
    for _ in 0..rng.gen_range(1..=4) {
        cover = cover.element(match rng.gen_range(0..3) {
            0 => CoverElement::ball(rng.gen_range(0..n), rng.gen_range(0.1..0.8)),
            1 => CoverElement::explicit((0..n).filter(|_| rng.gen_bool(0.5))),
            _ => {
                let mut idx: Vec<usize> = (0..n).collect();
                idx.shuffle(rng);
                CoverElement::complement(idx.into_iter().take(rng.gen_range(1..=3)))
            }
        });
    }
    let missing = realize(space, &cover).unwrap().uncovered();
    if !missing.is_empty() {
        cover = cover.element(CoverElement::explicit(missing.iter()));
    }
    realize(space, &cover).unwrap()
}

fn lebesgue_corpus() -> Vec<(FiniteMetricSpace, RealizedCover)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1eb);
    (0..200)
        .map(|_| {
            let n = rng.gen_range(1..=12);
            let s = closure_space(&mut rng, n);
            let c = random_cover(&mut rng, &s);
            (s, c)
        })
        .collect()
}

// --- oracles -------------------------------------------------------------

/// Minimum bad-set diameter over the full power set of the target.
fn power_set_lebesgue(s: &FiniteMetricSpace, c: &RealizedCover) -> f64 {
    let pts = c.target.as_slice();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << pts.len()) {
        let a: Vec<usize> = (0..pts.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| pts[b])
            .collect();
        if c.members.iter().any(|m| a.iter().all(|&p| m.contains(p))) {
            continue;
        }
        let diam = a
            .iter()
            .flat_map(|&p| a.iter().map(move |&q| (p, q)))
            .map(|(p, q)| s.dist(p, q))
            .fold(0.0, f64::max);
        best = best.min(diam);
    }
    best
}

/// Least distinct entry whose threshold graph is connected, by binary search
/// over the sorted entries and a flood fill.
fn threshold_oracle(s: &FiniteMetricSpace) -> f64 {
    let n = s.len();
    let connected = |eps: f64| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if !seen[w] && s.dist(v, w) <= eps {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&b| b)
    };
    let mut entries: Vec<f64> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| s.dist(i, j))
        .collect();
    entries.sort_by(f64::total_cmp);
    entries.dedup();
    let k = entries.partition_point(|&e| !connected(e));
    // the library's components must agree at the oracle value
    assert_eq!(eps_components(s, entries[k]).unwrap().len(), 1);
    entries[k]
}

/// Smallest ε-net size by trying subsets in order of size.
fn min_net(s: &FiniteMetricSpace, eps: f64) -> usize {
    fn search(
        s: &FiniteMetricSpace,
        eps: f64,
        k: usize,
        from: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == k {
            return is_eps_net(s, &s.all(), &PointSet::new(chosen.iter().copied()), eps);
        }
        for c in from..s.len() {
            chosen.push(c);
            if search(s, eps, k, c + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    (1..=s.len())
        .find(|&k| search(s, eps, k, 0, &mut Vec::new()))
        .expect("the whole space is a net")
}

// --- criteria ------------------------------------------------------------

fn criterion_1(corpus: &[(FiniteMetricSpace, RealizedCover)]) -> Verdict {
    let start = Instant::now();
    let mut mismatches = 0;
    for (s, c) in corpus {
        let exact = lebesgue_exact(s, c, DEFAULT_SEARCH_LIMIT).unwrap().exact;
        let oracle = power_set_lebesgue(s, c);
        let same = match exact {
            Some(e) if e.is_infinite() || oracle.is_infinite() => e == oracle,
            Some(e) => (e - oracle).abs() <= 1e-12,
            None => false,
        };
        if !same {
            mismatches += 1;
        }
    }
    let took = start.elapsed();
    verdict(
        mismatches == 0 && within(Duration::from_secs(30), took),
        format!(
            "{} spaces, {mismatches} mismatches, {took:.2?} (limit 30s)",
            corpus.len()
        ),
    )
}

fn criterion_2(corpus: &[(FiniteMetricSpace, RealizedCover)]) -> Verdict {
    let mut violations = 0;
    let mut finite = 0;
    for (s, c) in corpus {
        let bound = lebesgue_ball_bound(s, c).unwrap();
        let exact = lebesgue_exact(s, c, DEFAULT_SEARCH_LIMIT)
            .unwrap()
            .exact
            .unwrap();
        if bound > exact {
            violations += 1;
        }
        if !exact.is_finite() {
            continue;
        }
        finite += 1;
        for alpha in [exact, exact / 2.0, bound] {
            if alpha > 0.0 && alpha <= exact && lebesgue_witness(s, c, alpha).unwrap().is_some() {
                violations += 1;
            }
        }
        let above = exact * (1.0 + 1e-6);
        match lebesgue_witness(s, c, above).unwrap() {
            Some(w) if s.diameter(&w).unwrap() < above => {}
            _ => violations += 1,
        }
    }
    verdict(
        violations == 0,
        format!(
            "{} covers ({finite} with finite exact value), {violations} violations",
            corpus.len()
        ),
    )
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e5);
    let mut mismatches = 0;
    for case in 0..200 {
        let n = rng.gen_range(2..=64);
        let s = match case % 3 {
            0 => closure_space(&mut rng, n),
            1 => cloud_space(&mut rng, n, Metric::Euclidean),
            _ => cloud_space(&mut rng, n, Metric::Chebyshev),
        };
        if chainability_threshold(&s) != threshold_oracle(&s) {
            mismatches += 1;
        }
    }
    let took = start.elapsed();
    verdict(
        mismatches == 0 && within(Duration::from_secs(10), took),
        format!("200 spaces, {mismatches} mismatches, {took:.2?} (limit 10s)"),
    )
}

fn criterion_4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9ac);
    let (mut checks, mut violations, mut greedy_above) = (0, 0, 0);
    for case in 0..100 {
        let s = if case % 2 == 0 {
            let n = rng.gen_range(4..=13);
            closure_space(&mut rng, n)
        } else {
            let n = rng.gen_range(4..=13);
            cloud_space(&mut rng, n, Metric::Euclidean)
        };
        let mut entries: Vec<f64> = (0..s.len())
            .flat_map(|i| (i + 1..s.len()).map(move |j| (i, j)))
            .map(|(i, j)| s.dist(i, j))
            .collect();
        entries.sort_by(f64::total_cmp);
        let all = s.all();
        for q in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let eps = entries[((entries.len() - 1) as f64 * q) as usize];
            checks += 1;
            let packing = max_separated_subset(&s, &all, eps).unwrap();
            let net = greedy_eps_net(&s, &all, eps).unwrap();
            let net_half = greedy_eps_net(&s, &all, eps / 2.0).unwrap();
            let covering = min_net(&s, eps);
            let covering_half = min_net(&s, eps / 2.0);
            let ok = is_eps_net(&s, &all, &packing.indices, eps)
                && net.verify(&s, &all)
                && covering <= packing.size()
                && packing.size() <= covering_half
                && packing.size() <= net_half.size();
            if !ok {
                violations += 1;
            }
            if net.size() > packing.size() {
                greedy_above += 1;
            }
        }
    }
    verdict(
        violations == 0,
        format!(
            "{checks} scale checks of N(eps) <= P(eps) <= N(eps/2), {violations} violations; \
             greedy net exceeded packing in {greedy_above} (informational)"
        ),
    )
}

fn criterion_5() -> Verdict {
    let start = Instant::now();
    let eps = 0.1;
    let base = gen_unit_left_open(512).unwrap();
    let bundle = gen_adversarial_from(&base.space, eps, "unit_left_open").unwrap();
    let cover = realize(&bundle.space, &bundle.covers[0].cover).unwrap();
    let profile = local_finiteness_profile(&bundle.space, &cover, eps / 8.0).unwrap();
    let mut missing = Vec::new();
    for alpha in [0.09, 0.05, 0.02, 0.01] {
        match lebesgue_witness(&bundle.space, &cover, alpha).unwrap() {
            Some(w) if bundle.space.diameter(&w).unwrap() < alpha => {}
            _ => missing.push(alpha),
        }
    }
    let took = start.elapsed();
    verdict(
        profile.max <= 2 && missing.is_empty() && within(Duration::from_secs(20), took),
        format!(
            "{} points, max incidence {} at delta=eps/8, alphas without witness {missing:?}, \
             {took:.2?} (limit 20s)",
            bundle.space.len(),
            profile.max
        ),
    )
}

fn criterion_6() -> Verdict {
    let bundle = gen_harmonic_in_02(64).unwrap();
    let report = bundle.run();
    let cover = realize(&bundle.space, &bundle.covers[0].cover).unwrap();
    let own = cover
        .members
        .iter()
        .enumerate()
        .all(|(k, m)| m.set == PointSet::singleton(k));
    let sub = metriclab_core::covers::finite_subcover(&bundle.space, &cover, &bundle.space.all())
        .unwrap()
        .size();
    verdict(
        report.passed && own && sub == Some(64),
        format!(
            "{} expectations, failures {:?}, each ball only its center: {own}, subcover of S: {sub:?}",
            report.claims.len(),
            report.failures()
        ),
    )
}

fn criterion_7() -> Verdict {
    let bundle = gen_l1_family(10, 10).unwrap();
    let s = &bundle.space;
    let sep = max_separated_subset(s, &s.all(), 1.5).unwrap();
    let isolated = (0..s.len())
        .filter(|&i| s.isolation(i).unwrap() > 0.0)
        .count();
    verdict(
        s.len() == 101 && sep.size() >= 10 && isolated == 101,
        format!(
            "{} points, 1.5-separated subset of size {}, {isolated} points with positive isolation",
            s.len(),
            sep.size()
        ),
    )
}

fn metriclab(args: &[&str]) -> (Vec<u8>, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_metriclab"))
        .args(args)
        .output()
        .expect("failed to spawn metriclab");
    (out.stdout, out.status.code())
}

fn claim<'a>(report: &'a Value, bundle: &str, claim: &str) -> Option<&'a Value> {
    report["results"]["bundles"]
        .as_array()?
        .iter()
        .find(|b| b["name"] == bundle)?["claims"]
        .as_array()?
        .iter()
        .find(|c| c["claim"] == claim)
}

fn criterion_8() -> Verdict {
    let start = Instant::now();
    let (stdout, code) = metriclab(&["verify-paper", "--small"]);
    let took = start.elapsed();
    let report: Value = serde_json::from_slice(&stdout).unwrap_or(Value::Null);
    let passed = |b: &str, c: &str| claim(&report, b, c).is_some_and(|v| v["pass"] == true);
    let menger = passed("punctured_square", "menger-at-grid-step");
    let prop_p = passed("parallel_lines", "property-p-at-sampling-step");
    let not_convex = passed("parallel_lines", "cross-pair-not-metrically-convex");
    let lines = metriclab_core::examples::gen_parallel_lines(1.0, 8.0, 64).unwrap();
    let split = eps_components(&lines.space, 0.4).unwrap().len();
    let mc = metriclab_core::convexity::metric_convexity_check(&lines.space, 0.25).unwrap();
    let square = metriclab_core::examples::gen_punctured_square_maxmetric(32).unwrap();
    let step = 4.0 / 32.0;
    let direct_menger = menger_check(&square.space, step).unwrap().holds;
    verdict(
        code == Some(0)
            && menger
            && prop_p
            && not_convex
            && split >= 2
            && !mc.holds
            && direct_menger
            && within(Duration::from_secs(10), took),
        format!(
            "menger {menger}/{direct_menger}, property P {prop_p}, components at 0.4: {split}, \
             metric convexity fails at 0.25: {}, verify-paper exit {code:?} in {took:.2?} (limit 10s)",
            !mc.holds
        ),
    )
}

fn criterion_9() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3e9);
    let (mut candidates, mut degenerate, mut violations) = (0, 0, 0);
    for case in 0..100 {
        let s = match case % 3 {
            0 => {
                let n = rng.gen_range(3..=20);
                closure_space(&mut rng, n)
            }
            1 => {
                let n = rng.gen_range(3..=30);
                cloud_space(&mut rng, n, Metric::Euclidean)
            }
            _ => {
                let n = rng.gen_range(3..=30);
                cloud_space(&mut rng, n, Metric::Chebyshev)
            }
        };
        let diam = s.max_distance();
        for f in [0.02, 0.05, 0.1, 0.2] {
            let tol = f * diam;
            for x in 0..s.len() {
                for y in x + 1..s.len() {
                    if menger_gap(&s, x, y, tol).unwrap().is_some() {
                        continue;
                    }
                    if s.dist(x, y) <= 2.0 * tol {
                        degenerate += 1;
                        continue;
                    }
                    candidates += 1;
                    if metric_defect(&s, x, y).0 > 2.0 * tol + 1e-12 {
                        violations += 1;
                    }
                }
            }
        }
    }
    verdict(
        violations == 0 && candidates > 0,
        format!(
            "{candidates} Menger-covered pairs with d > 2 tol, {violations} violations \
             ({degenerate} pairs with d <= 2 tol excluded)"
        ),
    )
}

fn criterion_10() -> Verdict {
    let (a, ca) = metriclab(&["verify-paper", "--small"]);
    let (b, cb) = metriclab(&["verify-paper", "--small"]);
    let (t1, c1) = metriclab(&["--threads", "1", "verify-paper", "--small"]);
    let (t8, c8) = metriclab(&["--threads", "8", "verify-paper", "--small"]);
    let codes = [ca, cb, c1, c8].iter().all(|&c| c == Some(0));
    let repeat = a == b;
    let threads = t1 == t8 && t1 == a;
    verdict(
        codes && repeat && threads && !a.is_empty(),
        format!(
            "repeat identical: {repeat}, --threads 1 vs 8 identical: {threads}, {} bytes",
            a.len()
        ),
    )
}

fn main() -> ExitCode {
    let corpus = lebesgue_corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict + '_>)> = vec![
        (
            "Lebesgue oracle equivalence",
            Box::new(|| criterion_1(&corpus)),
        ),
        ("bracket law", Box::new(|| criterion_2(&corpus))),
        ("chainability threshold oracle", Box::new(criterion_3)),
        ("packing/covering sandwich", Box::new(criterion_4)),
        ("adversarial cover reproduction", Box::new(criterion_5)),
        ("harmonic cover reproduction", Box::new(criterion_6)),
        ("l1 family reproduction", Box::new(criterion_7)),
        ("convexity checkers", Box::new(criterion_8)),
        ("Menger to metric-convex slack law", Box::new(criterion_9)),
        ("determinism", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        let mark = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {mark}  {name}: {}", i + 1, v.detail);
        if !v.pass {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
