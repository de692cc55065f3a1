use metriclab_core::examples::gen_l1_family;
use num_rational::Ratio;

type Q = Ratio<i64>;

/// ℓ₁ distance between `e_a/i` and `e_b/j` in exact arithmetic.
fn dist(p: (usize, i64), q: (usize, i64)) -> Q {
    let (x, y) = (Q::new(1, p.1), Q::new(1, q.1));
    if p.0 == q.0 {
        if x > y {
            x - y
        } else {
            y - x
        }
    } else {
        x + y
    }
}

#[test]
fn l1_family_is_exactly_metric_and_matches_floats() {
    let (m_count, n_count) = (6usize, 7i64);
    // index 0 marks the origin; 1/0 is never formed for it
    let mut pts: Vec<(usize, i64)> = Vec::new();
    for m in 1..=m_count {
        for n in 1..=n_count {
            pts.push((m, n));
        }
    }
    let d = |a: usize, b: usize| -> Q {
        match (a == pts.len(), b == pts.len()) {
            (true, true) => Q::from_integer(0),
            (true, false) => Q::new(1, pts[b].1),
            (false, true) => Q::new(1, pts[a].1),
            (false, false) if a == b => Q::from_integer(0),
            (false, false) => dist(pts[a], pts[b]),
        }
    };
    let size = pts.len() + 1;
    for a in 0..size {
        for b in 0..size {
            assert_eq!(d(a, b), d(b, a));
            assert_eq!(d(a, b) == Q::from_integer(0), a == b);
            for c in 0..size {
                assert!(d(a, c) <= d(a, b) + d(b, c));
            }
        }
    }
    let bundle = gen_l1_family(m_count, n_count as usize).unwrap();
    for a in 0..size {
        for b in 0..size {
            let q = d(a, b);
            let exact = *q.numer() as f64 / *q.denom() as f64;
            assert!((bundle.space.dist(a, b) - exact).abs() <= 1e-15);
        }
    }
}
