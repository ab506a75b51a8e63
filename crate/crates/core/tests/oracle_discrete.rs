mod common;

use common::*;
use fracmax::discrete::*;
use fracmax::lattice::{EvaluationWindow, LatticeFunction};
use fracmax::omega::{ConvexBody, Halfspace};
use rand::Rng;

fn hull_window(f: &LatticeFunction, pad: i64) -> EvaluationWindow {
    let (lo, hi) = f.support_hull().unwrap();
    EvaluationWindow::new(
        lo.iter().map(|a| a - pad).collect(),
        hi.iter().map(|b| b + pad).collect(),
    )
    .unwrap()
}

fn hexagon() -> ConvexBody {
    let hs = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (-1.0, -1.0)]
        .iter()
        .map(|&(a, b)| Halfspace { a: vec![a, b], b: if a * b > 0.0 { 1.5 } else { 1.0 } })
        .collect();
    ConvexBody::polytope(2, hs).unwrap()
}

fn check_certificates(f: &LatticeFunction, body: &ConvexBody, m: &MaximalResult) {
    for (c, &v) in m.certificates.iter().zip(m.values.values()) {
        let avg = fractional_average(f, body, &c.x0, c.r, m.beta).unwrap();
        assert!(rel_close(avg, v, 1e-12), "certificate {c:?}: {avg} vs {v}");
        let dist: Vec<f64> = c.n.iter().zip(&c.x0).map(|(&a, b)| a as f64 - b).collect();
        assert!(body.gauge(&dist).unwrap() <= c.r + 1e-12, "certificate ball misses its point");
    }
}

#[test]
fn one_dimensional_operators_match_brute_force() {
    let mut g = rng(11);
    let line = ConvexBody::linf(1).unwrap();
    for t in 0..300 {
        let f = random_1d(&mut g, 12);
        let beta = [0.0, 0.3, 0.7][t % 3];
        let w = hull_window(&f, 6);
        let unc = frac_max_1d_uncentered(&f, beta, &w).unwrap();
        let cen = frac_max_1d_centered(&f, beta, &w).unwrap();
        for n in w.lo()[0]..=w.hi()[0] {
            let a = unc.value_at(&[n]).unwrap();
            let b = brute_uncentered_1d(&f, beta, n);
            assert!(rel_close(a, b, 1e-12), "uncentered n={n}: {a} vs {b}");
            let a = cen.value_at(&[n]).unwrap();
            let b = brute_centered_1d(&f, beta, n);
            assert!(rel_close(a, b, 1e-12), "centered n={n}: {a} vs {b}");
        }
        check_certificates(&f, &line, &unc);
        check_certificates(&f, &line, &cen);
        for c in &unc.certificates {
            let [l, r] = c.window.unwrap();
            let v = window_average_1d(&f, c.n[0], l, r, beta);
            assert!(rel_close(v, unc.value_at(&c.n).unwrap(), 1e-12));
        }
    }
}

#[test]
fn centered_operator_matches_brute_force_for_several_bodies() {
    let mut g = rng(12);
    let bodies = [
        ConvexBody::linf(2).unwrap(),
        ConvexBody::euclidean(2).unwrap(),
        ConvexBody::lp(2, 1.0).unwrap(),
        ConvexBody::lp(2, 3.0).unwrap(),
        hexagon(),
    ];
    for t in 0..100 {
        let f = random_2d(&mut g, 5);
        let beta = [0.0, 0.3, 0.7, 1.0, 1.5][t % 5];
        let body = &bodies[t % bodies.len()];
        let w = hull_window(&f, 2);
        let m = frac_max_nd_centered(&f, body, beta, &w).unwrap();
        for n in w.points() {
            let a = m.value_at(&n).unwrap();
            let b = brute_centered_nd(&f, body, beta, &n);
            assert!(rel_close(a, b, 1e-12), "body {t} n={n:?}: {a} vs {b}");
        }
        check_certificates(&f, body, &m);
    }
}

#[test]
fn uncentered_operator_matches_brute_force_on_sampled_points() {
    let mut g = rng(13);
    let bodies = [ConvexBody::linf(2).unwrap(), ConvexBody::euclidean(2).unwrap(), hexagon()];
    for t in 0..60 {
        let f = random_2d(&mut g, 4);
        let beta = [0.0, 0.3, 0.7, 1.0, 1.5][t % 5];
        let k = 1 + (t % 2) as u32;
        let body = &bodies[t % bodies.len()];
        let w = hull_window(&f, 2);
        let m = frac_max_nd_uncentered(&f, body, beta, &w, k).unwrap();
        check_certificates(&f, body, &m);
        let pts: Vec<Vec<i64>> = w.points().collect();
        for _ in 0..2 {
            let n = &pts[g.gen_range(0..pts.len())];
            let a = m.value_at(n).unwrap();
            let b = brute_uncentered_nd(&f, body, beta, n, k);
            assert!(rel_close(a, b, 1e-12), "body {} K={k} n={n:?}: {a} vs {b}", t % 3);
        }
    }
}

#[test]
fn cube_fast_paths_agree_with_generic_polytope_paths() {
    let mut g = rng(14);
    let cube = ConvexBody::linf(2).unwrap();
    let poly = ConvexBody::cube_polytope(2).unwrap();
    for t in 0..60 {
        let f = random_2d(&mut g, 5);
        let beta = [0.0, 0.5, 1.0, 1.5][t % 4];
        let w = hull_window(&f, 3);
        let a = frac_max_nd_centered(&f, &cube, beta, &w).unwrap();
        let b = frac_max_nd_centered(&f, &poly, beta, &w).unwrap();
        for (x, y) in a.values.values().iter().zip(b.values.values()) {
            assert!(rel_close(*x, *y, 1e-12));
        }
        let k = 1 + (t % 3) as u32;
        let a = frac_max_nd_uncentered(&f, &cube, beta, &w, k).unwrap();
        let b = frac_max_nd_uncentered(&f, &poly, beta, &w, k).unwrap();
        for (x, y) in a.values.values().iter().zip(b.values.values()) {
            assert!(rel_close(*x, *y, 1e-12), "K={k}: {x} vs {y}");
        }
        // several grid centers can describe the same lattice ball, so only radii are compared
        for (c, e) in a.certificates.iter().zip(&b.certificates) {
            assert_eq!(c.r, e.r, "radius at {:?}", c.n);
        }
        check_certificates(&f, &cube, &a);
        check_certificates(&f, &poly, &b);
    }
}

#[test]
fn uncentered_dominates_centered_and_refines_monotonically() {
    let mut g = rng(15);
    for t in 0..40 {
        let f = random_2d(&mut g, 4);
        let body = if t % 2 == 0 { ConvexBody::linf(2).unwrap() } else { ConvexBody::euclidean(2).unwrap() };
        let beta = [0.0, 0.6, 1.2][t % 3];
        let w = hull_window(&f, 2);
        let c = frac_max_nd_centered(&f, &body, beta, &w).unwrap();
        let mut prev = c.values.values().to_vec();
        for k in [1, 2, 4] {
            let u = frac_max_nd_uncentered(&f, &body, beta, &w, k).unwrap();
            for (a, b) in u.values.values().iter().zip(&prev) {
                assert!(*a >= *b * (1.0 - 1e-12), "K={k}: {a} < {b}");
            }
            prev = u.values.values().to_vec();
        }
    }
}

#[test]
fn one_dimensional_uncentered_is_independent_of_body_and_refinement() {
    let mut g = rng(16);
    let asym = ConvexBody::polytope(
        1,
        vec![Halfspace { a: vec![1.0], b: 2.0 }, Halfspace { a: vec![-1.0], b: 1.0 }],
    )
    .unwrap();
    for t in 0..100 {
        let f = random_1d(&mut g, 12);
        let beta = [0.0, 0.3, 0.7][t % 3];
        let w = hull_window(&f, 5);
        let base = frac_max_1d_uncentered(&f, beta, &w).unwrap();
        for (body, k) in [(ConvexBody::linf(1).unwrap(), 1), (ConvexBody::euclidean(1).unwrap(), 3), (asym.clone(), 2)] {
            let m = frac_max_nd_uncentered(&f, &body, beta, &w, k).unwrap();
            assert_eq!(m.values, base.values);
            check_certificates(&f, &body, &m);
        }
    }
}

#[test]
fn fractional_integral_matches_brute_force() {
    let mut g = rng(17);
    for t in 0..50 {
        let f = random_2d(&mut g, 4);
        let beta = [0.5, 1.0, 1.5][t % 3];
        let i = frac_integral(&f, beta, 20.0).unwrap();
        for n in hull_window(&f, 2).points() {
            assert!(rel_close(i.get(&n), brute_integral(&f, beta, &n), 1e-12));
            assert!(rel_close(frac_integral_at(&f, beta, &n).unwrap(), brute_integral(&f, beta, &n), 1e-12));
        }
    }
}

#[test]
fn certificates_in_json() {
    let f = LatticeFunction::point_mass(&[0], 1.0).unwrap();
    let m = frac_max_1d_uncentered(&f, 0.5, &EvaluationWindow::interval(-2, 2).unwrap()).unwrap();
    let s = m.to_json();
    assert!(s.contains("\"mode\":\"uncentered\""));
    assert!(s.contains("\"exact\":true"));
    assert_eq!(MaximalResult::from_json(&s).unwrap(), m);
}
