mod common;

use common::rel_close;
use fracmax::continuous::{var_q_frac_max_cont, StepFunction1D};
use fracmax::discrete::frac_max_1d_uncentered;
use fracmax::experiments::*;
use fracmax::lattice::{EvaluationWindow, LatticeFunction};
use fracmax::omega::ConvexBody;

/// Strings by the definition: every `[n, m]` with `g(n-1) < g(n) = ... = g(m) > g(m+1)`.
fn brute_strings(vals: &[f64], lo: i64) -> Vec<(ExtremumKind, i64, i64)> {
    let mut out = vec![];
    for i in 1..vals.len() {
        for j in i..vals.len() - 1 {
            if vals[i..=j].iter().any(|&v| v != vals[i]) {
                break;
            }
            let (l, c, r) = (vals[i - 1], vals[i], vals[j + 1]);
            if l < c && r < c {
                out.push((ExtremumKind::Max, lo + i as i64, lo + j as i64));
            } else if l > c && r > c {
                out.push((ExtremumKind::Min, lo + i as i64, lo + j as i64));
            }
        }
    }
    out
}

#[test]
fn extremum_strings_of_a_maximal_function_match_the_definition() {
    let f = LatticeFunction::from_points(1, &[(vec![0], 1.0), (vec![5], 1.0)]).unwrap();
    let m = frac_max_1d_uncentered(&f, 0.5, &EvaluationWindow::interval(-10, 15).unwrap()).unwrap();
    let s = local_extrema_strings(&m.values).unwrap();
    let got: Vec<_> = s.iter().map(|e| (e.kind, e.start, e.end)).collect();
    assert_eq!(got, brute_strings(m.values.values(), -10));
    assert!(strings_alternate(&s));
    assert_eq!(s.iter().filter(|e| e.kind == ExtremumKind::Max).count(), 2);
}

#[test]
fn gradient_constant_is_finite_on_random_inputs() {
    let body = ConvexBody::linf(2).unwrap();
    let r = verify_thm3(10, 2, &body, 0.0, 1.0, 1.0, 3).unwrap();
    assert!(r.trials.iter().all(|t| t.ratio.is_finite()));
    let d = LatticeFunction::point_mass(&[0, 0], 1.0).unwrap();
    assert_eq!(d.gradient().component_l1_sum(), 4.0);
    assert!(rel_close(d.gradient().lp_norm(1.0).unwrap(), 2.0 + 2f64.sqrt(), 1e-15));
    assert!(check_thm3_admissible(3, 2.0, 0.5, 2.0).is_ok());
}

#[test]
fn pointwise_check_is_finite_and_rejects_small_beta() {
    let body = ConvexBody::linf(2).unwrap();
    let r = pointwise_regularization_check(20, 2, &body, 1.0, 11).unwrap();
    assert!(r.pass, "{:?}", r.notes);
    assert!(r.max_ratio.is_finite() && r.max_ratio > 0.0);
    assert!(pointwise_regularization_check(5, 2, &body, 0.5, 1).is_err());
}

#[test]
fn continuous_ratio_is_dilation_invariant() {
    let f = StepFunction1D::new(vec![0.0, 1.0, 1.5, 3.0], vec![0.3, 1.0, 0.6]).unwrap();
    for beta in [0.25, 0.5] {
        let q = 1.0 / (1.0 - beta);
        let a = var_q_frac_max_cont(&f, beta, q, 1e-9).unwrap().value / f.variation();
        let g = f.dilate(2.5).unwrap();
        let b = var_q_frac_max_cont(&g, beta, q, 1e-9).unwrap().value / g.variation();
        assert!(rel_close(a, b, 1e-4), "{a} vs {b}");
        assert!(a <= 8f64.powf(1.0 / q));
    }
    let r = thm1_trial(0, 1, 5, 0.5).unwrap();
    assert!(r.pass);
}

#[test]
fn discrete_ratio_is_homogeneous() {
    let f = LatticeFunction::from_slice_1d(0, &[1.0; 9]).unwrap();
    for beta in [0.0, 0.5] {
        let a = thm2_ratio(&f, beta).unwrap();
        let b = thm2_ratio(&f.scale(7.25).unwrap(), beta).unwrap();
        assert!(rel_close(a, b, 1e-12));
    }
    let d = LatticeFunction::point_mass(&[0], 1.0).unwrap();
    let r = thm2_ratio(&d, 0.5).unwrap();
    assert!((r - 0.24).abs() < 0.01, "{r}");
}

#[test]
fn radius_sets_with_ties_are_included() {
    let f = LatticeFunction::from_slice_1d(-1, &[1.0, 0.0, 1.0]).unwrap();
    let body = ConvexBody::linf(1).unwrap();
    let eps: Vec<f64> = (1..=8).map(|j| 10f64.powi(-j)).collect();
    let w = EvaluationWindow::interval(-4, 4).unwrap();
    let r = radius_stability_experiment(&f, &eps, &body, 0.0, &w, 5).unwrap();
    assert!(r.pass, "{:?}", r.violations().collect::<Vec<_>>());
}

#[test]
fn reports_round_trip_through_json_and_csv() {
    let r = verify_segments(10, 8, &[0.5], 2).unwrap();
    let mut back = VerificationReport::from_json(&r.to_json()).unwrap();
    // wall-clock time is not serialized
    back.runtime = r.runtime;
    assert_eq!(back, r);
    let csv = r.to_csv();
    assert_eq!(csv.lines().count(), 1 + r.trials.len());
}
