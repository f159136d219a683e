use nazeta::eisenstein::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn pt(x: f64, y: f64) -> UpperHalfPoint {
    UpperHalfPoint::new(x, y).unwrap()
}

#[test]
fn xi_reflection_and_dual_method() {
    for re in [-1.5, -0.3, 0.2, 0.5, 0.8, 1.7, 3.0] {
        for im in [0.0, 0.7, 4.0, 12.0] {
            let s = cx(re, im);
            let a = completed_zeta(s).unwrap();
            let b = completed_zeta(1.0 - s).unwrap();
            assert!((a - b).norm() < 1e-12 * a.norm().max(1.0), "{s}");
        }
    }
    let half = completed_zeta(cx(0.5, 0.0)).unwrap();
    assert!(half.im.abs() < 1e-15);
    assert!((half - completed_zeta_theta(cx(0.5, 0.0)).unwrap()).norm() < 1e-12);
    assert!((completed_zeta(cx(2.0, 0.0)).unwrap().re - std::f64::consts::PI / 6.0).abs() < 1e-14);
}

#[test]
fn eisenstein_periodic_and_modular() {
    for s in [cx(0.7, 0.0), cx(1.3, 2.0), cx(2.0, 0.0), cx(0.4, -1.5)] {
        let e = EisensteinSeries::new(s).unwrap();
        for (x, y) in [(0.1, 1.2), (-0.45, 0.95), (0.3, 2.5)] {
            let z = pt(x, y);
            let v = e.value(&z).unwrap();
            assert!((v - e.value(&z.translate(1.0)).unwrap()).norm() < 1e-10);
            let w = e.value(&z.invert()).unwrap();
            assert!((v - w).norm() < 1e-8 * v.norm().max(1.0), "s={s} z={z:?}: {v} vs {w}");
        }
    }
}

#[test]
fn fourier_tail_bound_is_reported() {
    let s = cx(0.8, 0.0);
    let z = pt(0.2, 1.1);
    let few = eisenstein_e(&z, s, 2).unwrap();
    let many = eisenstein_e(&z, s, 30).unwrap();
    assert!(few.tail_bound > many.tail_bound);
    assert!((few.value - many.value).norm() < 3.0 * few.tail_bound);
    assert!(eisenstein_e(&z, s, 0).is_err());
    assert!(eisenstein_e(&z, cx(1.0, 0.0), 5).is_err());
    assert!(UpperHalfPoint::new(0.0, -1.0).is_err());
}

#[test]
fn constant_term_is_the_x_average() {
    for s in [cx(0.7, 0.0), cx(1.5, 0.5), cx(0.75, 0.3)] {
        let e = EisensteinSeries::new(s).unwrap();
        for y in [1.0, 1.3, 2.0, 4.0] {
            let avg = numeric_constant_term(s, y, 15).unwrap();
            assert!(rel(avg, e.constant_term(y)) < 1e-8, "s={s} y={y}");
        }
    }
}

#[test]
fn truncation_below_and_above_height() {
    let s = cx(0.7, 0.0);
    let e = EisensteinSeries::new(s).unwrap();
    let z = pt(0.2, 1.5);
    assert_eq!(arthur_truncate_e(&z, s, 2.0).unwrap(), e.value(&z).unwrap());
    assert!(arthur_truncate_e(&pt(0.2, 10.0), s, 2.0).unwrap().norm() < 1e-6);
    assert!(arthur_truncate_e(&pt(0.7, 1.5), s, 2.0).is_err());
    assert!(arthur_truncate_e(&pt(0.0, 0.5), s, 2.0).is_err());
    assert!(arthur_truncate_e(&z, s, 0.5).is_err());
    let reduced = pt(0.7, 0.3).reduce();
    assert!(arthur_truncate_e(&reduced, s, 2.0).is_ok());
}

#[test]
fn truncation_is_idempotent() {
    let s = cx(0.75, 0.3);
    let t = 2.0;
    let e = EisensteinSeries::new(s).unwrap();
    for y in [2.5, 3.0, 5.0] {
        let q = quad::integrate(|x| e.truncated(&pt(x, y), t).unwrap(), -0.5, 0.5, 1e-15, 1e-15);
        assert!(q.value.norm() < 1e-12, "y={y}: {}", q.value);
    }
}

#[test]
fn truncated_eisenstein_decays_rapidly() {
    let s = cx(0.7, 0.0);
    let sup = |y: f64| (0..=10).map(|k| arthur_truncate_e(&pt(-0.5 + 0.1 * k as f64, y), s, 2.0).unwrap().norm()).fold(0.0, f64::max);
    let v: Vec<f64> = [5.0, 10.0, 20.0].iter().map(|&y| sup(y)).collect();
    for k in [2, 6, 10] {
        let w: Vec<f64> = [5.0f64, 10.0, 20.0].iter().zip(&v).map(|(y, a)| a * y.powi(k)).collect();
        assert!(w[1] < w[0] && w[2] < w[1], "k={k}: {w:?}");
    }
    assert!(v[1] / v[0] < 1e-10);
}

#[test]
fn period_at_two() {
    let s = cx(2.0, 0.0);
    let c2 = completed_zeta(cx(3.0, 0.0)).unwrap() / completed_zeta(cx(4.0, 0.0)).unwrap();
    let closed = closed_truncated_period(s, 1.0).unwrap();
    assert!((closed - (1.0 - c2 / 2.0)).norm() < 1e-14);
    let num = truncated_period(&EisensteinConfig::new(s, 1.0).unwrap()).unwrap();
    assert!(rel(num.value, closed) < 1e-4);
    assert!(rel(num.value, closed) < 1e-9);
}

#[test]
fn period_t_derivative_is_the_boundary_constant_term() {
    let h = 1e-4;
    for (s, t) in [(cx(0.7, 0.0), 1.5), (cx(1.5, 0.5), 2.0), (cx(0.75, 0.3), 1.2)] {
        let d = (closed_truncated_period(s, t + h).unwrap() - closed_truncated_period(s, t - h).unwrap()) / (2.0 * h);
        let boundary = numeric_constant_term(s, t, 15).unwrap() / (t * t);
        assert!((d - boundary).norm() < 1e-6, "s={s} T={t}: {d} vs {boundary}");
        let c = c_function(s).unwrap();
        let formula = cx(t, 0.0).powc(s - 2.0) + c * cx(t, 0.0).powc(-s - 1.0);
        assert!((formula - boundary).norm() < 1e-8);
    }
}

#[test]
fn period_pole_bookkeeping() {
    for (s, t) in [(cx(0.6, 0.0), 1.0), (cx(1.4, -0.7), 2.5)] {
        let tt = cx(t, 0.0);
        let lhs = (s - 1.0) * closed_truncated_period(s, t).unwrap() - tt.powc(s - 1.0);
        let rhs = -(s - 1.0) * c_function(s).unwrap() * tt.powc(-s) / s;
        assert!((lhs - rhs).norm() < 1e-14);
    }
    for s in [0.0, 0.5, 1.0] {
        assert!(closed_truncated_period(cx(s, 0.0), 1.0).is_err());
        assert!(EisensteinConfig::new(cx(s, 0.0), 1.0).and_then(|c| truncated_period(&c)).is_err());
    }
    assert!(EisensteinConfig::new(cx(2.0, 0.0), 0.9).is_err());
}

#[test]
fn geometric_equals_analytic_truncation() {
    let cfg = EisensteinConfig::new(cx(0.75, 0.3), 1.5).unwrap();
    let a = truncated_period(&cfg).unwrap();
    let b = compact_region_period(&cfg).unwrap();
    assert!(rel(a.value, b.value) < 1e-4);
    assert!((a.value - b.value).norm() <= 2.0 * (a.est_error + b.est_error) + 1e-13);
}

#[test]
fn period_stabilizes_like_a_power_of_t() {
    let s = cx(0.8, 0.4);
    let period = |t: f64| compact_region_period(&EisensteinConfig::new(s, t).unwrap()).unwrap().value;
    let leading = ((cx(2.0, 0.0).powc(s - 1.0) - 1.0) / (s - 1.0)).norm();
    let sub = (c_function(s).unwrap() / s * (cx(2.0, 0.0).powc(-s) - 1.0)).norm() / leading;
    let mut gap = f64::INFINITY;
    for t in [4.0, 32.0, 256.0, 2048.0] {
        let step = (period(2.0 * t) - period(t)).norm() / t.powf(s.re - 1.0);
        gap = (step / leading - 1.0).abs();
        assert!(gap <= sub * t.powf(1.0 - 2.0 * s.re) + 1e-9, "T={t}: {gap}");
    }
    assert!(gap < 0.05);
}

#[test]
fn rank2_zeta_numeric_matches_closed() {
    for s in [cx(0.75, 0.0), cx(0.3, 2.0), cx(1.8, -0.5), cx(-0.4, 1.0)] {
        let num = rank2_zeta(s, 15).unwrap();
        let closed = rank2_zeta_closed(s).unwrap();
        assert!(rel(num.value, closed) < 1e-4, "{s}");
    }
    assert!(rank2_zeta(cx(1.0, 0.0), 15).is_err());
    assert!(rank2_zeta_closed(cx(0.0, 0.0)).is_err());
}

#[test]
fn rank2_zeta_functional_equation_and_reality() {
    for re in [-1.0, 0.1, 0.35, 0.6, 0.9, 2.5] {
        for im in [0.0, 0.5, 3.0, 11.0, 25.0] {
            let s = cx(re, im);
            let a = rank2_zeta_closed(s).unwrap();
            let b = rank2_zeta_closed(1.0 - s).unwrap();
            assert!((a - b).norm() < 1e-10, "{s}");
        }
    }
    for k in 0..=300 {
        let t = 0.1 * k as f64;
        assert!(rank2_zeta_closed(cx(0.5, t)).unwrap().im.abs() < 1e-10, "t={t}");
    }
}

#[test]
fn rank2_zeta_poles_are_simple() {
    for eps in [1e-3, 1e-5, 1e-7] {
        for dir in [cx(1.0, 0.0), cx(0.0, 1.0), cx(-1.0, 0.0)] {
            let near_one = cx(1.0, 0.0) + dir * eps;
            assert!(((near_one - 1.0) * rank2_zeta_closed(near_one).unwrap()).norm() < 2.0);
            let near_zero = dir * eps;
            assert!((near_zero * rank2_zeta_closed(near_zero).unwrap()).norm() < 2.0);
        }
    }
}

#[test]
fn critical_zeros_are_all_found() {
    let scan = zero_scan(0.0, 30.0, 0.01, 15).unwrap();
    assert!(!scan.zeros.is_empty());
    assert_eq!(scan.argument_count, scan.zeros.len() as i64);
    assert!(scan.value_at_t_min != 0.0);
    assert_eq!(scan.value_at_t_min, rank2_zeta_closed(cx(0.5, 0.0)).unwrap().re);
    for &t in &scan.zeros {
        let left = rank2_zeta_closed(cx(0.5, t - 1e-8)).unwrap().re;
        let right = rank2_zeta_closed(cx(0.5, t + 1e-8)).unwrap().re;
        assert!(left * right <= 0.0, "t={t}");
    }
    let coarse = zero_scan(0.0, 30.0, 0.02, 7).unwrap();
    assert_eq!(coarse.zeros.len(), scan.zeros.len());
    assert_eq!(coarse.argument_count, scan.argument_count);
    for (a, b) in coarse.zeros.iter().zip(&scan.zeros) {
        assert!((a - b).abs() < 1e-6);
    }
    assert!(zero_scan(5.0, 1.0, 0.1, 15).is_err());
}

#[test]
fn truncation_is_self_adjoint() {
    let cfg = EisensteinConfig::new(cx(0.7, 0.2), 2.0).unwrap();
    let interior = Bump::new(0.1, 1.3, 0.04).unwrap();
    let boundary = Bump::new(0.0, 2.0, 0.06).unwrap();
    let cusp = Bump::new(-0.1, 6.0, 0.05).unwrap();
    for b in [interior, boundary, cusp] {
        let r = self_adjoint_check(&cfg, &b).unwrap();
        assert!(r.residual < 1e-5, "{b:?}: {r:?}");
        assert!(r.residual <= r.est_error.max(1e-15) * 10.0, "{b:?}: {r:?}");
    }
    let r = self_adjoint_check(&cfg, &boundary).unwrap();
    assert!(r.lhs.norm() > 1e-4);
    let r = self_adjoint_check(&cfg, &cusp).unwrap();
    let e = EisensteinSeries::new(cfg.s).unwrap();
    assert!(r.lhs.norm() < 1e-12 * e.constant_term(6.0).norm());
    assert!(Bump::new(0.45, 2.0, 0.05).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn modular_invariance_at_random_points(x in -0.5f64..0.5, y in 0.3f64..3.0, re in 0.55f64..2.0, im in -3.0f64..3.0) {
        let e = EisensteinSeries::new(cx(re, im)).unwrap();
        let z = pt(x, y);
        let a = e.value(&z).unwrap();
        let b = e.value(&z.reduce()).unwrap();
        prop_assert!((a - b).norm() < 1e-8 * a.norm().max(1.0));
    }

    #[test]
    fn xi_reflection_at_random_points(re in -3.0f64..4.0, im in -20.0f64..20.0) {
        let s = cx(re, im);
        prop_assume!(s.norm() > 1e-3 && (s - 1.0).norm() > 1e-3);
        let a = completed_zeta(s).unwrap();
        let b = completed_zeta(1.0 - s).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300));
        let conj = completed_zeta(s.conj()).unwrap();
        prop_assert!((conj - a.conj()).norm() <= 1e-12 * a.norm().max(1e-300));
    }
}
