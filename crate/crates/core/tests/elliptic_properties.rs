use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schwarzian::complex::{c, real, C64};
use schwarzian::elliptic::{half_periods, WeierstrassInvariants, WeierstrassP};

fn invariant_set() -> Vec<WeierstrassInvariants> {
    let mut out = vec![
        WeierstrassInvariants::new(real(4.0), real(0.0)),
        WeierstrassInvariants::new(real(16.0), real(0.0)),
        WeierstrassInvariants::new(real(64.0), real(0.0)),
        WeierstrassInvariants::new(real(0.0), real(1.0)),
        WeierstrassInvariants::new(real(-1.0 / 16.0), real(0.0)),
        WeierstrassInvariants::new(c(1.0, 1.0), c(0.5, -0.3)),
        WeierstrassInvariants::new(real(-3.0), real(2.5)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        out.push(WeierstrassInvariants::new(
            c(rng.gen_range(-8.0..8.0), rng.gen_range(-8.0..8.0)),
            c(rng.gen_range(-8.0..8.0), rng.gen_range(-8.0..8.0)),
        ));
    }
    out
}

fn annulus_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::from_polar(rng.gen_range(0.1..3.0), rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect()
}

#[test]
fn half_periods_exist_and_match_stationary_values() {
    for inv in invariant_set() {
        let d = half_periods(&inv).unwrap_or_else(|e| panic!("{inv:?}: {e}"));
        assert!((d.omega3 / d.omega1).im > 0.0);
        let p = WeierstrassP::unreduced(inv).unwrap();
        let e = d.stationary_values;
        let scale = e.iter().map(|x| x.norm()).fold(1.0, f64::max);
        for (w, ev) in [(d.omega1, e[0]), (d.omega2(), e[1]), (d.omega3, e[2])] {
            let (v, dv) = p.eval(w).unwrap();
            assert!((v - ev).norm() < 1e-8 * scale, "{inv:?}: ℘(ω) = {v}, e = {ev}");
            assert!(dv.norm() < 1e-6 * scale.powf(1.5), "{inv:?}: ℘'(ω) = {dv}");
        }
        let sum: C64 = e.iter().sum();
        assert!(sum.norm() < 1e-12 * scale);
    }
}

#[test]
fn ode_residual_over_annulus() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for inv in invariant_set() {
        let p = WeierstrassP::new(inv).unwrap();
        let lat = *p.lattice().unwrap();
        let mut checked = 0;
        for z in annulus_points(&mut rng, 200) {
            if lat.distance(z) < 1e-3 {
                continue;
            }
            let (v, dv) = p.eval(z).unwrap();
            let res = dv * dv - (4.0 * v * v * v - inv.g2 * v - inv.g3);
            assert!(
                res.norm() <= 1e-9 * v.norm().powi(3).max(1.0),
                "{inv:?} z={z}: residual {}",
                res.norm()
            );
            checked += 1;
        }
        assert!(checked > 150);
    }
}

#[test]
fn periodicity_without_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for inv in invariant_set() {
        let d = half_periods(&inv).unwrap();
        let reduced = WeierstrassP::new(inv).unwrap();
        let raw = WeierstrassP::unreduced(inv).unwrap();
        let lat = d.lattice();
        for z in annulus_points(&mut rng, 20) {
            for shift in [2.0 * d.omega1, 2.0 * d.omega3] {
                if lat.distance(z) < 1e-2 {
                    continue;
                }
                let a = raw.eval(z).unwrap().0;
                let b = raw.eval(z + shift).unwrap().0;
                let r = reduced.eval(z).unwrap().0;
                let rel = (a - b).norm() / a.norm().max(1.0);
                assert!(rel < 1e-8, "{inv:?} z={z}: {a} vs {b}");
                assert!((a - r).norm() / a.norm().max(1.0) < 1e-8);
            }
        }
    }
}

#[test]
fn laurent_recursion_examples() {
    use schwarzian::elliptic::laurent_coefficients;
    let c2 = laurent_coefficients(&WeierstrassInvariants::new(real(20.0), real(0.0)), 2).unwrap();
    assert_eq!(c2, vec![real(1.0)]);
    let c3 = laurent_coefficients(&WeierstrassInvariants::new(real(0.0), real(28.0)), 3).unwrap();
    assert_eq!(c3, vec![real(0.0), real(1.0)]);
    let c4 = laurent_coefficients(&WeierstrassInvariants::new(real(20.0), real(28.0)), 4).unwrap();
    assert!((c4[2] - real(1.0 / 3.0)).norm() < 1e-15);
    assert!(laurent_coefficients(&WeierstrassInvariants::new(real(1.0), real(1.0)), 1).is_err());
}

/// Substituting the truncated series into ℘'² − 4℘³ + g₂℘ + g₃ leaves only
/// high-order terms near the origin.
#[test]
fn laurent_series_satisfies_ode_near_origin() {
    use schwarzian::elliptic::laurent_coefficients;
    let inv = WeierstrassInvariants::new(c(1.5, -0.5), c(0.25, 2.0));
    let cs = laurent_coefficients(&inv, 20).unwrap();
    let z = c(0.05, 0.02);
    let mut p = z.powi(-2);
    let mut dp = -2.0 * z.powi(-3);
    for (j, ck) in cs.iter().enumerate() {
        let k = (j + 2) as i32;
        p += ck * z.powi(2 * k - 2);
        dp += ck * (2 * k - 2) as f64 * z.powi(2 * k - 3);
    }
    let res = dp * dp - (4.0 * p * p * p - inv.g2 * p - inv.g3);
    assert!(res.norm() < 1e-6 * p.norm().powi(3) * 1e-6, "{res}");
}

#[test]
fn small_argument_values() {
    let inv = WeierstrassInvariants::new(real(16.0), real(0.0));
    let p = WeierstrassP::new(inv).unwrap();
    let v = p.wp(real(0.01)).finite().unwrap();
    assert!((v - real(10000.00008)).norm() < 1e-8, "{v}");
    let z = real(1e-3);
    let dp = p.wp_prime(z).finite().unwrap();
    assert!((z * z * z * dp + 2.0).norm() < 1e-6);
    assert!(p.wp(real(0.0)).is_infinite());
    // stationary values {2, 0, −2}: ℘ vanishes at ω₁ + ω₃
    let d = half_periods(&inv).unwrap();
    let zero_point = d.omega2();
    let w = p.wp(zero_point).finite().unwrap();
    assert!(w.norm() < 1e-10, "{w}");
    let s = p.wp_second(zero_point).finite().unwrap();
    assert!((s + 8.0).norm() < 1e-9);
}

#[test]
fn lemniscatic_half_period_and_values() {
    let inv = WeierstrassInvariants::new(real(4.0), real(0.0));
    let d = half_periods(&inv).unwrap();
    assert!((d.omega1 - real(1.311_028_777_146_06)).norm() < 1e-12, "{}", d.omega1);
    let p = WeierstrassP::new(inv).unwrap();
    assert!((p.wp(d.omega1).finite().unwrap() - real(1.0)).norm() < 1e-10);
    assert!(p.wp_prime(d.omega1).finite().unwrap().norm() < 1e-8);
    let scaled = half_periods(&inv.scaled(real(2.0))).unwrap();
    let ratio = scaled.omega1 / d.omega1;
    assert!((ratio - real(2.0)).norm() < 1e-12 || (ratio + 2.0).norm() < 1e-12);
}

#[test]
fn parity_duplication_homogeneity() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for inv in invariant_set().into_iter().take(15) {
        let p = WeierstrassP::new(inv).unwrap();
        let lat = *p.lattice().unwrap();
        let scaled: Vec<(C64, WeierstrassP)> = [real(2.0), c(1.0, 1.0)]
            .into_iter()
            .map(|t| (t, WeierstrassP::new(inv.scaled(t)).unwrap()))
            .collect();
        for z in annulus_points(&mut rng, 30) {
            if lat.distance(z) < 1e-2 || lat.distance(2.0 * z) < 1e-2 {
                continue;
            }
            let (v, dv) = p.eval(z).unwrap();
            let (vm, dvm) = p.eval(-z).unwrap();
            assert!((v - vm).norm() <= 1e-12 * v.norm().max(1.0));
            assert!((dv + dvm).norm() <= 1e-12 * dv.norm().max(1.0));
            let ddv = 6.0 * v * v - inv.g2 / 2.0;
            let formula = ddv * ddv / (4.0 * dv * dv) - 2.0 * v;
            let direct = p.eval(2.0 * z).unwrap().0;
            assert!((direct - formula).norm() <= 1e-8 * direct.norm().max(1.0), "{inv:?} z={z}");
            for (t, pt) in &scaled {
                let w = pt.eval(t * z).unwrap().0;
                assert!((w - v / (t * t)).norm() <= 1e-9 * w.norm().max(1.0));
            }
        }
    }
}

#[test]
fn second_derivative_matches_finite_difference() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for inv in invariant_set().into_iter().take(10) {
        let p = WeierstrassP::new(inv).unwrap();
        let lat = *p.lattice().unwrap();
        for z in annulus_points(&mut rng, 10) {
            if lat.distance(z) < 0.3 {
                continue;
            }
            let h = 1e-5;
            let fd = (p.eval(z + h).unwrap().1 - p.eval(z - h).unwrap().1) / (2.0 * h);
            let exact = p.wp_second(z).finite().unwrap();
            assert!((fd - exact).norm() <= 1e-6 * exact.norm().max(1.0), "{inv:?} z={z}");
            let even = p.wp_second(-z).finite().unwrap();
            assert!((even - exact).norm() <= 1e-12 * exact.norm().max(1.0));
        }
    }
}

#[test]
fn stationary_value_examples() {
    use schwarzian::elliptic::stationary_values;
    let s = stationary_values(&WeierstrassInvariants::new(real(16.0), real(0.0)));
    let mut v: Vec<f64> = s.values.iter().map(|x| x.re).collect();
    v.sort_by(f64::total_cmp);
    assert!((v[0] + 2.0).abs() < 1e-12 && v[1].abs() < 1e-12 && (v[2] - 2.0).abs() < 1e-12);
    let s = stationary_values(&WeierstrassInvariants::new(real(0.0), real(4.0)));
    for x in s.values {
        assert!((x * x * x - 1.0).norm() < 1e-12);
    }
    let s = stationary_values(&WeierstrassInvariants::new(real(3.0), real(1.0)));
    assert!(s.degenerate);
    let mut m = s.with_multiplicity();
    m.sort_by_key(|x| x.1);
    assert_eq!(m.len(), 2);
    assert!((m[0].0 - real(1.0)).norm() < 1e-8 && m[0].1 == 1);
    assert!((m[1].0 - real(-0.5)).norm() < 1e-6 && m[1].1 == 2);
    assert!(half_periods(&WeierstrassInvariants::new(real(3.0), real(1.0))).is_err());
}
