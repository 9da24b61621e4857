use std::f64::consts::PI;

use hyperdelta::specfun::{self, spherical, BesselKind, Order, Scaled};
use proptest::prelude::*;

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn orders() -> impl Iterator<Item = Order> {
    (0..=40).map(|t| Order::from_twice(t).unwrap())
}

/// (a*b - c*d) / target, all as scaled numbers.
fn wronskian_defect(a: Scaled, b: Scaled, c: Scaled, d: Scaled, target: f64) -> f64 {
    let w = a.mul(b).add(c.mul(d).neg());
    w.ratio(Scaled::from_f64(target)) - 1.0
}

fn wronskian_ik(nu: Order, x: f64) -> f64 {
    let p = specfun::modified(nu, x).unwrap();
    wronskian_defect(p.first, p.second_prime, p.first_prime, p.second, -1.0 / x)
}

fn wronskian_jy(nu: Order, x: f64) -> f64 {
    let p = specfun::ordinary(nu, x).unwrap();
    wronskian_defect(p.first, p.second_prime, p.first_prime, p.second, 2.0 / (PI * x))
}

#[test]
fn wronskians_on_grid() {
    for x in log_grid(1e-4, 40.0, 60) {
        for nu in orders() {
            let e = wronskian_ik(nu, x);
            assert!(e.abs() < 1e-10, "IK nu={} x={x}: {e:e}", nu.value());
            let e = wronskian_jy(nu, x);
            assert!(e.abs() < 1e-10, "JY nu={} x={x}: {e:e}", nu.value());
        }
    }
}

#[test]
fn recurrences_on_grid() {
    for x in log_grid(1e-4, 40.0, 60) {
        for nu in orders().skip(1) {
            let lo = nu.shifted(-1).unwrap();
            let hi = nu.shifted(1).unwrap();
            for (kind, sign, rhs_sign) in [
                (BesselKind::J, 1.0, 1.0),
                (BesselKind::Y, 1.0, 1.0),
                (BesselKind::I, -1.0, 1.0),
                (BesselKind::K, -1.0, -1.0),
            ] {
                let a = specfun::bessel_scaled(kind, lo, x).unwrap();
                let b = specfun::bessel_scaled(kind, hi, x).unwrap().scale(sign);
                let c = specfun::bessel_scaled(kind, nu, x).unwrap().scale(rhs_sign * 2.0 * nu.value() / x);
                // scale by the largest term so near-cancellation is measured fairly
                let big = [a, b, c].iter().map(|s| s.ln_abs()).fold(f64::NEG_INFINITY, f64::max);
                let defect = a.add(b).add(c.neg());
                let rel = if defect.mantissa == 0.0 { 0.0 } else { (defect.ln_abs() - big).exp() };
                assert!(rel < 1e-10, "{kind:?} nu={} x={x}: {rel:e}", nu.value());
            }
        }
    }
}

#[test]
fn turan_inequalities_on_grid() {
    for x in log_grid(1e-4, 40.0, 60) {
        for t in (0..=40).step_by(2) {
            let n = Order::from_twice(t).unwrap();
            let (lo, hi) = (n.shifted(-1).unwrap(), n.shifted(1).unwrap());
            let v = |k, o| specfun::bessel_scaled(k, o, x).unwrap();
            let kk = v(BesselKind::K, lo).mul(v(BesselKind::K, hi)).ln_abs() - 2.0 * v(BesselKind::K, n).ln_abs();
            assert!(kk > 0.0, "K Turan fails n={} x={x}", n.value());
            let ii = v(BesselKind::I, lo).mul(v(BesselKind::I, hi)).ln_abs() - 2.0 * v(BesselKind::I, n).ln_abs();
            assert!(ii < 0.0, "I Turan fails n={} x={x}", n.value());
        }
    }
}

/// Agreement of the closed-form and general paths. J and Y are compared
/// relative to the envelope sqrt(J^2 + Y^2), I and K relative to themselves.
fn paths_disagreement(kind: BesselKind, nu: Order, x: f64) -> f64 {
    let a = spherical::half_integer(kind, nu, x).unwrap();
    let b = specfun::bessel_scaled(kind, nu, x).unwrap();
    let scale = if kind.is_modified() {
        b.ln_abs()
    } else {
        let p = specfun::ordinary(nu, x).unwrap();
        p.first.mul(p.first).add(p.second.mul(p.second)).ln_abs() / 2.0
    };
    let d = a.add(b.neg());
    if d.mantissa == 0.0 {
        0.0
    } else {
        (d.ln_abs() - scale).exp()
    }
}

#[test]
fn half_integer_paths_agree_on_grid() {
    for x in log_grid(1e-4, 50.0, 80) {
        for t in (-1..=121).step_by(2) {
            let nu = Order::from_twice(t).unwrap();
            for kind in [BesselKind::J, BesselKind::Y, BesselKind::I, BesselKind::K] {
                let e = paths_disagreement(kind, nu, x);
                assert!(e < 1e-12, "{kind:?} nu={} x={x}: {e:e}", nu.value());
            }
        }
    }
}

proptest! {
    #[test]
    fn wronskians_random(twice in 0i32..=120, lx in -9.0f64..6.5) {
        let x = lx.exp();
        let nu = Order::from_twice(twice).unwrap();
        prop_assert!(wronskian_ik(nu, x).abs() < 1e-10);
        prop_assert!(wronskian_jy(nu, x).abs() < 1e-10);
    }

    #[test]
    fn half_integer_paths_agree_random(m in -1i32..=60, lx in -13.8f64..3.9) {
        let nu = Order::from_twice(2 * m + 1).unwrap();
        let x = lx.exp();
        for kind in [BesselKind::J, BesselKind::Y, BesselKind::I, BesselKind::K] {
            prop_assert!(paths_disagreement(kind, nu, x) < 1e-12);
        }
    }

    #[test]
    fn half_integer_paths_agree_large_argument(m in -1i32..=60, x in 50.0f64..700.0) {
        let nu = Order::from_twice(2 * m + 1).unwrap();
        for kind in [BesselKind::J, BesselKind::Y, BesselKind::I, BesselKind::K] {
            prop_assert!(paths_disagreement(kind, nu, x) < 1e-12);
        }
    }

    #[test]
    fn exp_scaled_variants_match_plain_values(twice in 0i32..=40, x in 0.01f64..700.0) {
        let nu = Order::from_twice(twice).unwrap();
        for (kind, sign) in [(BesselKind::I, -1.0), (BesselKind::K, 1.0)] {
            let scaled = specfun::bessel_exp_scaled(kind, nu, x).unwrap();
            if let Ok(plain) = specfun::bessel(kind, nu, x) {
                let want = plain * (sign * x).exp();
                prop_assert!(((scaled - want) / want).abs() < 1e-13);
            }
        }
    }
}
