use hyperdelta::model::{self, BoundaryData, PotentialParams};
use hyperdelta::{bound, oracle, zeromode};
use proptest::prelude::*;

/// (d, l) pairs with eta < 0.
fn negative_eta() -> impl Strategy<Value = (u32, u32)> {
    (2u32..=6, 0u32..=5).prop_filter("eta < 0", |&(d, l)| model::eta(d, l) < 0)
}

/// kappa x0 of channel l, or 0 when it has no bound state.
fn y0(p: &PotentialParams, ell: u32) -> f64 {
    bound::find_bound_state(p, ell).unwrap().map_or(0.0, |s| s.kappa * p.x0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn surface_is_where_the_state_disappears((d, ell) in negative_eta(), w1 in -0.9f64..0.9, x0 in 0.2f64..5.0) {
        let ws = zeromode::surface_w0(d, ell, w1, x0).unwrap();
        let p = |w0: f64| PotentialParams::new(d, w0, w1, x0).unwrap();
        prop_assert!(zeromode::zero_mode_exists(&p(ws), ell));
        // bisect on w0 for the point where kappa x0 drops below 1e-6
        let (mut lo, mut hi) = (ws - 1.0, ws + 1.0);
        prop_assert!(y0(&p(lo), ell) > 1e-6 && y0(&p(hi), ell) == 0.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if y0(&p(mid), ell) > 1e-6 { lo = mid } else { hi = mid }
        }
        prop_assert!((lo - ws).abs() < 1e-8 * (1.0 + ws.abs()), "boundary {} vs surface {}", lo, ws);
    }

    #[test]
    fn perturbing_off_the_surface((d, ell) in negative_eta(), w1 in -0.9f64..0.9, x0 in 0.05f64..0.12) {
        // kappa x0 grows like sqrt(n x0 |dw0|), so the 1e-2 bound needs small x0 at high n
        let ws = zeromode::surface_w0(d, ell, w1, x0).unwrap();
        let below = PotentialParams::new(d, ws - 1e-4, w1, x0).unwrap();
        let above = PotentialParams::new(d, ws + 1e-4, w1, x0).unwrap();
        let y = y0(&below, ell);
        prop_assert!(y > 0.0 && y < 1e-2, "kappa x0 = {}", y);
        prop_assert_eq!(y0(&above, ell), 0.0);
        prop_assert!(!zeromode::zero_mode_exists(&below, ell) && !zeromode::zero_mode_exists(&above, ell));
        // the independent shooting path agrees on both sides
        let k = oracle::shoot_bound_state(&below, ell).unwrap().unwrap();
        prop_assert!((k * x0 - y).abs() < 1e-6 * y);
        prop_assert_eq!(oracle::shoot_bound_state(&above, ell).unwrap(), None);
    }

    #[test]
    fn zero_mode_satisfies_matching((d, ell) in negative_eta(), w1 in -0.95f64..0.95, x0 in 0.1f64..10.0) {
        let p = PotentialParams::new(d, zeromode::surface_w0(d, ell, w1, x0).unwrap(), w1, x0).unwrap();
        let z = zeromode::zero_mode_wavefunction(&p, ell).unwrap();
        let c = model::couplings(&p);
        let out = model::apply_matching_reduced(&c, z.boundary(true)).unwrap();
        let ext = z.boundary(false);
        let s = ext.value.abs().max(ext.slope.abs() * x0);
        prop_assert!((out.value - ext.value).abs() < 1e-12 * s);
        prop_assert!((out.slope - ext.slope).abs() * x0 < 1e-12 * s);
        prop_assert!((z.norm_squared() - 1.0).abs() < 1e-12);
        prop_assert!((model::l_max(&p).value - ell as f64).abs() < 1e-12 * (1.0 + ell as f64));
    }

    #[test]
    fn existence_iff_on_boundary_with_nonpositive_eta(d in 2u32..=6, ell in 0u32..=5, w1 in -0.95f64..0.95,
                                                     x0 in 0.1f64..10.0, off in -1.0f64..1.0) {
        // the surface formula extended to any eta gives the point with L_max = l
        let eta = model::eta(d, ell) as f64;
        let ws = ((eta - 3.0) * (1.0 + w1 * w1) + 2.0 * w1) / x0;
        let on = PotentialParams::new(d, ws, w1, x0).unwrap();
        prop_assert!((model::l_max(&on).value - ell as f64).abs() < 1e-12 * (1.0 + ell as f64));
        prop_assert_eq!(zeromode::zero_mode_exists(&on, ell), eta <= 0.0);
        if off.abs() > 1e-6 {
            let away = PotentialParams::new(d, ws + off, w1, x0).unwrap();
            prop_assert!(!zeromode::zero_mode_exists(&away, ell));
        }
    }
}

#[test]
fn positive_eta_has_only_the_trivial_solution() {
    // exterior solutions x^a, x^a ln x with 2a >= -1 are not square-integrable,
    // so the exterior coefficient vanishes and matching u+ = alpha u- kills the interior
    for (d, ell) in [(2u32, 0u32), (2, 1), (3, 0), (4, 0)] {
        let eta = model::eta(d, ell);
        assert!((1..=3).contains(&eta));
        let (a_in, a_out) = zeromode::zero_energy_exponents(eta);
        assert!(2.0 * a_out >= -1.0);
        let c = model::couplings(&PotentialParams::new(d, -1.0, 0.3, 1.0).unwrap());
        let inner = BoundaryData { value: 1.0, slope: a_in };
        let outer = model::apply_matching_reduced(&c, inner).unwrap();
        assert!(outer.value != 0.0, "a nonzero interior forces a nonzero exterior");
        assert!(zeromode::zero_mode_wavefunction(&PotentialParams::new(d, -1.0, 0.3, 1.0).unwrap(), ell).is_err());
    }
}
