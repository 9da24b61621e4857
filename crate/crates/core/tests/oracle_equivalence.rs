use hyperdelta::model::PotentialParams;
use hyperdelta::{bound, model, observables, oracle, scatter};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_params(rng: &mut ChaCha8Rng) -> PotentialParams {
    let d = rng.gen_range(2..=6);
    let w0 = rng.gen_range(-10.0..10.0);
    let w1 = rng.gen_range(-0.95..0.95);
    let x0 = rng.gen_range(0.1..10.0);
    PotentialParams::new(d, w0, w1, x0).unwrap()
}

fn params() -> impl Strategy<Value = PotentialParams> {
    (2u32..=6, -10.0f64..10.0, -0.95f64..0.95, 0.1f64..10.0).prop_map(|(d, w0, w1, x0)| PotentialParams::new(d, w0, w1, x0).unwrap())
}

#[test]
fn secular_roots_match_shooting() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut found = 0;
    for _ in 0..150 {
        let p = random_params(&mut rng);
        let ell = rng.gen_range(0..=5);
        let a = bound::find_bound_state(&p, ell).unwrap().map(|s| s.kappa);
        let b = oracle::shoot_bound_state(&p, ell).unwrap();
        match (a, b) {
            (Some(a), Some(b)) => {
                found += 1;
                assert!((a - b).abs() < 1e-6 * a, "{p:?} l={ell}: {a} vs {b}");
            }
            (None, None) => {}
            _ => panic!("{p:?} l={ell}: verdicts differ {a:?} vs {b:?}"),
        }
    }
    assert!(found > 20);
}

#[test]
fn shooting_reproduces_reference_energy() {
    let p = PotentialParams::new(2, 0.0, 0.9, 0.15).unwrap();
    let k = oracle::shoot_bound_state(&p, 0).unwrap().unwrap();
    assert!((k - 1.205f64.sqrt()).abs() < 1e-3);
}

#[test]
fn fit_reproduces_delta_only_closed_form() {
    for (d, ell, w0, x0, k) in [(2u32, 0u32, -2.0, 1.0, 0.7), (3, 1, 3.0, 0.5, 2.0), (3, 2, -6.0, 1.5, 1.3), (5, 0, 1.0, 2.0, 0.2)] {
        let p = PotentialParams::new(d, w0, 0.0, x0).unwrap();
        let fit = oracle::fit_asymptotic_phase(&p, ell, k).unwrap();
        let closed = scatter::phase_shift_delta_only(d, ell, w0, k, x0).unwrap();
        assert!((fit - closed).abs() < 1e-6, "d={d} l={ell}: {fit} vs {closed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fitted_phase_matches_formula(p in params(), ell in 0u32..=5, lk in -1.5f64..1.5) {
        let k = 10f64.powf(lk);
        let a = scatter::phase_shift(&p, ell, k).unwrap().delta;
        let b = oracle::fit_asymptotic_phase(&p, ell, k).unwrap();
        let r = (a - b).rem_euclid(std::f64::consts::PI);
        prop_assert!(r.min(std::f64::consts::PI - r) < 1e-6, "{} vs {}", a, b);
    }

    #[test]
    fn three_dimensional_generic_phase(w0 in -5.0f64..5.0, w1 in -0.9f64..0.9, x0 in 0.3f64..3.0, k in 0.05f64..10.0) {
        let p = PotentialParams::new(3, w0, w1, x0).unwrap();
        let a = scatter::phase_shift(&p, 1, k).unwrap().delta;
        let b = oracle::fit_asymptotic_phase(&p, 1, k).unwrap();
        let r = (a - b).rem_euclid(std::f64::consts::PI);
        prop_assert!(r.min(std::f64::consts::PI - r) < 1e-6);
    }

    #[test]
    fn profile_invariants(p in params(), ell in 0u32..=5) {
        let Some(s) = bound::find_bound_state(&p, ell).unwrap() else { return Ok(()) };
        prop_assume!(s.kappa * p.x0 > 1e-4 && s.kappa * p.x0 < 50.0);
        let prof = oracle::bound_state_profile(&p, ell, s.kappa, 1600).unwrap();

        // matching relations at x0
        let c = model::couplings(&p);
        let [ui, dui, uo, duo] = prof.at_x0;
        prop_assert!((uo - c.alpha * ui).abs() <= 1e-10 * uo.abs());
        let slope = c.beta * ui + dui / c.alpha;
        prop_assert!((duo - slope).abs() <= 1e-10 * (duo.abs() + uo.abs() / p.x0));

        // u = x^{(d-1)/2} R
        let r = prof.interior.radial(p.d);
        let h = (p.d as f64 - 1.0) / 2.0;
        for (i, &x) in prof.interior.grid.iter().enumerate() {
            prop_assert!((x.powf(h) * r[i] - prof.interior.u[i]).abs() <= 1e-14 * prof.interior.u[i].abs().max(1e-300));
        }
        prop_assert!((r[r.len() - 1] - 1.0).abs() < 1e-12);

        // the radial equation holds on the stored samples (sixth-order differences,
        // residual measured against the size of the potential and energy terms)
        let cc = { let m = p.d as f64 + 2.0 * ell as f64; (m - 3.0) * (m - 1.0) / 4.0 };
        let k2 = s.kappa * s.kappa;
        for sol in [&prof.interior, &prof.exterior] {
            let (g, u) = (&sol.grid, &sol.u);
            let dx = g[1] - g[0];
            let umax = u.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let mut worst = (0.0f64, 0.0);
            // stencils cannot resolve the x^p onset within a few steps of the origin
            for i in (3..g.len() - 3).filter(|&i| g[i] > 20.0 * dx) {
                let d2 = (2.0 * (u[i - 3] + u[i + 3]) - 27.0 * (u[i - 2] + u[i + 2]) + 270.0 * (u[i - 1] + u[i + 1]) - 490.0 * u[i])
                    / (180.0 * dx * dx);
                let res = -d2 + (cc / (g[i] * g[i]) + k2) * u[i];
                let r = res.abs() / (umax * (cc.abs() / (g[i] * g[i]) + k2));
                if r > worst.0 {
                    worst = (r, g[i]);
                }
            }
            prop_assert!(worst.0 <= 1e-8, "{:?} residual {:e} at x = {}", sol.side, worst.0, worst.1);
        }

        // moments against the quadrature path
        let norm = observables::bound_state_norm(&p, ell, s.kappa).unwrap();
        prop_assert!((prof.norm - norm).abs() < 1e-8 * norm, "{} vs {}", prof.norm, norm);
        let r = observables::mean_radius(&p, ell, s.kappa).unwrap().value.finite().unwrap();
        prop_assert!((prof.first_moment / prof.norm - r).abs() < 1e-5 * r);
    }
}
