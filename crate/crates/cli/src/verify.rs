//! Cross-path checks over seeded random parameters: every closed-form or
//! Bessel-function result is compared against an independent evaluation.

use std::f64::consts::PI;

use hyperdelta::model::{self, PotentialParams};
use hyperdelta::specfun::{self, Order, Scaled};
use hyperdelta::{bound, observables, oracle, scatter, zeromode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub trials: usize,
    /// Largest observed discrepancy, in the units `tolerance` is stated in.
    pub worst: f64,
    pub tolerance: f64,
    /// Trials that broke the tolerance or disagreed qualitatively.
    pub failures: usize,
    pub note: String,
}

impl Check {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            trials: 0,
            worst: 0.0,
            tolerance,
            failures: 0,
            note: String::new(),
        }
    }

    fn record(&mut self, err: f64) {
        self.trials += 1;
        if err.is_nan() || err > self.tolerance {
            self.failures += 1;
        }
        if err.is_nan() || err > self.worst {
            self.worst = err;
        }
    }

    fn fail(&mut self, what: String) {
        self.trials += 1;
        self.failures += 1;
        if self.note.is_empty() {
            self.note = what;
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn random_params(rng: &mut ChaCha8Rng) -> PotentialParams {
    let d = rng.gen_range(2..=6);
    let w0 = rng.gen_range(-10.0..10.0);
    let w1 = rng.gen_range(-0.95..0.95);
    let x0 = rng.gen_range(0.1..10.0);
    PotentialParams::new(d, w0, w1, x0).expect("sampled parameters are valid")
}

fn mod_pi(a: f64, b: f64) -> f64 {
    let r = (a - b).rem_euclid(PI);
    r.min(PI - r)
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn wronskian_defect(p: specfun::BesselPair, target: f64) -> f64 {
    let w = p.first.mul(p.second_prime).add(p.first_prime.mul(p.second).neg());
    (w.ratio(Scaled::from_f64(target)) - 1.0).abs()
}

/// Runs every check with `trials` random draws each.
pub fn run(trials: usize, seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut roots = Check::new("secular roots vs shooting (rel)", 1e-6);
    let mut poles = Check::new("continued denominator sign change at roots", 0.0);
    let mut identity = Check::new("residual vs F form (scaled)", 1e-10);
    let mut monotone = Check::new("residual strictly monotone on 1e3 grid", 0.0);
    let mut ordering = Check::new("lambda_l < lambda_l+1", 0.0);
    let mut fit = Check::new("phase shift vs asymptotic fit (mod pi)", 1e-6);
    let mut unitarity = Check::new("|S| = 1", 1e-12);
    let mut closed = Check::new("closed forms vs general path (mod pi)", 1e-12);
    let mut conformal = Check::new("pure delta' conformal invariance", 1e-9);
    let mut moments = Check::new("mean radius vs oracle moments (rel)", 1e-5);
    let mut norms = Check::new("norm vs oracle (rel)", 1e-8);
    let mut wronskians = Check::new("Wronskians (rel)", 1e-10);
    let mut surface = Check::new("zero-mode surface lies on L_max = l", 1e-12);

    for _ in 0..trials {
        let p = random_params(&mut rng);
        let ell = rng.gen_range(0..=5u32);
        let c = model::couplings(&p);

        // bound states: two independent paths, then the pole of S
        match (bound::find_bound_state(&p, ell), oracle::shoot_bound_state(&p, ell)) {
            // states below kappa x0 = 1e-300 are out of the oracle's reach
            (Ok(Some(a)), _) if a.kappa == 0.0 => {}
            (Ok(a), Ok(b)) => match (a.map(|s| s.kappa), b) {
                (Some(a), Some(b)) => {
                    roots.record(rel(a, b));
                    let lo = scatter::continued_denominator(&p, ell, a * (1.0 - 1e-8));
                    let hi = scatter::continued_denominator(&p, ell, a * (1.0 + 1e-8));
                    match (lo, hi) {
                        (Ok(lo), Ok(hi)) if lo * hi < 0.0 => poles.record(0.0),
                        (lo, hi) => poles.fail(format!("{p:?} l={ell}: {lo:?} {hi:?}")),
                    }
                }
                (None, None) => roots.record(0.0),
                (a, b) => roots.fail(format!("{p:?} l={ell}: verdicts {a:?} vs {b:?}")),
            },
            (a, b) => roots.fail(format!("{p:?} l={ell}: {:?} / {:?}", a.err(), b.err())),
        }

        let y = 10f64.powf(rng.gen_range(-4.0..2.5));
        let nu = Order::channel(p.d, 0);
        match (bound::secular_residual(&p, ell, y / p.x0), bound::secular_f(c.alpha, nu, ell, y)) {
            (Ok(s), Ok(f)) => {
                let rhs = f - 2.0 * nu.value() * (c.alpha - 1.0 / c.alpha) - c.beta_tilde * p.x0;
                let scale = (c.alpha.abs() + 1.0 / c.alpha.abs()) * (1.0 + y + ell as f64 + p.d as f64) + c.beta_tilde.abs() * p.x0;
                identity.record((p.x0 * s - rhs).abs() / scale);
            }
            (a, b) => identity.fail(format!("{p:?}: {a:?} {b:?}")),
        }

        let grid: Vec<f64> = (0..1000).map(|i| 10f64.powf(-4.0 + 6.0 * i as f64 / 999.0) / p.x0).collect();
        let vals: Result<Vec<f64>, _> = grid.iter().map(|&k| bound::secular_residual(&p, ell, k)).collect();
        match vals {
            Ok(v) => {
                let dir = bound::residual_direction(&p);
                if v.windows(2).all(|w| dir * (w[1] - w[0]) > 0.0) {
                    monotone.record(0.0);
                } else {
                    monotone.fail(format!("{p:?} l={ell}"));
                }
            }
            Err(e) => monotone.fail(format!("{p:?} l={ell}: {e}")),
        }

        match bound::spectrum(&p) {
            Ok(s) => {
                if s.states.windows(2).all(|w| w[1].ell != w[0].ell + 1 || w[0].lambda < w[1].lambda) {
                    ordering.record(0.0);
                } else {
                    ordering.fail(format!("{p:?}"));
                }
            }
            Err(e) => ordering.fail(format!("{p:?}: {e}")),
        }

        // scattering
        let k = 10f64.powf(rng.gen_range(-1.5..1.5));
        match (scatter::phase_shift(&p, ell, k), oracle::fit_asymptotic_phase(&p, ell, k)) {
            (Ok(a), Ok(b)) => {
                fit.record(mod_pi(a.delta, b));
                unitarity.record((a.s_eigenvalue.norm() - 1.0).abs());
            }
            (a, b) => fit.fail(format!("{p:?} l={ell} k={k}: {:?} / {:?}", a.err(), b.err())),
        }
        let general = |w0: f64, w1: f64| scatter::phase_shift(&PotentialParams::new(p.d, w0, w1, p.x0).unwrap(), ell, k).map(|s| s.delta);
        match (general(p.w0, 0.0), scatter::phase_shift_delta_only(p.d, ell, p.w0, k, p.x0)) {
            (Ok(a), Ok(b)) => closed.record(mod_pi(a, b)),
            (a, b) => closed.fail(format!("delta-only {p:?}: {a:?} {b:?}")),
        }
        match (general(0.0, p.w1), scatter::phase_shift_pure_delta_prime(p.d, ell, p.w1, k, p.x0)) {
            (Ok(a), Ok(b)) => closed.record(mod_pi(a, b)),
            (a, b) => closed.fail(format!("pure delta' {p:?}: {a:?} {b:?}")),
        }
        let base = scatter::phase_shift_pure_delta_prime(p.d, ell, p.w1, k, p.x0);
        for lambda in [1.0 / 3.0, 2.0, 10.0] {
            match (&base, scatter::phase_shift_pure_delta_prime(p.d, ell, p.w1, k / lambda, p.x0 * lambda)) {
                (Ok(a), Ok(b)) => conformal.record(mod_pi(*a, b)),
                (a, b) => conformal.fail(format!("{p:?}: {a:?} {b:?}")),
            }
        }

        // mean radius and norm against the integrated profile
        if let Ok(Some(s)) = bound::find_bound_state(&p, ell) {
            if s.kappa * p.x0 > 1e-4 && s.kappa * p.x0 < 50.0 {
                let prof = oracle::bound_state_profile(&p, ell, s.kappa, 400);
                let mr = observables::mean_radius(&p, ell, s.kappa);
                let nm = observables::bound_state_norm(&p, ell, s.kappa);
                match (prof, mr, nm) {
                    (Ok(prof), Ok(mr), Ok(nm)) => {
                        moments.record(rel(prof.first_moment / prof.norm, mr.value.finite().unwrap_or(f64::NAN)));
                        norms.record(rel(prof.norm, nm));
                    }
                    (a, b, c) => moments.fail(format!("{p:?} l={ell}: {:?} {:?} {:?}", a.err(), b.err(), c.err())),
                }
            }
        }

        // special functions
        let order = Order::from_twice(rng.gen_range(0..=120)).unwrap();
        let x = 10f64.powf(rng.gen_range(-6.0..3.0));
        match specfun::modified(order, x) {
            Ok(pair) => wronskians.record(wronskian_defect(pair, -1.0 / x)),
            Err(e) => wronskians.fail(format!("IK nu={} x={x}: {e}", order.value())),
        }
        match specfun::ordinary(order, x) {
            Ok(pair) => wronskians.record(wronskian_defect(pair, 2.0 / (PI * x))),
            Err(e) => wronskians.fail(format!("JY nu={} x={x}: {e}", order.value())),
        }

        // zero modes
        if model::eta(p.d, ell) <= 0 {
            match zeromode::surface_w0(p.d, ell, p.w1, p.x0) {
                Ok(w0) => {
                    let q = PotentialParams::new(p.d, w0, p.w1, p.x0).unwrap();
                    let lm = model::l_max(&q).value;
                    surface.record((lm - ell as f64).abs() / (1.0 + ell as f64));
                    if !zeromode::zero_mode_exists(&q, ell) {
                        surface.fail(format!("{q:?} l={ell}: no zero mode on the surface"));
                    }
                }
                Err(e) => surface.fail(format!("{p:?} l={ell}: {e}")),
            }
        }
    }
    vec![
        roots, poles, identity, monotone, ordering, fit, unitarity, closed, conformal, moments, norms, wronskians, surface,
    ]
}
