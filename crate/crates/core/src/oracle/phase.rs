//! Phase shifts from the large-x behaviour of the integrated scattering solution.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use super::ode::{self, DEFAULT_TOL};
use super::shoot::{centrifugal, jump, leading_power, series_start, Jump};
use crate::error::{Error, Result};
use crate::model::PotentialParams;

/// Fit window in units of 1/k.
const WINDOW: (f64, f64) = (50.0, 80.0);
const FIT_POINTS: usize = 240;
const MIN_GRAM: f64 = 1e-10;

/// sqrt(pi z / 2) (J_n(z), Y_n(z)) from the large-argument expansions,
/// summed until the terms stop decreasing.
pub fn asymptotic_basis(n: f64, z: f64) -> (f64, f64) {
    let m = 4.0 * n * n;
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (m - odd * odd) / (k as f64 * 8.0 * z);
        if term == 0.0 || term.abs() >= last {
            break;
        }
        last = term.abs();
        // signs of P and Q alternate every two orders
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-18 {
            break;
        }
    }
    let chi = z - (n * FRAC_PI_2 + FRAC_PI_4);
    let (s, c) = chi.sin_cos();
    (p * c - q * s, p * s + q * c)
}

/// delta from a least-squares fit u = A b1 + B b2 on a window far outside x0.
///
/// The window is [50/k, 80/k] unless x0 lies beyond its start, in which case
/// it is moved to begin at x0 with the same width.
pub fn fit_asymptotic_phase(p: &PotentialParams, ell: u32, k: f64) -> Result<f64> {
    p.validate()?;
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("k must be positive and finite, got {k}")));
    }
    let c = centrifugal(p.d, ell);
    let s = -k * k;
    let mut rhs = |x: f64, y: &[f64; 2]| [y[1], (c / (x * x) + s) * y[0]];
    let fail = |what: &str, x: f64| Error::Integration {
        kappa_or_k: k,
        reason: format!("{what}: step size underflow at x = {x:e}"),
    };

    let (uo, duo) = match jump(p) {
        Jump::InteriorRobin { .. } => (0.0, 1.0),
        Jump::ExteriorRobin { g } => (p.x0, g),
        Jump::Regular { alpha, beta } => {
            let xs = p.x0 * super::INNER_START;
            let (u, du) = series_start(leading_power(p.d, ell), s, xs);
            let mut h = 0.0;
            let y = ode::integrate(&mut rhs, xs, [u, du], p.x0, DEFAULT_TOL, &mut h).map_err(|e| fail("interior", e.t))?;
            (alpha * y[0], beta * y[0] + y[1] / alpha)
        }
    };

    let a = (WINDOW.0 / k).max(p.x0);
    let b = a + (WINDOW.1 - WINDOW.0) / k;
    let mut h = 0.0;
    let mut y = ode::integrate(&mut rhs, p.x0, [uo, duo], a, DEFAULT_TOL, &mut h).map_err(|e| fail("exterior", e.t))?;
    let n = (p.d as f64 - 2.0) / 2.0 + ell as f64;
    let (mut g11, mut g12, mut g22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut x = a;
    for i in 0..FIT_POINTS {
        if i > 0 {
            let next = a + (b - a) * i as f64 / (FIT_POINTS - 1) as f64;
            y = ode::integrate(&mut rhs, x, y, next, DEFAULT_TOL, &mut h).map_err(|e| fail("exterior", e.t))?;
            x = next;
        }
        let (b1, b2) = asymptotic_basis(n, k * x);
        g11 += b1 * b1;
        g12 += b1 * b2;
        g22 += b2 * b2;
        r1 += b1 * y[0];
        r2 += b2 * y[0];
    }
    let det = g11 * g22 - g12 * g12;
    let rel = det / (g11 * g22);
    if !(rel > MIN_GRAM) {
        return Err(Error::FitConditioning(rel));
    }
    let amp_a = (g22 * r1 - g12 * r2) / det;
    let amp_b = (g11 * r2 - g12 * r1) / det;
    let delta = (-amp_b).atan2(amp_a);
    Ok(if delta > FRAC_PI_2 {
        delta - PI
    } else if delta <= -FRAC_PI_2 {
        delta + PI
    } else {
        delta
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_exact_for_half_integer_orders() {
        // n = 1/2: sqrt(pi z/2) J = sin z, sqrt(pi z/2) Y = -cos z
        let (j, y) = asymptotic_basis(0.5, 57.3);
        assert!((j - 57.3f64.sin()).abs() < 1e-13 && (y + 57.3f64.cos()).abs() < 1e-13);
        // n = 3/2: sqrt(pi z/2) J = sin z / z - cos z
        let z: f64 = 61.0;
        let (j, _) = asymptotic_basis(1.5, z);
        assert!((j - (z.sin() / z - z.cos())).abs() < 1e-13);
    }

    #[test]
    fn free_case_has_zero_shift() {
        for d in 2..5 {
            let p = PotentialParams::new(d, 0.0, 0.0, 1.0).unwrap();
            for &k in &[0.05, 1.0, 20.0] {
                assert!(fit_asymptotic_phase(&p, 1, k).unwrap().abs() < 1e-8);
            }
        }
    }
}
