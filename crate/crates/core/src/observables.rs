//! Mean radius of bound states.
//!
//! With R = z^{-nu} I_n(z) inside and R proportional to z^{-nu} K_n(z) outside
//! (z = kappa x), u^2 dx is proportional to z I_n(z)^2 dz. Interior integrands
//! are normalised by I_n(y0) and exterior ones by K_n(y0), y0 = kappa x0,
//! which leaves the matching weight alpha^2 between the two pieces.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{self, PotentialParams};
use crate::quadrature;
use crate::specfun::{self, Order};

/// A positive real or the infinity marker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => f.write_str("INF"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanRadius {
    pub ell: u32,
    pub kappa: f64,
    pub value: Extended,
    /// value / x0.
    pub ratio: Extended,
}

/// The four integrals of the mean-radius quotient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialMoments {
    /// int_0^{y0} z^m (I_n(z)/I_n(y0))^2 dz for m = 1, 2.
    pub interior: [f64; 2],
    /// int_{y0}^inf z^m (K_n(z)/K_n(y0))^2 dz for m = 1, 2.
    pub exterior: [f64; 2],
    /// alpha^2; infinite on w1 = +1, zero on w1 = -1.
    pub weight: f64,
    pub y0: f64,
    /// Summed absolute error estimates relative to the combined integrals.
    pub rel_error: f64,
}

impl RadialMoments {
    fn combined(&self, m: usize) -> f64 {
        if self.weight.is_infinite() {
            self.exterior[m]
        } else if self.weight == 0.0 {
            self.interior[m]
        } else {
            self.interior[m] + self.weight * self.exterior[m]
        }
    }

    /// <x> / x0.
    pub fn ratio(&self) -> f64 {
        self.combined(1) / (self.y0 * self.combined(0))
    }
}

const REL_TOL: f64 = 1e-8;
const PANEL_TOL: f64 = 1e-11;
const CUTOFF: f64 = 1e-18;

fn interior_integrals(n: Order, y0: f64) -> Result<([f64; 2], [f64; 2])> {
    let top = specfun::modified(n, y0)?.first;
    let sq = |z: f64| -> f64 {
        match specfun::modified(n, z) {
            Ok(p) => p.first.ratio(top).powi(2),
            Err(_) => f64::NAN,
        }
    };
    let mut out = [0.0; 2];
    let mut err = [0.0; 2];
    for m in 0..2 {
        let mut f = |z: f64| z.powi(m as i32 + 1) * sq(z);
        // the integrand increases with z, so march down from y0
        let mut b = y0;
        while b > 0.0 {
            let a = if b > 2.0 { b - 2.0 } else { 0.0 };
            let e = quadrature::integrate(&mut f, a, b, PANEL_TOL * out[m], PANEL_TOL)?;
            out[m] += e.value;
            err[m] += e.error;
            if a > 0.0 {
                let rest = a * f(a);
                if rest < CUTOFF * out[m] {
                    err[m] += rest;
                    break;
                }
            }
            b = a;
        }
    }
    Ok((out, err))
}

fn exterior_integrals(n: Order, y0: f64) -> Result<([f64; 2], [f64; 2])> {
    let bottom = specfun::modified(n, y0)?.second;
    let sq = |z: f64| -> f64 {
        match specfun::modified(n, z) {
            Ok(p) => p.second.ratio(bottom).powi(2),
            Err(_) => f64::NAN,
        }
    };
    let mut out = [0.0; 2];
    let mut err = [0.0; 2];
    let past_peak = n.value().abs() + 3.0;
    for m in 0..2 {
        let mp = m as f64 + 1.0;
        let mut f = |z: f64| z.powf(mp) * sq(z);
        let mut a = y0;
        loop {
            // geometric panels below 1, unit-width panels beyond
            let b = if a < 1.0 { (2.0 * a).min(1.0).max(a + f64::MIN_POSITIVE) } else { a + 2.0 };
            let e = quadrature::integrate(&mut f, a, b, PANEL_TOL * out[m], PANEL_TOL)?;
            out[m] += e.value;
            err[m] += e.error;
            a = b;
            if a > past_peak {
                let fa = f(a);
                if fa < CUTOFF * out[m] {
                    // z^m K^2 decays at least like e^{-2z} (z/a)^m beyond a
                    err[m] += fa / (2.0 - mp / a);
                    break;
                }
            }
        }
    }
    Ok((out, err))
}

/// The four integrals for channel l at bound-state momentum kappa.
pub fn radial_moments(p: &PotentialParams, ell: u32, kappa: f64) -> Result<RadialMoments> {
    p.validate()?;
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::Domain(format!("kappa must be positive and finite, got {kappa}")));
    }
    let y0 = kappa * p.x0;
    let n = Order::channel(p.d, ell);
    let alpha = model::couplings(p).alpha;
    let (interior, ie) = interior_integrals(n, y0)?;
    let (exterior, ee) = exterior_integrals(n, y0)?;
    let mut moments = RadialMoments {
        interior,
        exterior,
        weight: alpha * alpha,
        y0,
        rel_error: 0.0,
    };
    let errs = RadialMoments {
        interior: ie,
        exterior: ee,
        ..moments
    };
    moments.rel_error = (0..2).map(|m| errs.combined(m) / moments.combined(m)).fold(0.0, f64::max);
    if !(moments.rel_error <= REL_TOL) {
        let value = moments.ratio();
        return Err(Error::Quadrature {
            value,
            error: moments.rel_error * value,
        });
    }
    Ok(moments)
}

/// <x> for the bound state (l, kappa) of `p`.
pub fn mean_radius(p: &PotentialParams, ell: u32, kappa: f64) -> Result<MeanRadius> {
    let ratio = radial_moments(p, ell, kappa)?.ratio();
    Ok(MeanRadius {
        ell,
        kappa,
        value: Extended::Finite(ratio * p.x0),
        ratio: Extended::Finite(ratio),
    })
}

/// int_0^inf u^2 dx for the state normalised by R(x0-) = 1, u = x^{(d-1)/2} R.
pub fn bound_state_norm(p: &PotentialParams, ell: u32, kappa: f64) -> Result<f64> {
    let m = radial_moments(p, ell, kappa)?;
    Ok(p.x0.powi(p.d as i32 - 2) / (kappa * kappa) * m.combined(0))
}

/// lim_{kappa -> 0+} <x>/x0 in a channel with the given eta.
pub fn mean_radius_zero_limit(alpha: f64, eta: i64) -> Extended {
    if eta >= 0 {
        return Extended::Infinite;
    }
    let e = eta as f64;
    let frac = 2.0 * (e - 3.0) / ((e - 6.0) * (alpha * alpha * (e - 5.0) + e - 1.0));
    Extended::Finite((e - 1.0) / e * (1.0 - frac.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound;

    /// Zero-mode moments from the power-law wavefunction.
    fn zero_mode_ratio(alpha: f64, eta: i64) -> f64 {
        let e = eta as f64;
        let a2 = alpha * alpha;
        (1.0 / (a2 * (6.0 - e)) - 1.0 / e) / (1.0 / (a2 * (5.0 - e)) + 1.0 / (1.0 - e))
    }

    #[test]
    fn zero_limit_examples() {
        for eta in 0..=3 {
            assert_eq!(mean_radius_zero_limit(0.7, eta), Extended::Infinite);
        }
        assert!((mean_radius_zero_limit(1.0, -1).finite().unwrap() - 12.0 / 7.0).abs() < 1e-15);
        assert!((mean_radius_zero_limit(1.0, -2).finite().unwrap() - 1.3125).abs() < 1e-15);
        assert_eq!(mean_radius_zero_limit(f64::INFINITY, -1), Extended::Finite(2.0));
        for eta in -6..=-1 {
            for &a in &[0.05, 0.3, 1.0, 2.5, 40.0] {
                let v = mean_radius_zero_limit(a, eta).finite().unwrap();
                assert!((v - zero_mode_ratio(a, eta)).abs() < 1e-13 * v);
            }
        }
    }

    #[test]
    fn hydrogen_like_closed_form() {
        // d = 3, l = 0, w1 = +1: only the exterior piece survives and
        // u = e^{-kappa x}, so <x> = x0 + 1/(2 kappa)
        let p = PotentialParams::new(3, -6.0, 1.0, 1.0).unwrap();
        let s = bound::find_bound_state(&p, 0).unwrap().unwrap();
        let r = mean_radius(&p, 0, s.kappa).unwrap();
        let want = 1.0 + 0.5 / s.kappa;
        assert!((r.value.finite().unwrap() - want).abs() < 1e-9 * want);
    }

    #[test]
    fn three_dimensional_s_wave_matches_elementary_integrals() {
        // n = 1/2: z I^2 = (2/pi) sinh^2 z, z K^2 = (pi/2) e^{-2z}
        let p = PotentialParams::new(3, -1.85, 0.437, 1.0).unwrap();
        let kappa = 0.7;
        let m = radial_moments(&p, 0, kappa).unwrap();
        let y: f64 = kappa;
        let s2 = y.sinh().powi(2);
        // int_0^y sinh^2 = (sinh 2y - 2y)/4, int_0^y z sinh^2 = (2y sinh 2y - cosh 2y - 2y^2 + 1)/8
        let i1 = y * ((2.0 * y).sinh() - 2.0 * y) / 4.0 / s2;
        let i2 = y * (2.0 * y * (2.0 * y).sinh() - (2.0 * y).cosh() - 2.0 * y * y + 1.0) / 8.0 / s2;
        let e1 = y / 2.0;
        let e2 = y * (2.0 * y + 1.0) / 4.0;
        for (a, b) in [(m.interior[0], i1), (m.interior[1], i2), (m.exterior[0], e1), (m.exterior[1], e2)] {
            assert!((a - b).abs() < 1e-10 * b, "{a} vs {b}");
        }
    }

    #[test]
    fn small_and_large_arguments_stay_finite() {
        let p = PotentialParams::new(4, -3.0, 0.2, 1.0).unwrap();
        for &kappa in &[1e-6, 1e-3, 30.0, 600.0] {
            for ell in [0u32, 3, 6] {
                let r = mean_radius(&p, ell, kappa).unwrap().ratio.finite().unwrap();
                assert!(r.is_finite() && r > 0.0, "kappa={kappa} l={ell}: {r}");
            }
        }
        // deep states localise at the shell
        let r = mean_radius(&p, 0, 600.0).unwrap().ratio.finite().unwrap();
        assert!((r - 1.0).abs() < 1e-2);
    }
}
