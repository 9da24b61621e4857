//! Zero-energy states.
//!
//! At lambda = 0 the reduced equation has the power solutions x^{(4-eta)/2}
//! (regular at 0) and x^{(eta-2)/2} (decaying), eta = 5 - d - 2l. The decaying
//! one is square-integrable at infinity only for eta <= 0, so zero modes live
//! in those channels, and only on the surface L_max = l of coupling space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{self, BoundaryData, Branch, PotentialParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroMode {
    pub ell: u32,
    pub eta: i64,
    /// Exterior coefficient: v = c1 x^{(eta-2)/2} for x > x0.
    pub c1: f64,
    /// Interior coefficient: v = c2 x^{(4-eta)/2} for x < x0.
    pub c2: f64,
    pub normalized: bool,
    pub x0: f64,
}

/// (interior, exterior) exponents of the zero-energy power solutions.
pub fn zero_energy_exponents(eta: i64) -> (f64, f64) {
    ((4.0 - eta as f64) / 2.0, (eta as f64 - 2.0) / 2.0)
}

/// beta on the zero-mode surface of channel eta.
pub fn surface_beta(alpha: f64, eta: i64, x0: f64) -> f64 {
    let e = eta as f64;
    (alpha * alpha * (e - 2.0) + e - 4.0) / (2.0 * alpha * x0)
}

/// The w0 at which channel l carries a zero mode for the given w1, x0.
///
/// Equivalent to L_max = l.
pub fn surface_w0(d: u32, ell: u32, w1: f64, x0: f64) -> Result<f64> {
    let eta = model::eta(d, ell);
    if eta > 0 {
        return Err(Error::NoZeroMode {
            ell,
            reason: format!("eta = {eta} > 0: the decaying solution is not square-integrable"),
        });
    }
    if w1 == 1.0 || w1 == -1.0 {
        return Err(Error::Branch { w1 });
    }
    if !(x0 > 0.0 && x0.is_finite() && w1.is_finite()) {
        return Err(Error::Domain(format!("need finite w1 and positive x0 (w1={w1}, x0={x0})")));
    }
    Ok(((eta as f64 - 3.0) * (1.0 + w1 * w1) + 2.0 * w1) / x0)
}

fn close_rel(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Whether channel l of `p` carries a normalisable zero-energy state.
pub fn zero_mode_exists(p: &PotentialParams, ell: u32) -> bool {
    let c = model::couplings(p);
    let eta = model::eta(p.d, ell);
    if c.branch != Branch::Regular || eta > 0 {
        return false;
    }
    close_rel(c.beta, surface_beta(c.alpha, eta, p.x0), 1e-12)
}

/// The normalised zero mode of channel l; error if none exists.
pub fn zero_mode_wavefunction(p: &PotentialParams, ell: u32) -> Result<ZeroMode> {
    p.validate()?;
    let eta = model::eta(p.d, ell);
    if !zero_mode_exists(p, ell) {
        let reason = if eta > 0 {
            format!("eta = {eta} > 0")
        } else {
            "couplings are off the zero-mode surface".to_string()
        };
        return Err(Error::NoZeroMode { ell, reason });
    }
    let alpha = model::couplings(p).alpha;
    let e = eta as f64;
    // int |v|^2 = c1^2 x0^{eta-1} (1/(alpha^2 (5-eta)) + 1/(1-eta))
    let norm2 = p.x0.powf(e - 1.0) * (1.0 / (alpha * alpha * (5.0 - e)) + 1.0 / (1.0 - e));
    let c1 = 1.0 / norm2.sqrt();
    Ok(ZeroMode {
        ell,
        eta,
        c1,
        c2: p.x0.powf(e - 3.0) * c1 / alpha,
        normalized: true,
        x0: p.x0,
    })
}

impl ZeroMode {
    pub fn value(&self, x: f64) -> f64 {
        let (pi, pe) = zero_energy_exponents(self.eta);
        if x < self.x0 {
            self.c2 * x.powf(pi)
        } else {
            self.c1 * x.powf(pe)
        }
    }

    /// Value and slope at x0- (`inner = true`) or x0+.
    pub fn boundary(&self, inner: bool) -> BoundaryData {
        let (pi, pe) = zero_energy_exponents(self.eta);
        let (c, p) = if inner { (self.c2, pi) } else { (self.c1, pe) };
        BoundaryData {
            value: c * self.x0.powf(p),
            slope: c * p * self.x0.powf(p - 1.0),
        }
    }

    /// int_0^inf |v|^2 dx from the power integrals.
    pub fn norm_squared(&self) -> f64 {
        let e = self.eta as f64;
        self.c2 * self.c2 * self.x0.powf(5.0 - e) / (5.0 - e) + self.c1 * self.c1 * self.x0.powf(e - 1.0) / (1.0 - e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_zero_modes_for_positive_eta() {
        for &(d, ell) in &[(2u32, 0u32), (2, 1), (3, 0), (4, 0)] {
            assert!(model::eta(d, ell) > 0);
            for &w1 in &[-0.7, 0.0, 0.4, 2.0] {
                for &w0 in &[-20.0, -3.0, 0.0, 5.0] {
                    assert!(!zero_mode_exists(&PotentialParams::new(d, w0, w1, 1.3).unwrap(), ell));
                }
            }
            assert!(matches!(surface_w0(d, ell, 0.2, 1.0), Err(Error::NoZeroMode { .. })));
        }
    }

    #[test]
    fn delta_only_three_dimensional_p_wave() {
        let on = PotentialParams::new(3, -3.0, 0.0, 1.0).unwrap();
        assert!(zero_mode_exists(&on, 1));
        let lm = model::l_max(&on);
        assert!(lm.on_boundary && lm.value == 1.0);
        assert!(!zero_mode_exists(&PotentialParams::new(3, -3.0001, 0.0, 1.0).unwrap(), 1));
        assert_eq!(surface_w0(3, 1, 0.0, 1.0).unwrap(), -3.0);
    }

    #[test]
    fn wavefunction_matches_and_is_normalised() {
        for &(d, ell, w1, x0) in &[(3u32, 1u32, 0.0, 1.0), (2, 2, 0.3, 0.7), (5, 1, -0.45, 2.5), (4, 4, 0.9, 1.1)] {
            let w0 = surface_w0(d, ell, w1, x0).unwrap();
            let p = PotentialParams::new(d, w0, w1, x0).unwrap();
            let z = zero_mode_wavefunction(&p, ell).unwrap();
            assert!((z.norm_squared() - 1.0).abs() < 1e-12);
            let c = model::couplings(&p);
            let out = model::apply_matching_reduced(&c, z.boundary(true)).unwrap();
            let ext = z.boundary(false);
            assert!((out.value - ext.value).abs() < 1e-12 * ext.value.abs());
            assert!((out.slope - ext.slope).abs() < 1e-12 * ext.slope.abs().max(ext.value.abs()));
            assert_eq!(z.value(0.0), 0.0);
            assert!(zero_mode_exists(&p, ell));
        }
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(zero_energy_exponents(-1), (2.5, -1.5));
        // eta = 0: exterior x^{-1} is square-integrable but x |v|^2 ~ 1/x is not
        assert_eq!(zero_energy_exponents(0).1, -1.0);
    }

    #[test]
    fn positive_eta_forces_trivial_solution() {
        // For eta >= 1 every exterior zero-energy solution (x^p, and x^p ln x at
        // the double root) has 2p >= -1, so the L2 condition kills the exterior
        // coefficient; matching u+ = alpha u- then forces the interior one to 0.
        for eta in 1..=3 {
            let (pi, pe) = zero_energy_exponents(eta);
            assert!(2.0 * pe >= -1.0 && 2.0 * pi >= -1.0);
            let alpha = 1.7;
            // rows: value matching with exterior coefficient already zero
            let m = [[alpha * 1.3f64.powf(pi), 0.0], [0.0, 1.0]];
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            assert!(det.abs() > 0.0);
        }
    }
}
