//! Bessel functions J, Y, I, K of real order nu >= -1 and positive argument.
//!
//! Orders are restricted to multiples of 1/2, which is all the radial problem
//! ever needs (nu = l + (d-2)/2 + m with m in {-1, 0, 1}). Values are produced
//! as [`Scaled`] numbers internally; the f64 entry points report overflow and
//! underflow as errors instead of returning inf or 0.

mod gamma;
mod general;
mod scaled;
pub mod spherical;

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
pub use general::BesselPair;
pub use scaled::Scaled;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BesselKind {
    J,
    Y,
    I,
    K,
}

impl BesselKind {
    pub fn is_modified(self) -> bool {
        matches!(self, BesselKind::I | BesselKind::K)
    }
}

/// Bessel order, stored exactly as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Order {
    twice: i32,
}

impl Order {
    pub fn from_twice(twice: i32) -> Result<Self> {
        if twice < -2 {
            return Err(Error::Domain(format!("Bessel order {} is below -1", twice as f64 / 2.0)));
        }
        Ok(Self { twice })
    }

    /// Accepts any f64 that is an exact multiple of 1/2 and at least -1.
    pub fn new(nu: f64) -> Result<Self> {
        let t = 2.0 * nu;
        if !t.is_finite() || t.fract() != 0.0 || t.abs() > i32::MAX as f64 {
            return Err(Error::Domain(format!("Bessel order {nu} is not a multiple of 1/2")));
        }
        Self::from_twice(t as i32)
    }

    /// The order l + (d-2)/2 of channel l in d dimensions.
    pub fn channel(d: u32, ell: u32) -> Self {
        Self { twice: (2 * ell + d) as i32 - 2 }
    }

    pub fn twice(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn is_half_integer(self) -> bool {
        self.twice % 2 != 0
    }

    /// `self + m` for integer m.
    pub fn shifted(self, m: i32) -> Result<Self> {
        Self::from_twice(self.twice + 2 * m)
    }
}

fn check_arg(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("Bessel argument must be positive and finite, got {x}")))
    }
}

/// J and Y (first = J, second = Y) with derivatives at any order >= -1.
pub fn ordinary(nu: Order, x: f64) -> Result<BesselPair> {
    check_arg(x)?;
    match nu.twice {
        t if t >= 0 => general::bessel_jy(nu.value(), x),
        // J_{-1} = -J_1, Y_{-1} = -Y_1
        -2 => {
            let p = general::bessel_jy(1.0, x)?;
            Ok(BesselPair {
                first: p.first.neg(),
                first_prime: p.first_prime.neg(),
                second: p.second.neg(),
                second_prime: p.second_prime.neg(),
            })
        }
        // J_{-1/2} = -Y_{1/2}, Y_{-1/2} = J_{1/2}
        _ => {
            let p = general::bessel_jy(0.5, x)?;
            Ok(BesselPair {
                first: p.second.neg(),
                first_prime: p.second_prime.neg(),
                second: p.first,
                second_prime: p.first_prime,
            })
        }
    }
}

/// I and K (first = I, second = K) with derivatives at any order >= -1.
pub fn modified(nu: Order, x: f64) -> Result<BesselPair> {
    check_arg(x)?;
    match nu.twice {
        t if t >= 0 => general::bessel_ik(nu.value(), x),
        -2 => general::bessel_ik(1.0, x),
        // I_{-1/2} = I_{1/2} + (2/pi) K_{1/2}, K_{-1/2} = K_{1/2}
        _ => {
            let p = general::bessel_ik(0.5, x)?;
            Ok(BesselPair {
                first: p.first.add(p.second.scale(2.0 / PI)),
                first_prime: p.first_prime.add(p.second_prime.scale(2.0 / PI)),
                ..p
            })
        }
    }
}

/// Value and derivative of one kind as scaled numbers.
pub fn bessel_with_derivative_scaled(kind: BesselKind, nu: Order, x: f64) -> Result<(Scaled, Scaled)> {
    let p = if kind.is_modified() { modified(nu, x)? } else { ordinary(nu, x)? };
    Ok(match kind {
        BesselKind::J | BesselKind::I => (p.first, p.first_prime),
        BesselKind::Y | BesselKind::K => (p.second, p.second_prime),
    })
}

pub fn bessel_scaled(kind: BesselKind, nu: Order, x: f64) -> Result<Scaled> {
    Ok(bessel_with_derivative_scaled(kind, nu, x)?.0)
}

fn to_f64(kind: BesselKind, nu: Order, x: f64, v: Scaled) -> Result<f64> {
    v.to_f64().ok_or_else(|| {
        let ln_abs = v.ln_abs();
        if ln_abs > 0.0 {
            Error::Overflow { kind, nu: nu.value(), x, ln_abs }
        } else {
            Error::Underflow { kind, nu: nu.value(), x, ln_abs }
        }
    })
}

/// C_nu(x) for C in {J, Y, I, K}.
pub fn bessel(kind: BesselKind, nu: Order, x: f64) -> Result<f64> {
    to_f64(kind, nu, x, bessel_scaled(kind, nu, x)?)
}

/// (C_nu(x), C'_nu(x)).
pub fn bessel_with_derivative(kind: BesselKind, nu: Order, x: f64) -> Result<(f64, f64)> {
    let (v, dv) = bessel_with_derivative_scaled(kind, nu, x)?;
    Ok((to_f64(kind, nu, x, v)?, to_f64(kind, nu, x, dv)?))
}

/// e^{-x} I_nu(x) or e^{x} K_nu(x); plain J, Y otherwise.
pub fn bessel_exp_scaled(kind: BesselKind, nu: Order, x: f64) -> Result<f64> {
    let v = bessel_scaled(kind, nu, x)?;
    let shift = match kind {
        BesselKind::I => -x,
        BesselKind::K => x,
        _ => 0.0,
    };
    to_f64(kind, nu, x, Scaled::new(v.mantissa, v.log_scale + shift))
}

/// I_{nu+1}(x) / I_nu(x), accurate for all x > 0 including x -> 0.
pub fn i_ratio_up(nu: Order, x: f64) -> Result<f64> {
    check_arg(x)?;
    match nu.twice {
        t if t >= 0 => general::i_ratio_up(nu.value(), x),
        // I_0 / I_{-1} = I_0 / I_1
        -2 => Ok(1.0 / general::i_ratio_up(0.0, x)?),
        // I_{1/2} / I_{-1/2} = tanh x
        _ => Ok(x.tanh()),
    }
}

/// C'_n(z)/C_n(z) for C in {J, Y, I, K}; pole error for J, Y at a zero.
pub fn log_derivative_at(kind: BesselKind, n: Order, z: f64) -> Result<f64> {
    check_arg(z)?;
    if kind.is_modified() {
        let (v, dv) = bessel_with_derivative_scaled(kind, n, z)?;
        return Ok(dv.ratio(v));
    }
    let p = ordinary(n, z)?;
    let (v, dv, other) = match kind {
        BesselKind::J => (p.first, p.first_prime, p.second),
        _ => (p.second, p.second_prime, p.first),
    };
    // Zero test against the local envelope sqrt(J^2 + Y^2).
    let env = other.mul(other).add(v.mul(v)).ln_abs() / 2.0;
    if v.mantissa == 0.0 || v.ln_abs() - env < (1e-14f64).ln() {
        return Err(Error::Pole { kind, nu: n.value(), z });
    }
    Ok(dv.ratio(v))
}

/// kappa * d/dz log(z^{-nu} C_{l+nu}(z)) at z = kappa*x0, nu = (d-2)/2.
///
/// Equals d/dx log C(kappa x) at x0 for the reduced function C(z) = z^{-nu} C_{l+nu}(z).
pub fn log_derivative(kind: BesselKind, ell: u32, d: u32, kappa_or_k: f64, x0: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension must be at least 2, got {d}")));
    }
    if !(kappa_or_k > 0.0 && x0 > 0.0) {
        return Err(Error::Domain(format!(
            "log_derivative needs positive kappa and x0 (kappa={kappa_or_k}, x0={x0})"
        )));
    }
    let z = kappa_or_k * x0;
    let nu = (d as f64 - 2.0) / 2.0;
    let n = Order::channel(d, ell);
    if kind == BesselKind::I {
        // I'_n/I_n - nu/z = l/z + I_{n+1}/I_n: no cancellation as z -> 0
        return Ok(kappa_or_k * (ell as f64 / z + i_ratio_up(n, z)?));
    }
    let r = log_derivative_at(kind, n, z)?;
    Ok(kappa_or_k * (r - nu / z))
}
