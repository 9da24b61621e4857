//! Bound states: the secular residual per channel, its unique root, and the
//! assembled discrete spectrum.
//!
//! On the regular branch the residual is
//! S(k) = alpha dlogK - beta_tilde - dlogI / alpha, with dlogC the x-derivative
//! of log(z^{-nu} C_{l+nu}(z)), z = k x, at x0. S is strictly monotone with
//! direction -sgn(alpha); it tends to (alpha + 1/alpha)(L_max - l)/x0 as k -> 0
//! and to -sgn(alpha) infinity as k -> infinity, so a root exists iff l < L_max.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{self, Branch, Couplings, LMax, PotentialParams};
use crate::specfun::{self, BesselKind, Order};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub ell: u32,
    /// Underflows to 0 for the weakest d = 2, l = 0 states; see `log_kappa`.
    pub kappa: f64,
    /// ln kappa, finite even when kappa is not representable.
    pub log_kappa: f64,
    /// lambda = -kappa^2
    pub lambda: f64,
    pub degeneracy: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub params: PotentialParams,
    pub l_max: LMax,
    /// One state per channel l = 0..=ell_max, ordered by l.
    pub states: Vec<BoundState>,
    /// Sum of degeneracies.
    pub total_count: u128,
    /// Channel with L_max = l exactly: a zero-energy solution replaces the bound state.
    pub boundary_channel: Option<u32>,
}

/// Lowest kappa * x0 tried before declaring the root unrepresentable.
const KAPPA_X0_FLOOR: f64 = 1e-300;
/// Bracket expansion cap.
const KAPPA_X0_CAP: f64 = 700.0;
const KAPPA_X0_START: f64 = 1e-8;
const REL_TOL: f64 = 1e-12;

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa > 0.0 && kappa.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("kappa must be positive and finite, got {kappa}")))
    }
}

fn residual_with(p: &PotentialParams, c: &Couplings, ell: u32, kappa: f64) -> Result<f64> {
    let dk = || specfun::log_derivative(BesselKind::K, ell, p.d, kappa, p.x0);
    let di = || specfun::log_derivative(BesselKind::I, ell, p.d, kappa, p.x0);
    Ok(match c.branch {
        Branch::Regular => c.alpha * dk()? - c.beta_tilde - di()? / c.alpha,
        // Robin condition on the decaying exterior solution alone
        Branch::RobinDirichletPlus => c.w0_tilde - 4.0 * dk()?,
        // Robin condition on the regular interior solution alone
        Branch::RobinDirichletMinus => c.w0_tilde + 4.0 * di()?,
    })
}

/// S(kappa); on w1 = +-1 the one-sided Robin residual of the surviving side.
pub fn secular_residual(p: &PotentialParams, ell: u32, kappa: f64) -> Result<f64> {
    p.validate()?;
    check_kappa(kappa)?;
    residual_with(p, &model::couplings(p), ell, kappa)
}

/// Limit of the residual as kappa -> 0+.
pub fn secular_residual_at_zero(p: &PotentialParams, ell: u32) -> f64 {
    let c = model::couplings(p);
    let l = ell as f64;
    let d = p.d as f64;
    match c.branch {
        Branch::Regular => (c.alpha + 1.0 / c.alpha) * (model::l_max(p).value - l) / p.x0,
        Branch::RobinDirichletPlus => c.w0_tilde + 4.0 * (d + l - 2.0) / p.x0,
        Branch::RobinDirichletMinus => c.w0_tilde + 4.0 * l / p.x0,
    }
}

/// +1 if the residual increases with kappa, -1 if it decreases.
pub fn residual_direction(p: &PotentialParams) -> f64 {
    let c = model::couplings(p);
    match c.branch {
        Branch::Regular => -c.alpha.signum(),
        _ => 1.0,
    }
}

/// F(y0) = -y0 (I_{n-1}/(alpha I_n) + alpha K_{n-1}/K_n) - (alpha - 1/alpha) l, n = nu + l.
///
/// S(kappa) = 0 iff F(kappa x0) = 2 nu (alpha - 1/alpha) + beta_tilde x0.
pub fn secular_f(alpha: f64, nu: Order, ell: u32, y0: f64) -> Result<f64> {
    if !(alpha != 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("alpha must be finite and nonzero, got {alpha}")));
    }
    if !(y0 > 0.0 && y0.is_finite()) {
        return Err(Error::Domain(format!("y0 must be positive, got {y0}")));
    }
    let n = nu.shifted(ell as i32)?;
    // I_{n-1}/I_n = 2n/y0 + I_{n+1}/I_n (I_{-1} = I_1 covered by the reflection)
    let ii = 2.0 * n.value() / y0 + specfun::i_ratio_up(n, y0)?;
    let kk = specfun::bessel_scaled(BesselKind::K, n.shifted(-1)?, y0)?.ratio(specfun::bessel_scaled(BesselKind::K, n, y0)?);
    Ok(-y0 * (ii / alpha + alpha * kk) - (alpha - 1.0 / alpha) * ell as f64)
}

/// Root of the monotone function g on (lo, hi) with g(lo) < 0 <= g(hi).
fn solve_bracketed(g: &dyn Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, mut glo: f64, mut ghi: f64, s_tol: f64) -> Result<f64> {
    while (hi - lo) > REL_TOL * lo {
        let mid = if hi > 4.0 * lo { lo.sqrt() * hi.sqrt() } else { 0.5 * (lo + hi) };
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid)?;
        if gm < 0.0 {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
            ghi = gm;
        }
    }
    // secant polish inside the final bracket
    let mut best = if glo.abs() < ghi.abs() { (lo, glo) } else { (hi, ghi) };
    for _ in 0..3 {
        if ghi == glo {
            break;
        }
        let x = lo - glo * (hi - lo) / (ghi - glo);
        if !(x > lo && x < hi) {
            break;
        }
        let gx = g(x)?;
        if gx.abs() < best.1.abs() {
            best = (x, gx);
        }
        if gx < 0.0 {
            lo = x;
            glo = gx;
        } else {
            hi = x;
            ghi = gx;
        }
    }
    if best.1.abs() > s_tol {
        return Err(Error::Convergence(format!(
            "bracket collapsed at kappa = {} with residual {:e} above tolerance {s_tol:e}",
            best.0, best.1
        )));
    }
    Ok(best.0)
}

/// The unique bound state in channel l, if any.
pub fn find_bound_state(p: &PotentialParams, ell: u32) -> Result<Option<BoundState>> {
    p.validate()?;
    let lm = model::l_max(p);
    if !lm.admits(ell) {
        return Ok(None);
    }
    let c = model::couplings(p);
    let dir = residual_direction(p);
    let g = |kappa: f64| residual_with(p, &c, ell, kappa).map(|s| dir * s);
    let scale = match c.branch {
        Branch::Regular => c.beta_tilde.abs(),
        _ => c.w0_tilde.abs(),
    };
    let s_tol = 1e-9 * (1.0 + scale);

    let x0 = p.x0;
    let mut lo = KAPPA_X0_START / x0;
    let mut glo = g(lo)?;
    let mut hi;
    let mut ghi;
    if glo >= 0.0 {
        // Root lies below the starting point (weakly bound d = 2, l = 0 states).
        hi = lo;
        ghi = glo;
        loop {
            lo = hi * 1e-8;
            if lo * x0 < KAPPA_X0_FLOOR {
                if let Some(log_y) = deep_s_wave_log_y(p, &c, ell) {
                    return Ok(Some(state(p, ell, log_y - x0.ln())));
                }
                return Err(Error::Convergence(format!(
                    "bound state in channel l = {ell} has kappa x0 below {KAPPA_X0_FLOOR:e}"
                )));
            }
            glo = g(lo)?;
            if glo < 0.0 {
                break;
            }
            hi = lo;
            ghi = glo;
        }
    } else {
        hi = lo;
        loop {
            hi *= 2.0;
            if hi * x0 > KAPPA_X0_CAP {
                return Err(Error::Convergence(format!(
                    "no sign change of the residual up to kappa x0 = {KAPPA_X0_CAP} in channel l = {ell}"
                )));
            }
            ghi = g(hi)?;
            if ghi >= 0.0 {
                break;
            }
            lo = hi;
            glo = ghi;
        }
    }
    let kappa = solve_bracketed(&g, lo, hi, glo, ghi, s_tol)?;
    Ok(Some(state(p, ell, kappa.ln())))
}

fn state(p: &PotentialParams, ell: u32, log_kappa: f64) -> BoundState {
    let kappa = log_kappa.exp();
    BoundState {
        ell,
        kappa,
        log_kappa,
        lambda: -kappa * kappa,
        degeneracy: model::degeneracy(p.d, ell),
    }
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// ln(kappa x0) of a d = 2, l = 0 state lying below the bracket floor.
///
/// There K_0(z) = -ln(z/2) - gamma and z K_0'/K_0 = 1/(ln(z/2) + gamma) up to
/// O(z^2) < 1e-600, while the I_0 term is O(z^2); the residual then vanishes at
/// a closed-form ln z.
fn deep_s_wave_log_y(p: &PotentialParams, c: &Couplings, ell: u32) -> Option<f64> {
    if p.d != 2 || ell != 0 {
        return None;
    }
    // x0 dlogK = 1/(L - ln 2 + gamma), L = ln z
    let target = match c.branch {
        Branch::Regular => c.beta_tilde * p.x0 / c.alpha,
        Branch::RobinDirichletPlus => c.w0_tilde * p.x0 / 4.0,
        Branch::RobinDirichletMinus => return None,
    };
    let log_y = std::f64::consts::LN_2 - EULER_GAMMA + 1.0 / target;
    (log_y < KAPPA_X0_FLOOR.ln()).then_some(log_y)
}

/// All bound states, one per channel l <= ell_max.
pub fn spectrum(p: &PotentialParams) -> Result<Spectrum> {
    p.validate()?;
    let lm = model::l_max(p);
    let mut states = Vec::new();
    if let Some(top) = lm.ell_max {
        for ell in 0..=top {
            match find_bound_state(p, ell) {
                Ok(Some(s)) => states.push(s),
                Ok(None) => {}
                Err(e) => return Err(Error::Channel { ell, source: Box::new(e) }),
            }
        }
    }
    let total_count = states.iter().map(|s| s.degeneracy).sum();
    Ok(Spectrum {
        params: *p,
        l_max: lm,
        states,
        total_count,
        boundary_channel: if lm.on_boundary { lm.ell_max } else { None },
    })
}
