//! Bound states by direct integration of -u'' + c u / x^2 = -kappa^2 u.
//!
//! Shooting works on g = x u'/u in t = ln x, which obeys
//! dg/dt = g + c + kappa^2 x^2 - g^2. Neither the regular interior solution
//! nor the decaying exterior one has a node when kappa is real, so g stays
//! finite, and both integration directions contract towards the wanted solution.

use serde::{Deserialize, Serialize};

use super::ode::{self, Tolerance, TIGHT_TOL};
use crate::error::{Error, Result};
use crate::model::PotentialParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Interior,
    Exterior,
}

/// Samples of the reduced radial function u = x^{(d-1)/2} R on one side of x0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSolution {
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    pub u_prime: Vec<f64>,
    pub kappa_or_k: f64,
    pub side: Side,
}

impl RadialSolution {
    /// R = x^{-(d-1)/2} u on the same grid.
    pub fn radial(&self, d: u32) -> Vec<f64> {
        let e = -(d as f64 - 1.0) / 2.0;
        self.grid.iter().zip(&self.u).map(|(x, u)| x.powf(e) * u).collect()
    }
}

/// Both halves of a bound state with R(x0-) = 1, plus its moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundProfile {
    pub interior: RadialSolution,
    pub exterior: RadialSolution,
    /// int_0^inf u^2 dx.
    pub norm: f64,
    /// int_0^inf x u^2 dx.
    pub first_moment: f64,
    /// u(x0-), u'(x0-), u(x0+), u'(x0+).
    pub at_x0: [f64; 4],
}

/// Start of the interior integration, relative to x0.
pub const INNER_START: f64 = 1e-3;
/// Exterior integration starts at x0 + EXTERIOR_REACH / kappa.
pub const EXTERIOR_REACH: f64 = 40.0;
const DEFECT_TOL: f64 = 1e-10;
const WIDTH_TOL: f64 = 1e-13;

/// (d + 2l - 3)(d + 2l - 1)/4.
pub(crate) fn centrifugal(d: u32, ell: u32) -> f64 {
    let m = d as f64 + 2.0 * ell as f64;
    (m - 3.0) * (m - 1.0) / 4.0
}

/// Leading power (d - 1)/2 + l of the regular solution.
pub(crate) fn leading_power(d: u32, ell: u32) -> f64 {
    (d as f64 - 1.0) / 2.0 + ell as f64
}

/// u = x^p sum_j a_j x^{2j} with a_0 = 1 for u'' = (c/x^2 + s) u; returns (u, u').
pub(crate) fn series_start(p: f64, s: f64, x: f64) -> (f64, f64) {
    let (mut u, mut du) = (0.0, 0.0);
    let mut a = 1.0;
    let x2 = x * x;
    let mut pow = x.powf(p);
    for j in 0..10_000 {
        let jf = j as f64;
        if j > 0 {
            a *= s / (2.0 * jf * (2.0 * p + 2.0 * jf - 1.0));
        }
        let term = a * pow;
        u += term;
        du += (p + 2.0 * jf) * term / x;
        if j > 0 && term.abs() <= 1e-18 * u.abs() {
            break;
        }
        pow *= x2;
    }
    (u, du)
}

/// The regular branch couplings, computed here from (w0, w1) directly.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Jump {
    /// u+ = alpha u-, u'+ = beta u- + u'-/alpha.
    Regular { alpha: f64, beta: f64 },
    /// w1 = +1: exterior obeys x0 u'/u = g.
    ExteriorRobin { g: f64 },
    /// w1 = -1: interior obeys x0 u'/u = g, exterior vanishes at x0.
    InteriorRobin { g: f64 },
}

pub(crate) fn jump(p: &PotentialParams) -> Jump {
    let half = (p.d as f64 - 1.0) / 2.0;
    if p.w1 == 1.0 {
        let w0t = p.w0 + 2.0 * (1.0 - p.d as f64) / p.x0;
        Jump::ExteriorRobin { g: p.x0 * w0t / 4.0 + half }
    } else if p.w1 == -1.0 {
        let w0t = p.w0 + 2.0 * (p.d as f64 - 1.0) / p.x0;
        Jump::InteriorRobin { g: -p.x0 * w0t / 4.0 + half }
    } else {
        Jump::Regular {
            alpha: (1.0 + p.w1) / (1.0 - p.w1),
            beta: p.w0 / (1.0 - p.w1 * p.w1),
        }
    }
}

fn fail(kappa: f64, what: &str, t: f64) -> Error {
    Error::Integration {
        kappa_or_k: kappa,
        reason: format!("{what}: step size underflow at x = {:e}", t.exp()),
    }
}

/// x u'/u at x0- for the regular interior solution.
pub fn interior_log_derivative(p: &PotentialParams, ell: u32, kappa: f64, tol: Tolerance) -> Result<f64> {
    let c = centrifugal(p.d, ell);
    let pw = leading_power(p.d, ell);
    let k2 = kappa * kappa;
    let xs = p.x0 * INNER_START;
    let (u, du) = series_start(pw, k2, xs);
    let mut h = 0.0;
    let mut rhs = |t: f64, g: &[f64; 1]| {
        let kx = kappa * t.exp();
        [g[0] + c + kx * kx - g[0] * g[0]]
    };
    let g = ode::integrate(&mut rhs, xs.ln(), [xs * du / u], p.x0.ln(), tol, &mut h).map_err(|e| fail(kappa, "interior", e.t))?;
    Ok(g[0])
}

/// x u'/u at x0+ for the decaying exterior solution.
pub fn exterior_log_derivative(p: &PotentialParams, ell: u32, kappa: f64, tol: Tolerance) -> Result<f64> {
    let c = centrifugal(p.d, ell);
    let xe = p.x0 + EXTERIOR_REACH / kappa;
    let mut h = 0.0;
    let mut rhs = |t: f64, g: &[f64; 1]| {
        let kx = kappa * t.exp();
        [g[0] + c + kx * kx - g[0] * g[0]]
    };
    let g = ode::integrate(&mut rhs, xe.ln(), [-kappa * xe], p.x0.ln(), tol, &mut h).map_err(|e| fail(kappa, "exterior", e.t))?;
    Ok(g[0])
}

/// Log-derivative mismatch at x0 after the jump; zero exactly at bound states.
pub fn bound_defect(p: &PotentialParams, ell: u32, kappa: f64) -> Result<f64> {
    Ok(match jump(p) {
        Jump::Regular { alpha, beta } => {
            let gi = interior_log_derivative(p, ell, kappa, TIGHT_TOL)?;
            let ge = exterior_log_derivative(p, ell, kappa, TIGHT_TOL)?;
            ge - p.x0 * beta / alpha - gi / (alpha * alpha)
        }
        Jump::ExteriorRobin { g } => exterior_log_derivative(p, ell, kappa, TIGHT_TOL)? - g,
        Jump::InteriorRobin { g } => interior_log_derivative(p, ell, kappa, TIGHT_TOL)? - g,
    })
}

/// Scan points for kappa x0: coarse far below 1e-20, one per decade above.
fn scan_grid() -> Vec<f64> {
    let mut v: Vec<f64> = (-30..-2).map(|j| 10f64.powi(10 * j)).collect();
    v.extend((-20..=4).map(|j| 10f64.powi(j)));
    v
}

/// The bound-state kappa of channel l, found by scanning kappa for a sign
/// change of the defect and bisecting; none if the defect keeps its sign.
pub fn shoot_bound_state(p: &PotentialParams, ell: u32) -> Result<Option<f64>> {
    p.validate()?;
    let grid: Vec<f64> = scan_grid().into_iter().map(|y| y / p.x0).collect();
    let mut prev: Option<(f64, f64)> = None;
    let mut bracket = None;
    for &k in &grid {
        let dk = bound_defect(p, ell, k)?;
        if dk == 0.0 {
            return Ok(Some(k));
        }
        if let Some((kp, dp)) = prev {
            if dp.signum() != dk.signum() {
                bracket = Some((kp, dp, k));
                break;
            }
        }
        prev = Some((k, dk));
    }
    let Some((mut lo, mut dlo, mut hi)) = bracket else {
        return Ok(None);
    };
    for _ in 0..400 {
        let mid = if hi > 4.0 * lo { lo.sqrt() * hi.sqrt() } else { 0.5 * (lo + hi) };
        if mid <= lo || mid >= hi {
            break;
        }
        let dm = bound_defect(p, ell, mid)?;
        if dm == 0.0 {
            return Ok(Some(mid));
        }
        if dm.signum() == dlo.signum() {
            lo = mid;
            dlo = dm;
        } else {
            hi = mid;
        }
        if hi - lo <= WIDTH_TOL * hi || (dm.abs() < DEFECT_TOL && hi - lo <= 1e-10 * hi) {
            break;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Linear integration of (u, u', int u^2, int x u^2) between sample points.
fn sample_linear(
    c: f64,
    s: f64,
    grid: &[f64],
    start: [f64; 4],
    kappa: f64,
    what: &str,
) -> Result<(Vec<f64>, Vec<f64>, [f64; 4])> {
    let mut rhs = |x: f64, y: &[f64; 4]| [y[1], (c / (x * x) + s) * y[0], y[0] * y[0], x * y[0] * y[0]];
    let mut h = 0.0;
    let mut y = start;
    let (mut u, mut du) = (vec![y[0]], vec![y[1]]);
    for w in grid.windows(2) {
        y = ode::integrate(&mut rhs, w[0], y, w[1], TIGHT_TOL, &mut h).map_err(|e| Error::Integration {
            kappa_or_k: kappa,
            reason: format!("{what}: step size underflow at x = {:e}", e.t),
        })?;
        u.push(y[0]);
        du.push(y[1]);
    }
    Ok((u, du, y))
}

fn uniform(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut g: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
    g[n - 1] = b;
    g
}

/// The bound state at kappa, sampled on `samples` points per side and
/// normalised by R(x0-) = 1 (the interior half is absent on w1 = +1).
pub fn bound_state_profile(p: &PotentialParams, ell: u32, kappa: f64, samples: usize) -> Result<BoundProfile> {
    p.validate()?;
    let samples = samples.max(2);
    let c = centrifugal(p.d, ell);
    let pw = leading_power(p.d, ell);
    let k2 = kappa * kappa;
    let xs = p.x0 * INNER_START;
    let (us, dus) = series_start(pw, k2, xs);
    // int_0^xs of u^2 and x u^2 from the first two series terms
    let a1 = k2 / (2.0 * (2.0 * pw + 1.0));
    let m0 = xs.powf(2.0 * pw + 1.0) * (1.0 / (2.0 * pw + 1.0) + 2.0 * a1 * xs * xs / (2.0 * pw + 3.0));
    let m1 = xs.powf(2.0 * pw + 2.0) * (1.0 / (2.0 * pw + 2.0) + 2.0 * a1 * xs * xs / (2.0 * pw + 4.0));
    let igrid = uniform(xs, p.x0, samples);
    let (mut iu, mut idu, iend) = sample_linear(c, k2, &igrid, [us, dus, m0, m1], kappa, "interior")?;

    let xe = p.x0 + EXTERIOR_REACH / kappa;
    let mut egrid = uniform(p.x0, xe, samples);
    egrid.reverse();
    let (mut eu, mut edu, eend) = sample_linear(c, k2, &egrid, [1.0, -kappa, 0.0, 0.0], kappa, "exterior")?;
    egrid.reverse();
    eu.reverse();
    edu.reverse();
    // integrated downwards, so the accumulated moments carry a minus sign;
    // the e^{-2 kappa x} tail beyond xe adds u(xe)^2 / (2 kappa)
    let tail = 1.0 / (2.0 * kappa);
    let (mut e0, mut e1) = (-eend[2] + tail, -eend[3] + tail * xe);

    let target = p.x0.powf((p.d as f64 - 1.0) / 2.0);
    let ui = iend[0];
    let (si, uo) = match jump(p) {
        Jump::Regular { alpha, .. } => (target / ui, alpha * target),
        // the interior vanishes; the exterior is normalised by R(x0+) = 1
        Jump::ExteriorRobin { .. } => (0.0, target),
        Jump::InteriorRobin { .. } => (target / ui, 0.0),
    };
    for v in iu.iter_mut().chain(idu.iter_mut()) {
        *v *= si;
    }
    let se = uo / eu[0];
    for v in eu.iter_mut().chain(edu.iter_mut()) {
        *v *= se;
    }
    e0 *= se * se;
    e1 *= se * se;
    let norm = si * si * iend[2] + e0;
    let first_moment = si * si * iend[3] + e1;
    Ok(BoundProfile {
        at_x0: [iu[samples - 1], idu[samples - 1], eu[0], edu[0]],
        interior: RadialSolution {
            grid: igrid,
            u: iu,
            u_prime: idu,
            kappa_or_k: kappa,
            side: Side::Interior,
        },
        exterior: RadialSolution {
            grid: egrid,
            u: eu,
            u_prime: edu,
            kappa_or_k: kappa,
            side: Side::Exterior,
        },
        norm,
        first_moment,
    })
}
