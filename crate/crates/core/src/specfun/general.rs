//! Bessel functions of arbitrary non-negative real order.
//!
//! Both routines follow the same plan. A continued fraction (CF1) gives the
//! logarithmic derivative at the requested order `nu`; an unnormalised
//! recurrence carries it down to a base order `mu`; at `mu` the pair of
//! second-kind functions comes from Temme's series (x < 2) or Steed's
//! complex continued fraction CF2 (x >= 2); the Wronskian then fixes the
//! normalisation of the first-kind function, and the second-kind functions
//! are recurred upward again. Every recurrence renormalises at each step and
//! keeps the exponent in a [`Scaled`], so nothing overflows for any x > 0.

use std::f64::consts::PI;

use super::gamma::TemmeGammas;
use super::scaled::Scaled;
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;
const FPMIN: f64 = 1e-300;
const XMIN: f64 = 2.0;

fn max_iterations(x: f64) -> usize {
    20_000 + (4.0 * x) as usize
}

/// Values and first derivatives of an ordinary or modified Bessel pair.
#[derive(Debug, Clone, Copy)]
pub struct BesselPair {
    pub first: Scaled,
    pub first_prime: Scaled,
    pub second: Scaled,
    pub second_prime: Scaled,
}

/// Base order for the Temme/Steed stage: `mu` in (-1/2, 1/2], so half-integer
/// orders use mu = +1/2 where Temme's sums do not cancel.
fn split_order(nu: f64) -> (usize, f64) {
    let nl = (nu - 0.5).ceil().max(0.0) as usize;
    (nl, nu - nl as f64)
}

/// Rescales a recurrence pair by a power of two whenever `factor` times it
/// could overflow; returns the log of the factor removed.
#[inline]
fn guard_product(factor: f64, a: &mut f64, b: &mut f64) -> f64 {
    let m = a.abs().max(b.abs());
    if m == 0.0 || !m.is_finite() || factor.abs().max(1.0) * m < 1e200 {
        return 0.0;
    }
    let k = m.log2().floor() as i32;
    let s = 2f64.powi(-k);
    *a *= s;
    *b *= s;
    k as f64 * std::f64::consts::LN_2
}

/// Below this argument, or when nu > x / 2, J and Y come from CF1 + Temme/CF2.
const X_HANKEL: f64 = 25.0;

/// J_nu, J'_nu, Y_nu, Y'_nu for nu >= 0, x > 0.
pub fn bessel_jy(nu: f64, x: f64) -> Result<BesselPair> {
    if !(x > 0.0) || !x.is_finite() || !(nu >= 0.0) {
        return Err(Error::Domain(format!("bessel_jy requires nu >= 0, x > 0 (nu={nu}, x={x})")));
    }
    if x >= X_HANKEL && 2.0 * nu <= x {
        return Ok(hankel_jy(nu, x));
    }
    bessel_jy_cf(nu, x)
}

fn bessel_jy_cf(nu: f64, x: f64) -> Result<BesselPair> {
    let (nl, mu) = if x < XMIN {
        split_order(nu)
    } else {
        let nl = ((nu - x + 1.5).floor()).max(0.0) as usize;
        (nl, nu - nl as f64)
    };
    let mu2 = mu * mu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1: J'_nu / J_nu, tracking the sign of J_nu relative to J_{nu+1} chain.
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..max_iterations(x) {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence(format!("CF1 for J_{nu}({x})")));
    }

    let mut rjl = isign;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let rjp1 = rjpl;
    let mut log_down = 0.0;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let mut t = fact * rjl + rjpl;
        fact -= xi;
        log_down += guard_product(fact, &mut t, &mut rjl);
        rjpl = fact * t - rjl;
        rjl = t;
        log_down += guard_product(nu * xi, &mut rjl, &mut rjpl);
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let (rjmu, rymu, ry1);
    if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let g = TemmeGammas::new(mu);
        let mut ff = 2.0 / PI * fact * (g.gam1 * e.cosh() + g.gam2 * fact2 * d);
        let e = e.exp();
        let mut p = e / (g.gampl * PI);
        let mut q = 1.0 / (e * PI * g.gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS { 1.0 } else { pimu2.sin() / pimu2 };
        let r = PI * pimu2 * fact3 * fact3;
        let mut c = 1.0;
        let dd = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        let mut converged = false;
        for i in 1..max_iterations(x) {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            c *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = c * (ff + r * q);
            sum += del;
            let del1 = c * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence(format!("Temme series for Y_{mu}({x})")));
        }
        let ymu = -sum;
        let y1 = -sum1 * xi2;
        let ymup = mu * xi * ymu - y1;
        rjmu = w / (ymup - f * ymu);
        rymu = ymu;
        ry1 = y1;
    } else {
        let mut a = 0.25 - mu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fact = a * xi / (p * p + q * q);
        let mut cr = br + q * fact;
        let mut ci = bi + p * fact;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        let mut converged = false;
        for i in 2..max_iterations(x) {
            a += 2.0 * (i - 1) as f64;
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fact = a / (cr * cr + ci * ci);
            cr = br + cr * fact;
            ci = bi - ci * fact;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence(format!("CF2 for J/Y_{mu}({x})")));
        }
        let gam = (p - f) / q;
        let jmu = (w / ((p - f) * gam + q)).sqrt().copysign(rjl);
        let ymu = jmu * gam;
        let ymup = ymu * (p + q / gam);
        rjmu = jmu;
        rymu = ymu;
        ry1 = mu * xi * ymu - ymup;
    }

    // J_nu = rjl1 * (J_mu / unnormalised J_mu)
    let scale = rjmu / rjl;
    let j = Scaled::new(rjl1 * scale, -log_down).normalized();
    let jp = Scaled::new(rjp1 * scale, -log_down).normalized();

    let mut ym = rymu;
    let mut y1 = ry1;
    let mut log_up = guard_product(nu * xi2, &mut ym, &mut y1);
    for i in 1..=nl {
        let t = (mu + i as f64) * xi2 * y1 - ym;
        ym = y1;
        y1 = t;
        log_up += guard_product(nu * xi2, &mut ym, &mut y1);
    }
    let y = Scaled::new(ym, log_up).normalized();
    let yp = Scaled::new(nu * xi * ym - y1, log_up).normalized();
    Ok(BesselPair {
        first: j,
        first_prime: jp,
        second: y,
        second_prime: yp,
    })
}

/// Hankel's asymptotic expansion at orders mu, mu + 1 (|mu| <= 1/2), then
/// upward recurrence, which is stable for both kinds while nu < x.
///
/// CF1 needs about x iterations and its rounding shows up directly in the
/// phase, so at large x this path is markedly more accurate.
fn hankel_jy(nu: f64, x: f64) -> BesselPair {
    let (nl, mu) = split_order(nu);
    let (j0, y0) = hankel_pair(mu, x);
    let (j1, y1) = hankel_pair(mu + 1.0, x);
    let (mut ja, mut jb, mut ya, mut yb) = (j0, j1, y0, y1);
    for i in 0..nl {
        let f = 2.0 * (mu + 1.0 + i as f64) / x;
        let jn = f * jb - ja;
        let yn = f * yb - ya;
        ja = jb;
        jb = jn;
        ya = yb;
        yb = yn;
    }
    // ja = C_nu, jb = C_{nu+1}; C'_nu = (nu/x) C_nu - C_{nu+1}
    BesselPair {
        first: Scaled::from_f64(ja),
        first_prime: Scaled::from_f64(nu / x * ja - jb),
        second: Scaled::from_f64(ya),
        second_prime: Scaled::from_f64(nu / x * ya - yb),
    }
}

/// (J_mu(x), Y_mu(x)) from the P, Q asymptotic series; needs x >= 25, mu <= 3/2.
fn hankel_pair(mu: f64, x: f64) -> (f64, f64) {
    let m4 = 4.0 * mu * mu;
    let (mut p, mut q) = (0.0f64, 0.0f64);
    let mut term = 1.0f64; // a_k(mu) / x^k
    let mut prev = f64::INFINITY;
    for k in 0..200 {
        if term.abs() > prev {
            break;
        }
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        prev = term.abs();
        if prev < EPS * 1e-3 * p.abs().max(1.0) {
            break;
        }
        let odd = (2 * k + 1) as f64;
        term *= (m4 - odd * odd) / ((k + 1) as f64 * 8.0 * x);
    }
    // chi = x - (mu/2 + 1/4) pi, expanded so the large x enters sin/cos exactly
    let (sx, cx) = x.sin_cos();
    let (sc, cc) = ((0.5 * mu + 0.25) * PI).sin_cos();
    let (s, c) = (sx * cc - cx * sc, cx * cc + sx * sc);
    let a = (2.0 / (PI * x)).sqrt();
    (a * (p * c - q * s), a * (p * s + q * c))
}

/// I_{nu+1}(x) / I_nu(x) by its continued fraction, nu >= 0.
///
/// Unlike I'_nu/I_nu - nu/x this keeps full relative accuracy as x -> 0.
pub fn i_ratio_up(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() || !(nu >= 0.0) {
        return Err(Error::Domain(format!("i_ratio_up requires nu >= 0, x > 0 (nu={nu}, x={x})")));
    }
    let xi2 = 2.0 / x;
    // modified Lentz for g = b1 + 1/(b2 + 1/(b3 + ...)), b_k = 2(nu+k)/x; ratio = 1/g
    let mut g = xi2 * (nu + 1.0);
    let mut c = g;
    let mut d = 0.0;
    for k in 2..max_iterations(x) {
        let b = xi2 * (nu + k as f64);
        d += b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        g *= del;
        if (del - 1.0).abs() < EPS {
            return Ok(1.0 / g);
        }
    }
    Err(Error::Convergence(format!("ratio I_{}/I_{nu} at x = {x}", nu + 1.0)))
}

/// I_nu, I'_nu, K_nu, K'_nu for nu >= 0, x > 0.
pub fn bessel_ik(nu: f64, x: f64) -> Result<BesselPair> {
    if !(x > 0.0) || !x.is_finite() || !(nu >= 0.0) {
        return Err(Error::Domain(format!("bessel_ik requires nu >= 0, x > 0 (nu={nu}, x={x})")));
    }
    let (nl, mu) = split_order(nu);
    let mu2 = mu * mu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;

    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..max_iterations(x) {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence(format!("CF1 for I_{nu}({x})")));
    }

    let mut ril = 1.0;
    let mut ripl = h;
    let ril1 = ril;
    let rip1 = ripl;
    let mut log_down = 0.0;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let mut t = fact * ril + ripl;
        fact -= xi;
        log_down += guard_product(fact, &mut t, &mut ril);
        ripl = fact * t + ril;
        ril = t;
        log_down += guard_product(nu * xi, &mut ril, &mut ripl);
    }
    let f = ripl / ril;

    // K_mu and K_{mu+1}, both carrying the common factor exp(k_log).
    let (rkmu, rk1, k_log);
    if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let g = TemmeGammas::new(mu);
        let mut ff = fact * (g.gam1 * e.cosh() + g.gam2 * fact2 * d);
        let mut sum = ff;
        let e = e.exp();
        let mut p = 0.5 * e / g.gampl;
        let mut q = 0.5 / (e * g.gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        let mut converged = false;
        for i in 1..max_iterations(x) {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            c *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = c * ff;
            sum += del;
            let del1 = c * (p - fi * ff);
            sum1 += del1;
            if del.abs() < sum.abs() * EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence(format!("Temme series for K_{mu}({x})")));
        }
        rkmu = sum;
        rk1 = sum1 * xi2;
        k_log = 0.0;
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delh = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - mu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut converged = false;
        for i in 2..max_iterations(x) {
            a -= 2.0 * (i - 1) as f64;
            c = -a * c / i as f64;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh *= b * d - 1.0;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence(format!("CF2 for K_{mu}({x})")));
        }
        h *= a1;
        // exp(-x) is carried in k_log
        let kmu = (PI / (2.0 * x)).sqrt() / s;
        rkmu = kmu;
        rk1 = kmu * (mu + x + 0.5 - h) * xi;
        k_log = -x;
    }
    let rkmup = mu * xi * rkmu - rk1;
    // Wronskian: I_mu K'_mu - I'_mu K_mu = -1/x, with I'_mu = f I_mu.
    let rimu = xi / (f * rkmu - rkmup);
    let i_log = -k_log - log_down;
    let i = Scaled::new(rimu * ril1 / ril, i_log).normalized();
    let ip = Scaled::new(rimu * rip1 / ril, i_log).normalized();

    let mut km = rkmu;
    let mut k1 = rk1;
    let mut log_up = k_log + guard_product(nu * xi2, &mut km, &mut k1);
    for n in 1..=nl {
        let t = (mu + n as f64) * xi2 * k1 + km;
        km = k1;
        k1 = t;
        log_up += guard_product(nu * xi2, &mut km, &mut k1);
    }
    let k = Scaled::new(km, log_up).normalized();
    let kp = Scaled::new(nu * xi * km - k1, log_up).normalized();
    Ok(BesselPair {
        first: i,
        first_prime: ip,
        second: k,
        second_prime: kp,
    })
}
