//! Half-integer orders through elementary closed forms.
//!
//! An evaluation path independent of the general routines: K from its
//! terminating sum, Y by upward recurrence from sin/cos, J upward where the
//! recurrence is stable and by Miller's downward method otherwise, and I by
//! Miller's method normalised with cosh. Only orders m + 1/2 with m >= -1.

use std::f64::consts::PI;

use super::{BesselKind, Order, Scaled};
use crate::error::{Error, Result};

/// ln sqrt(2 / (pi x))
fn ln_prefactor(x: f64) -> f64 {
    0.5 * (2.0 / (PI * x)).ln()
}

/// C_{m+1/2}(x) for C in {J, Y, I, K}, m >= -1.
pub fn half_integer(kind: BesselKind, nu: Order, x: f64) -> Result<Scaled> {
    if !nu.is_half_integer() {
        return Err(Error::Domain(format!("order {} is not a half-integer", nu.value())));
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("argument must be positive, got {x}")));
    }
    let m = (nu.twice() - 1) / 2;
    Ok(match kind {
        BesselKind::K => k_half(m, x),
        BesselKind::Y => y_half(m, x),
        BesselKind::J => j_half(m, x),
        BesselKind::I => i_half(m, x),
    })
}

/// K_{m+1/2}(x) = sqrt(pi/(2x)) e^{-x} sum_k (m+k)!/(k!(m-k)!) (2x)^{-k}
fn k_half(m: i32, x: f64) -> Scaled {
    let m = if m < 0 { -m - 1 } else { m };
    let mut ln_terms = Vec::with_capacity(m as usize + 1);
    let mut ln_t = 0.0;
    ln_terms.push(ln_t);
    for k in 0..m {
        let kf = k as f64;
        ln_t += ((m as f64 + kf + 1.0) * (m as f64 - kf) / ((kf + 1.0) * 2.0 * x)).ln();
        ln_terms.push(ln_t);
    }
    let top = ln_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = ln_terms.iter().map(|l| (l - top).exp()).sum();
    Scaled::new(sum, top - x + 0.5 * (PI / (2.0 * x)).ln()).normalized()
}

/// Runs C_{n+1} = (2n/x) C_n - C_{n-1} upward from orders -1/2 and 1/2.
fn upward(m: i32, x: f64, c_minus: f64, c_plus: f64) -> Scaled {
    if m == -1 {
        return Scaled::new(c_minus, ln_prefactor(x)).normalized();
    }
    let (mut a, mut b) = (c_minus, c_plus);
    let mut log = ln_prefactor(x);
    for k in 0..m {
        let n = k as f64 + 0.5;
        let c = 2.0 * n / x * b - a;
        a = b;
        b = c;
        let s = a.abs().max(b.abs());
        if s > 1e100 || (s < 1e-100 && s > 0.0) {
            a /= s;
            b /= s;
            log += s.ln();
        }
    }
    Scaled::new(b, log).normalized()
}

fn y_half(m: i32, x: f64) -> Scaled {
    // Y_{-1/2} = s sin x, Y_{1/2} = -s cos x
    upward(m, x, x.sin(), -x.cos())
}

/// Downward Miller recurrence for C_{n-1} = (2n/x) C_n + sign * C_{n+1}.
///
/// Returns the unnormalised values at the target order m + 1/2 and at orders
/// -1/2, 1/2, all relative to one common scale.
fn miller(m: i32, x: f64, start: i32, sign: f64) -> (Scaled, f64, f64) {
    let mut hi = 0.0; // order n + 1
    let mut cur = 1e-30; // order n
    let mut log = 0.0;
    let mut target = Scaled::new(0.0, 0.0);
    let mut n = start;
    // cur holds order n + 1/2
    loop {
        if n == m {
            target = Scaled::new(cur, log);
        }
        if n == 0 {
            break;
        }
        let order = n as f64 + 0.5;
        let lo = 2.0 * order / x * cur + sign * hi;
        hi = cur;
        cur = lo;
        n -= 1;
        let s = cur.abs().max(hi.abs());
        if s > 1e100 {
            cur /= s;
            hi /= s;
            log += s.ln();
        }
    }
    // cur = order 1/2, hi = order 3/2; one more step gives order -1/2
    let c_half = cur;
    let c_mhalf = 2.0 * 0.5 / x * cur + sign * hi;
    if m == -1 {
        target = Scaled::new(c_mhalf, log);
    }
    let rel = |t: Scaled| Scaled::new(t.mantissa, t.log_scale - log);
    (rel(target), c_mhalf, c_half)
}

fn miller_start(m: i32, x: f64) -> i32 {
    let top = m.max(0) as f64 + x;
    (top + 30.0 + 4.0 * top.sqrt() + (80.0 * x).sqrt()).ceil() as i32
}

fn j_half(m: i32, x: f64) -> Scaled {
    let (s, c) = x.sin_cos();
    if (m as f64) <= x {
        // J_{-1/2} = s cos x, J_{1/2} = s sin x
        return upward(m, x, c, s);
    }
    let (t, jm, jp) = miller(m, x, miller_start(m, x), -1.0);
    // normalise against whichever of sin, cos is larger
    let (unnorm, exact) = if s.abs() > c.abs() { (jp, s) } else { (jm, c) };
    Scaled::new(t.mantissa * exact / unnorm, t.log_scale + ln_prefactor(x)).normalized()
}

fn i_half(m: i32, x: f64) -> Scaled {
    let (t, im, _) = miller(m, x, miller_start(m, x), 1.0);
    // I_{-1/2} = sqrt(2/(pi x)) cosh x, kept in log form for large x
    let ln_cosh = x + (-2.0 * x).exp().ln_1p() - 2f64.ln();
    Scaled::new(t.mantissa / im, t.log_scale + ln_cosh + ln_prefactor(x)).normalized()
}
