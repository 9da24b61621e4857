//! Dormand-Prince 5(4) with step-size control.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

pub const DEFAULT_TOL: Tolerance = Tolerance { rel: 1e-10, abs: 1e-12 };
pub const TIGHT_TOL: Tolerance = Tolerance { rel: 1e-13, abs: 1e-15 };

/// The step size collapsed below round-off at `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepUnderflow {
    pub t: f64,
}

const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
/// Fifth-order weights; also the last stage row (first same as last).
const B: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
/// Fifth minus fourth order weights, stages 1..7.
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

const MAX_STEPS: usize = 5_000_000;

fn combo<const N: usize>(y: &[f64; N], h: f64, ks: &[[f64; N]], w: &[f64]) -> [f64; N] {
    let mut out = *y;
    for (k, &c) in ks.iter().zip(w) {
        if c != 0.0 {
            for i in 0..N {
                out[i] += h * c * k[i];
            }
        }
    }
    out
}

/// Integrates y' = f(t, y) from t0 to t1 (either direction). `h` carries the
/// step size between calls; pass 0 to let the first step be guessed.
pub fn integrate<const N: usize, F>(f: &mut F, t0: f64, y0: [f64; N], t1: f64, tol: Tolerance, h: &mut f64) -> Result<[f64; N], StepUnderflow>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut step = if *h != 0.0 && h.signum() == dir { *h } else { 1e-3 * span };
    let (mut t, mut y) = (t0, y0);
    let mut k1 = f(t, &y);
    for _ in 0..MAX_STEPS {
        if (t1 - t) * dir <= 0.0 {
            break;
        }
        let last = (step - (t1 - t)) * dir >= 0.0;
        let hs = if last { t1 - t } else { step };
        let k2 = f(t + C[0] * hs, &combo(&y, hs, &[k1], &A2));
        let k3 = f(t + C[1] * hs, &combo(&y, hs, &[k1, k2], &A3));
        let k4 = f(t + C[2] * hs, &combo(&y, hs, &[k1, k2, k3], &A4));
        let k5 = f(t + C[3] * hs, &combo(&y, hs, &[k1, k2, k3, k4], &A5));
        let k6 = f(t + C[4] * hs, &combo(&y, hs, &[k1, k2, k3, k4, k5], &A6));
        let yn = combo(&y, hs, &[k1, k2, k3, k4, k5, k6], &B);
        let k7 = f(t + hs, &yn);
        let ks = [k1, k2, k3, k4, k5, k6, k7];
        let mut err: f64 = 0.0;
        for i in 0..N {
            let e: f64 = ks.iter().zip(&E).map(|(k, &c)| c * k[i]).sum::<f64>() * hs;
            let sc = tol.abs + tol.rel * y[i].abs().max(yn[i].abs());
            err = err.max((e / sc).abs());
        }
        if !err.is_finite() {
            err = 1e10;
        }
        if err <= 1.0 {
            t = if last { t1 } else { t + hs };
            y = yn;
            k1 = k7;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        let proposed = hs * factor;
        // keep the unclipped step when the last step was shortened to hit t1
        step = if last && err <= 1.0 { step.abs().max(proposed.abs()) * dir } else { proposed };
        if step.abs() <= 16.0 * f64::EPSILON * t.abs().max(f64::MIN_POSITIVE) {
            return Err(StepUnderflow { t });
        }
    }
    if (t1 - t) * dir > 0.0 {
        return Err(StepUnderflow { t });
    }
    *h = step;
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_are_consistent() {
        let rows: [&[f64]; 5] = [&A2, &A3, &A4, &A5, &A6];
        for (row, c) in rows.iter().zip(&C) {
            assert!((row.iter().sum::<f64>() - c).abs() < 1e-14);
        }
        assert!((B.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(E.iter().sum::<f64>().abs() < 1e-15);
    }

    #[test]
    fn exponential_and_oscillator() {
        let mut h = 0.0;
        let y = integrate(&mut |_, y: &[f64; 1]| [y[0]], 0.0, [1.0], 3.0, DEFAULT_TOL, &mut h).unwrap();
        assert!((y[0] - 3.0f64.exp()).abs() < 1e-9 * y[0]);
        let mut h = 0.0;
        let y = integrate(&mut |_, y: &[f64; 2]| [y[1], -y[0]], 0.0, [0.0, 1.0], 50.0, DEFAULT_TOL, &mut h).unwrap();
        assert!((y[0] - 50.0f64.sin()).abs() < 1e-8);
        // backwards
        let mut h = 0.0;
        let y = integrate(&mut |_, y: &[f64; 1]| [-2.0 * y[0]], 1.0, [1.0], -1.0, DEFAULT_TOL, &mut h).unwrap();
        assert!((y[0] - 4.0f64.exp()).abs() < 1e-9 * y[0]);
    }

    #[test]
    fn blow_up_reports_underflow() {
        let mut h = 0.0;
        let r = integrate(&mut |_, y: &[f64; 1]| [y[0] * y[0]], 0.0, [1.0], 2.0, DEFAULT_TOL, &mut h);
        let t = r.unwrap_err().t;
        assert!(t > 0.99 && t <= 1.0);
    }
}
