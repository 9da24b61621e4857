//! Scattering phase shifts and S-matrix eigenvalues.
//!
//! Inside x0 the radial function is proportional to the regular solution
//! z^{-nu} J_{l+nu}(z), z = kx; matching at x0 fixes the exterior combination
//! A J + B Y and tan(delta) = -B/A. All J, Y products are formed with
//! [`Scaled`] numbers and the common factor z^{-2nu} is dropped.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::model::{self, Branch, PotentialParams};
use crate::specfun::{self, Order, Scaled};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseShift {
    pub ell: u32,
    pub k: f64,
    /// Principal value in (-pi/2, pi/2].
    pub delta: f64,
    pub s_eigenvalue: Complex64,
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Maps an angle to (-pi/2, pi/2].
fn principal(delta: f64) -> f64 {
    if delta > FRAC_PI_2 {
        delta - PI
    } else if delta <= -FRAC_PI_2 {
        delta + PI
    } else {
        delta
    }
}

/// delta from tan(delta) = num / den given as scaled numbers.
fn delta_from(num: Scaled, den: Scaled) -> Result<f64> {
    if num.mantissa == 0.0 && den.mantissa == 0.0 {
        return Err(Error::Evaluation("numerator and denominator of tan(delta) both vanish".into()));
    }
    let top = num.ln_abs().max(den.ln_abs());
    let a = num.mantissa * (num.log_scale - top).exp();
    let b = den.mantissa * (den.log_scale - top).exp();
    Ok(principal(a.atan2(b)))
}

/// J_n, Y_n and the reduced derivatives J'_n - nu J_n / z (likewise Y) at z.
struct Cylinder {
    j: Scaled,
    y: Scaled,
    jd: Scaled,
    yd: Scaled,
}

fn cylinder(d: u32, ell: u32, z: f64) -> Result<Cylinder> {
    let n = Order::channel(d, ell);
    let nu = (d as f64 - 2.0) / 2.0;
    let p = specfun::ordinary(n, z)?;
    Ok(Cylinder {
        j: p.first,
        y: p.second,
        jd: p.first_prime.add(p.first.scale(-nu / z)),
        yd: p.second_prime.add(p.second.scale(-nu / z)),
    })
}

/// e^{2 i delta}, unit modulus and continuous through delta = pi/2.
pub fn s_matrix_eigenvalue(delta: f64) -> Complex64 {
    Complex64::new((2.0 * delta).cos(), (2.0 * delta).sin())
}

/// Phase shift of channel l at momentum k.
///
/// On w1 = -1 this is the hard-hypersphere value, on w1 = +1 the exterior
/// Robin value; both are the limits of the regular formula.
pub fn phase_shift(p: &PotentialParams, ell: u32, k: f64) -> Result<PhaseShift> {
    p.validate()?;
    check_positive("k", k)?;
    let c = model::couplings(p);
    let delta = match c.branch {
        Branch::RobinDirichletMinus => phase_shift_hard_hypersphere(p.d, ell, k, p.x0)?,
        Branch::RobinDirichletPlus => phase_shift_robin(p.d, ell, p.w0, k, p.x0)?,
        Branch::Regular => {
            let z = k * p.x0;
            let f = cylinder(p.d, ell, z)?;
            let (a, ab) = (c.alpha, c.alpha * c.beta_tilde * p.x0);
            // num = -j ((1 - a^2) z jd + a bt x0 j)
            let num = f.j.mul(f.jd.scale((1.0 - a * a) * z).add(f.j.scale(ab))).neg();
            // den = -z jd y + j (a^2 z yd - a bt x0 y)
            let den = f.jd.mul(f.y).scale(-z).add(f.j.mul(f.yd.scale(a * a * z).add(f.y.scale(-ab))));
            delta_from(num, den)?
        }
    };
    Ok(PhaseShift {
        ell,
        k,
        delta,
        s_eigenvalue: s_matrix_eigenvalue(delta),
    })
}

/// tan(delta) = J_{l+nu}(k x0) / Y_{l+nu}(k x0): Dirichlet condition at x0+.
pub fn phase_shift_hard_hypersphere(d: u32, ell: u32, k: f64, x0: f64) -> Result<f64> {
    check_positive("k", k)?;
    check_positive("x0", x0)?;
    let f = cylinder(d, ell, k * x0)?;
    delta_from(f.j, f.y)
}

/// w1 = +1: Robin condition R'/R = w0_tilde/4 on the exterior solution.
pub fn phase_shift_robin(d: u32, ell: u32, w0: f64, k: f64, x0: f64) -> Result<f64> {
    check_positive("k", k)?;
    check_positive("x0", x0)?;
    let rho = (w0 + 2.0 * (1.0 - d as f64) / x0) / 4.0;
    let z = k * x0;
    let f = cylinder(d, ell, z)?;
    // tan(delta) = (z jd - rho x0 j) / (z yd - rho x0 y)
    let num = f.jd.scale(z).add(f.j.scale(-rho * x0));
    let den = f.yd.scale(z).add(f.y.scale(-rho * x0));
    delta_from(num, den)
}

/// Closed form for w0 = 0 in terms of z0 = k x0 and w1 only.
pub fn phase_shift_pure_delta_prime(d: u32, ell: u32, w1: f64, k: f64, x0: f64) -> Result<f64> {
    check_positive("k", k)?;
    check_positive("x0", x0)?;
    if w1 == 1.0 || w1 == -1.0 || !w1.is_finite() {
        return Err(Error::Branch { w1 });
    }
    let a2 = ((1.0 + w1) / (1.0 - w1)).powi(2);
    let z = k * x0;
    let dm1 = d as f64 - 1.0;
    let f = cylinder(d, ell, z)?;
    // -(1 - a^2) j ((d-1) j + 2 z jd)
    let num = f.j.mul(f.j.scale(dm1).add(f.jd.scale(2.0 * z))).scale(-(1.0 - a2));
    // (a^2 - 1)(d-1) j y + 2 z (a^2 yd j - jd y)
    let den = f
        .j
        .mul(f.y)
        .scale((a2 - 1.0) * dm1)
        .add(f.yd.mul(f.j).scale(2.0 * z * a2))
        .add(f.jd.mul(f.y).scale(-2.0 * z));
    delta_from(num, den)
}

/// Closed form for w1 = 0.
pub fn phase_shift_delta_only(d: u32, ell: u32, w0: f64, k: f64, x0: f64) -> Result<f64> {
    check_positive("k", k)?;
    check_positive("x0", x0)?;
    let f = cylinder(d, ell, k * x0)?;
    let g = PI * w0 * x0;
    let num = f.j.mul(f.j).scale(g);
    let den = f.j.mul(f.y).scale(g).add(Scaled::from_f64(-2.0));
    delta_from(num, den)
}

/// Adds multiples of pi so consecutive values on a monotone k grid never jump by more than pi/2.
pub fn unwrap_phases(deltas: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(deltas.len());
    let mut shift = 0.0;
    for (i, &d) in deltas.iter().enumerate() {
        if i > 0 {
            let prev = out[i - 1];
            let mut v = d + shift;
            while v - prev > FRAC_PI_2 {
                shift -= PI;
                v -= PI;
            }
            while prev - v > FRAC_PI_2 {
                shift += PI;
                v += PI;
            }
        }
        out.push(d + shift);
    }
    out
}

/// The S-matrix denominator continued to k = i kappa, up to a positive factor:
/// D = kappa (I_n' K_n / alpha - alpha I_n K_n') + beta_tilde I_n K_n in reduced
/// derivatives. It vanishes exactly at bound-state momenta.
///
/// Built from Bessel values at orders n and n + 1, not from logarithmic derivatives.
pub fn continued_denominator(p: &PotentialParams, ell: u32, kappa: f64) -> Result<f64> {
    p.validate()?;
    check_positive("kappa", kappa)?;
    let c = model::couplings(p);
    if c.branch != Branch::Regular {
        return Err(Error::Branch { w1: p.w1 });
    }
    let z = kappa * p.x0;
    let n = Order::channel(p.d, ell);
    let lo = specfun::modified(n, z)?;
    let hi = specfun::modified(n.shifted(1)?, z)?;
    let l = ell as f64;
    // reduced derivatives: I' - nu I/z = (l/z) I_n + I_{n+1}, K' - nu K/z = (l/z) K_n - K_{n+1}
    let id = lo.first.scale(l / z).add(hi.first);
    let kd = lo.second.scale(l / z).add(hi.second.neg());
    let ik = lo.first.mul(lo.second);
    let total = id
        .mul(lo.second)
        .scale(kappa / c.alpha)
        .add(lo.first.mul(kd).scale(-c.alpha * kappa))
        .add(ik.scale(c.beta_tilde));
    // divide by I_n K_n > 0 to keep the result in range
    Ok(total.ratio(ik))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::BesselKind;

    fn pp(d: u32, w0: f64, w1: f64, x0: f64) -> PotentialParams {
        PotentialParams::new(d, w0, w1, x0).unwrap()
    }

    #[test]
    fn free_theory_has_no_shift() {
        for d in 2..6 {
            for ell in 0..4 {
                for &k in &[1e-3, 0.5, 7.0, 60.0] {
                    let s = phase_shift(&pp(d, 0.0, 0.0, 1.3), ell, k).unwrap();
                    assert_eq!(s.delta, 0.0);
                    assert_eq!(s.s_eigenvalue, Complex64::new(1.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn s_matrix_examples() {
        assert_eq!(s_matrix_eigenvalue(0.0), Complex64::new(1.0, 0.0));
        let m = s_matrix_eigenvalue(FRAC_PI_2);
        assert!((m - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let m = s_matrix_eigenvalue(PI / 4.0);
        assert!((m - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        for &t in &[-3.0, -0.2, 0.0, 0.7, 40.0] {
            let d: f64 = f64::atan(t);
            let want = Complex64::new(1.0 - t * t, 2.0 * t) / (1.0 + t * t);
            assert!((s_matrix_eigenvalue(d) - want).norm() < 1e-14);
        }
    }

    #[test]
    fn hard_sphere_three_dimensions() {
        for &(k, x0) in &[(0.3, 1.0), (2.0, 1.7), (10.0, 0.9), (45.0, 1.1)] {
            let d = phase_shift_hard_hypersphere(3, 0, k, x0).unwrap();
            let diff = (d + k * x0) / PI;
            assert!((diff - diff.round()).abs() * PI < 1e-12, "k={k}: {d}");
        }
        // scattering length x0 at k -> 0
        let k = 1e-6;
        assert!((phase_shift_hard_hypersphere(3, 0, k, 2.0).unwrap() / k + 2.0).abs() < 1e-9);
    }

    #[test]
    fn hard_circle_two_dimensions() {
        let z: f64 = 1.3;
        let j = specfun::bessel(BesselKind::J, Order::new(0.0).unwrap(), z).unwrap();
        let y = specfun::bessel(BesselKind::Y, Order::new(0.0).unwrap(), z).unwrap();
        let d = phase_shift_hard_hypersphere(2, 0, 1.3, 1.0).unwrap();
        assert!((d.tan() - j / y).abs() < 1e-14);
    }

    #[test]
    fn special_cases_match_general_formula() {
        for d in 2..6 {
            for ell in 0..4 {
                for &(w, x0, k) in &[(0.7, 1.0, 0.4), (-2.5, 0.3, 3.0), (4.0, 2.0, 11.0)] {
                    let g = phase_shift(&pp(d, w, 0.0, x0), ell, k).unwrap().delta;
                    let c = phase_shift_delta_only(d, ell, w, k, x0).unwrap();
                    assert!((g - c).abs() < 1e-12, "delta-only d={d} l={ell}: {g} vs {c}");
                    let w1 = w / 5.0;
                    let g = phase_shift(&pp(d, 0.0, w1, x0), ell, k).unwrap().delta;
                    let c = phase_shift_pure_delta_prime(d, ell, w1, k, x0).unwrap();
                    assert!((g - c).abs() < 1e-12, "pure delta' d={d} l={ell}: {g} vs {c}");
                }
            }
        }
        let g = phase_shift(&pp(2, 0.0, 0.5, 1.0), 1, 1.0).unwrap().delta;
        assert!((g - phase_shift_pure_delta_prime(2, 1, 0.5, 1.0, 1.0).unwrap()).abs() < 1e-12);
        assert_eq!(phase_shift_pure_delta_prime(3, 1, 0.0, 2.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn branch_limits_converge() {
        for &(d, ell, k) in &[(3u32, 0u32, 1.2), (2, 1, 0.6), (4, 2, 3.5)] {
            let hard = phase_shift(&pp(d, 1.3, -1.0, 1.0), ell, k).unwrap().delta;
            assert_eq!(hard, phase_shift_hard_hypersphere(d, ell, k, 1.0).unwrap());
            let robin = phase_shift(&pp(d, 1.3, 1.0, 1.0), ell, k).unwrap().delta;
            let mut prev = (f64::INFINITY, f64::INFINITY);
            for &eps in &[1e-3, 1e-4, 1e-5, 1e-6] {
                let a = phase_shift(&pp(d, 1.3, -1.0 + eps, 1.0), ell, k).unwrap().delta;
                let b = phase_shift(&pp(d, 1.3, 1.0 - eps, 1.0), ell, k).unwrap().delta;
                let ea = (principal(a - hard)).abs();
                let eb = (principal(b - robin)).abs();
                assert!(ea < prev.0 && eb < prev.1, "eps={eps}: {ea:e} {eb:e}");
                assert!(ea < 50.0 * eps && eb < 50.0 * eps);
                prev = (ea, eb);
            }
        }
    }

    #[test]
    fn conformal_invariance_of_pure_delta_prime() {
        let base = phase_shift_pure_delta_prime(3, 2, 0.35, 1.7, 1.1).unwrap();
        for &l in &[1.0 / 3.0, 2.0, 10.0] {
            let v = phase_shift_pure_delta_prime(3, 2, 0.35, 1.7 / l, 1.1 * l).unwrap();
            assert!((v - base).abs() < 1e-12);
        }
    }

    #[test]
    fn unwrap_removes_jumps() {
        let raw = [1.4, 1.55, -1.5, -1.3, 1.5, -1.6 + PI];
        let u = unwrap_phases(&raw);
        for w in u.windows(2) {
            assert!((w[1] - w[0]).abs() < FRAC_PI_2);
        }
        for (a, b) in raw.iter().zip(&u) {
            let m = (b - a) / PI;
            assert!((m - m.round()).abs() < 1e-12);
        }
    }

    #[test]
    fn continued_denominator_vanishes_at_bound_state() {
        let p = pp(3, -1.85, 0.437, 1.0);
        let s = crate::bound::find_bound_state(&p, 0).unwrap().unwrap();
        let lo = continued_denominator(&p, 0, s.kappa * (1.0 - 1e-8)).unwrap();
        let hi = continued_denominator(&p, 0, s.kappa * (1.0 + 1e-8)).unwrap();
        assert!(lo * hi < 0.0, "{lo} {hi}");
    }
}
