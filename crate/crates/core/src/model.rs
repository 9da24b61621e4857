//! Problem definition in dimensionless variables: couplings, matching data,
//! channel bookkeeping and the bound-state threshold L_max.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::Order;

/// One instance of the contact potential: dimension, delta and delta' strengths, radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    pub d: u32,
    pub w0: f64,
    pub w1: f64,
    pub x0: f64,
}

impl PotentialParams {
    pub fn new(d: u32, w0: f64, w1: f64, x0: f64) -> Result<Self> {
        let p = Self { d, w0, w1, x0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::Domain(format!("dimension must be at least 2, got {}", self.d)));
        }
        if !(self.x0 > 0.0 && self.x0.is_finite()) {
            return Err(Error::Domain(format!("radius x0 must be positive, got {}", self.x0)));
        }
        if !self.w0.is_finite() || !self.w1.is_finite() {
            return Err(Error::Domain(format!("couplings must be finite (w0={}, w1={})", self.w0, self.w1)));
        }
        Ok(())
    }

    /// Parameters reproducing given (alpha, beta_tilde) on the regular branch.
    pub fn from_effective(d: u32, alpha: f64, beta_tilde: f64, x0: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha != 0.0 && alpha != -1.0) {
            return Err(Error::Domain(format!("alpha must be finite, nonzero and not -1, got {alpha}")));
        }
        let w1 = (alpha - 1.0) / (alpha + 1.0);
        let beta = beta_tilde + (alpha * alpha - 1.0) * (d as f64 - 1.0) / (2.0 * alpha * x0);
        Self::new(d, beta * (1.0 - w1 * w1), w1, x0)
    }

    pub fn nu(&self) -> f64 {
        (self.d as f64 - 2.0) / 2.0
    }
}

/// Converts physical strengths to the dimensionless problem.
///
/// `a` is the delta strength, `b` the delta' strength, `r0` the radius.
pub fn nondimensionalize(d: u32, a: f64, b: f64, r0: f64, m: f64, hbar: f64, c: f64) -> Result<PotentialParams> {
    for (name, v) in [("r0", r0), ("m", m), ("hbar", hbar), ("c", c)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    PotentialParams::new(d, 2.0 * a / (hbar * c), b * m / (hbar * hbar), m * c * r0 / hbar)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Regular,
    /// w1 = +1: Robin condition outside, Dirichlet inside.
    RobinDirichletPlus,
    /// w1 = -1: Dirichlet outside, Robin inside.
    RobinDirichletMinus,
}

/// Matching data derived from (w0, w1).
///
/// On the w1 = +-1 branches alpha is +inf or 0 and beta, beta_tilde are NaN;
/// only `w0_tilde` is meaningful there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    pub alpha: f64,
    pub beta: f64,
    pub beta_tilde: f64,
    pub w0_tilde: f64,
    pub branch: Branch,
}

pub fn couplings(p: &PotentialParams) -> Couplings {
    let w0_tilde = p.w0 + 2.0 * (1.0 - p.d as f64) * p.w1 / p.x0;
    // exact comparison: the branches are structural, not approximate
    let branch = if p.w1 == 1.0 {
        Branch::RobinDirichletPlus
    } else if p.w1 == -1.0 {
        Branch::RobinDirichletMinus
    } else {
        Branch::Regular
    };
    if branch != Branch::Regular {
        return Couplings {
            alpha: if p.w1 == 1.0 { f64::INFINITY } else { 0.0 },
            beta: f64::NAN,
            beta_tilde: f64::NAN,
            w0_tilde,
            branch,
        };
    }
    let alpha = (1.0 + p.w1) / (1.0 - p.w1);
    let beta = p.w0 / (1.0 - p.w1 * p.w1);
    let beta_tilde = beta - (alpha * alpha - 1.0) * (p.d as f64 - 1.0) / (2.0 * alpha * p.x0);
    Couplings {
        alpha,
        beta,
        beta_tilde,
        w0_tilde,
        branch,
    }
}

/// Value and slope of the radial function on one side of x0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData {
    pub value: f64,
    pub slope: f64,
}

fn require_regular(c: &Couplings, w1_hint: f64) -> Result<()> {
    if c.branch == Branch::Regular {
        Ok(())
    } else {
        Err(Error::Branch { w1: w1_hint })
    }
}

fn branch_w1(c: &Couplings) -> f64 {
    if c.branch == Branch::RobinDirichletPlus {
        1.0
    } else {
        -1.0
    }
}

/// Radial data at x0+ from data at x0-.
pub fn apply_matching(c: &Couplings, inner: BoundaryData) -> Result<BoundaryData> {
    require_regular(c, branch_w1(c))?;
    Ok(BoundaryData {
        value: c.alpha * inner.value,
        slope: c.beta_tilde * inner.value + inner.slope / c.alpha,
    })
}

/// The same matching written for the reduced function u = x^{(d-1)/2} R:
/// u+ = alpha u-, u'+ = beta u- + u'- / alpha.
pub fn apply_matching_reduced(c: &Couplings, inner: BoundaryData) -> Result<BoundaryData> {
    require_regular(c, branch_w1(c))?;
    Ok(BoundaryData {
        value: c.alpha * inner.value,
        slope: c.beta * inner.value + inner.slope / c.alpha,
    })
}

/// Radial data at x0- from data at x0+; inverse of [`apply_matching`].
pub fn invert_matching(c: &Couplings, outer: BoundaryData) -> Result<BoundaryData> {
    require_regular(c, branch_w1(c))?;
    let value = outer.value / c.alpha;
    Ok(BoundaryData {
        value,
        slope: c.alpha * (outer.slope - c.beta_tilde * value),
    })
}

/// Multiplicity of the angular eigenvalue -l(l+d-2) on the (d-1)-sphere.
pub fn degeneracy(d: u32, ell: u32) -> u128 {
    assert!(d >= 2, "dimension must be at least 2");
    if ell == 0 {
        return 1;
    }
    if d == 2 {
        return 2;
    }
    // binom(d+l-3, l) * (d+2l-2) / (d-2), exact in integers
    let (d, ell) = (d as u128, ell as u128);
    let (n, k) = (d + ell - 3, ell.min(d - 3));
    let mut binom: u128 = 1;
    for i in 1..=k {
        binom = binom * (n - k + i) / i;
    }
    binom * (d + 2 * ell - 2) / (d - 2)
}

pub fn eta(d: u32, ell: u32) -> i64 {
    5 - d as i64 - 2 * ell as i64
}

/// Angular-momentum channel l in d dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Channel {
    pub ell: u32,
    pub nu: Order,
    pub eta: i64,
    pub degeneracy: u128,
}

impl Channel {
    pub fn new(d: u32, ell: u32) -> Self {
        Self {
            ell,
            nu: Order::from_twice(d as i32 - 2).expect("d >= 2"),
            eta: eta(d, ell),
            degeneracy: degeneracy(d, ell),
        }
    }
}

/// The bound-state threshold: channel l binds iff l < L_max.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LMax {
    pub value: f64,
    /// floor(L_max), or None when L_max < 0.
    pub ell_max: Option<u32>,
    /// L_max is a non-negative integer: channel ell_max holds a zero-energy
    /// solution instead of a bound state.
    pub on_boundary: bool,
}

impl LMax {
    /// Whether channel l supports a bound state.
    pub fn admits(&self, ell: u32) -> bool {
        (ell as f64) < self.value
    }
}

pub fn l_max(p: &PotentialParams) -> LMax {
    let value = (p.w1 - p.x0 * p.w0 / 2.0) / (p.w1 * p.w1 + 1.0) + (2.0 - p.d as f64) / 2.0;
    if value < 0.0 || !value.is_finite() {
        return LMax {
            value,
            ell_max: None,
            on_boundary: false,
        };
    }
    let fl = value.floor();
    LMax {
        value,
        ell_max: Some(fl.min(u32::MAX as f64) as u32),
        on_boundary: fl == value,
    }
}
