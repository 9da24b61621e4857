use thiserror::Error;

use crate::specfun::BesselKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The result is finite mathematically but exceeds the f64 range.
    #[error("{kind:?}_{nu}({x}) overflows f64 (ln|value| = {ln_abs:.3})")]
    Overflow {
        kind: BesselKind,
        nu: f64,
        x: f64,
        ln_abs: f64,
    },

    /// The result is nonzero mathematically but below the f64 range.
    #[error("{kind:?}_{nu}({x}) underflows f64 (ln|value| = {ln_abs:.3})")]
    Underflow {
        kind: BesselKind,
        nu: f64,
        x: f64,
        ln_abs: f64,
    },

    /// A logarithmic derivative was requested at a zero of the function.
    #[error("{kind:?}_{nu} vanishes at z = {z}: logarithmic derivative has a pole")]
    Pole { kind: BesselKind, nu: f64, z: f64 },

    /// The operation is not defined on the w1 = +-1 Robin/Dirichlet branch.
    #[error("operation requires the regular branch (w1 != +-1), got w1 = {w1}")]
    Branch { w1: f64 },

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("quadrature did not reach tolerance: estimate {value:e}, error {error:e}")]
    Quadrature { value: f64, error: f64 },

    #[error("no zero mode for l = {ell}: {reason}")]
    NoZeroMode { ell: u32, reason: String },

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("integration failed at kappa_or_k = {kappa_or_k}: {reason}")]
    Integration { kappa_or_k: f64, reason: String },

    #[error("asymptotic fit is ill-conditioned (relative Gram determinant {0:e})")]
    FitConditioning(f64),

    #[error("channel l = {ell}: {source}")]
    Channel { ell: u32, source: Box<Error> },
}

impl Error {
    /// Whether the error comes from a numerical failure rather than bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Domain(_) | Error::Branch { .. } => false,
            Error::Channel { source, .. } => source.is_numerical(),
            _ => true,
        }
    }
}
