//! `START:STOP:STEP` ranges, inclusive of STOP within half a step.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid range `{text}`: {reason}")]
pub struct RangeError {
    pub text: String,
    pub reason: String,
}

impl Range {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, String> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err("bounds and step must be finite".into());
        }
        if step <= 0.0 {
            return Err("step must be positive".into());
        }
        if stop <= start {
            return Err("stop must exceed start".into());
        }
        Ok(Self { start, stop, step })
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 0.5).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(i)).collect()
    }
}

impl FromStr for Range {
    type Err = RangeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = |reason: String| RangeError { text: s.to_string(), reason };
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(fail("expected START:STOP:STEP".into()));
        }
        let mut v = [0.0; 3];
        for (slot, part) in v.iter_mut().zip(&parts) {
            *slot = part.trim().parse().map_err(|_| fail(format!("`{part}` is not a number")))?;
        }
        Range::new(v[0], v[1], v[2]).map_err(fail)
    }
}

/// Shortest round-tripping form, so a printed range parses back exactly.
impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{:?}:{:?}", self.start, self.stop, self.step)
    }
}

/// `n` points from `start` to `stop` inclusive, evenly spaced in log.
pub fn log_points(start: f64, stop: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![start];
    }
    let (a, b) = (start.ln(), stop.ln());
    let mut v: Vec<f64> = (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect();
    v[0] = start;
    v[n - 1] = stop;
    v
}
