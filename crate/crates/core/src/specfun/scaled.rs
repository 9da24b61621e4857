/// A real number stored as `mantissa * exp(log_scale)`.
///
/// Recurrences over many orders at tiny or huge arguments leave the f64
/// range long before the quantities we actually need (ratios, products
/// of a large and a small function) do; carrying the exponent separately
/// keeps every intermediate finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mantissa: f64,
    pub log_scale: f64,
}

// Named methods rather than operator traits: mixing scaled and plain values
// through `+` would hide which side carries the exponent.
#[allow(clippy::should_implement_trait)]
impl Scaled {
    pub const fn new(mantissa: f64, log_scale: f64) -> Self {
        Self { mantissa, log_scale }
    }

    pub const fn from_f64(v: f64) -> Self {
        Self::new(v, 0.0)
    }

    /// Moves the magnitude of the mantissa into the exponent once it leaves
    /// [1e-100, 1e100]. Scaling is by a power of two, so the mantissa stays exact.
    pub fn normalized(self) -> Self {
        let a = self.mantissa.abs();
        if a == 0.0 || !a.is_finite() || (1e-100..=1e100).contains(&a) {
            return self;
        }
        let k = a.log2().floor() as i32;
        Self::new(self.mantissa * 2f64.powi(-k), self.log_scale + k as f64 * std::f64::consts::LN_2)
    }

    pub fn ln_abs(self) -> f64 {
        self.mantissa.abs().ln() + self.log_scale
    }

    pub fn signum(self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    pub fn scale(self, factor: f64) -> Self {
        Self::new(self.mantissa * factor, self.log_scale)
    }

    pub fn mul(self, other: Scaled) -> Self {
        Self::new(self.mantissa * other.mantissa, self.log_scale + other.log_scale).normalized()
    }

    /// Sum of two scaled values; the smaller operand is rescaled to the larger.
    pub fn add(self, other: Scaled) -> Self {
        if self.mantissa == 0.0 {
            return other;
        }
        if other.mantissa == 0.0 {
            return self;
        }
        let (hi, lo) = if self.ln_abs() >= other.ln_abs() { (self, other) } else { (other, self) };
        let m = hi.mantissa + lo.mantissa * (lo.log_scale - hi.log_scale).exp();
        Self::new(m, hi.log_scale).normalized()
    }

    pub fn neg(self) -> Self {
        Self::new(-self.mantissa, self.log_scale)
    }

    /// `self / other` as a plain f64 (may still over/underflow if the ratio does).
    pub fn ratio(self, other: Scaled) -> f64 {
        self.mantissa / other.mantissa * (self.log_scale - other.log_scale).exp()
    }

    /// Converts to f64; `None` when the magnitude leaves the normal f64 range.
    pub fn to_f64(self) -> Option<f64> {
        if self.mantissa == 0.0 {
            return Some(0.0);
        }
        let ln = self.ln_abs();
        if ln > f64::MAX.ln() || ln < f64::MIN_POSITIVE.ln() {
            return None;
        }
        Some(self.mantissa * self.log_scale.exp()).filter(|v| v.is_finite() && *v != 0.0)
            .or_else(|| {
                // exp(log_scale) alone may overflow while the product does not
                let n = self.normalized();
                Some(n.mantissa * n.log_scale.exp()).filter(|v| v.is_finite() && *v != 0.0)
            })
    }
}
