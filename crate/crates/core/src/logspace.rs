//! Sign/log-magnitude scalars.
//!
//! Boundary integrals carry a factor `e^{-θ_min/ε²}` and the constant in
//! front of the eigenfunction carries its inverse, so intermediate values
//! leave the `f64` range long before the quantities of interest do.  Every
//! such scalar is kept as `(sign, ln|x|)` and only materialized on request.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Largest `|ln x|` for which [`LogValue::to_f64`] materializes a value.
pub const MATERIALIZE_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    /// `-1`, `0` or `+1`.
    pub sign: i8,
    /// `ln |x|`; `-inf` for zero.
    pub ln_abs: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };
    pub const ONE: LogValue = LogValue { sign: 1, ln_abs: 0.0 };

    pub fn new(sign: i8, ln_abs: f64) -> Self {
        if sign == 0 || ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue {
                sign: sign.signum(),
                ln_abs,
            }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogValue {
                sign: if x > 0.0 { 1 } else { -1 },
                ln_abs: x.abs().ln(),
            }
        }
    }

    /// `x · e^{-shift}` for a moderate `x`.
    pub fn scaled(x: f64, shift: f64) -> Self {
        let mut v = Self::from_f64(x);
        if v.sign != 0 {
            v.ln_abs -= shift;
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn is_positive(&self) -> bool {
        self.sign > 0
    }

    pub fn is_finite(&self) -> bool {
        self.sign == 0 || self.ln_abs.is_finite()
    }

    /// Linear value when `|ln|x|| < 700`, `None` otherwise.
    pub fn to_f64(&self) -> Option<f64> {
        if self.sign == 0 {
            Some(0.0)
        } else if self.ln_abs.abs() < MATERIALIZE_LIMIT {
            Some(f64::from(self.sign) * self.ln_abs.exp())
        } else {
            None
        }
    }

    /// Linear value, saturating to `0` or `±inf` outside the representable range.
    pub fn to_f64_lossy(&self) -> f64 {
        f64::from(self.sign) * self.ln_abs.exp()
    }

    pub fn abs(self) -> Self {
        LogValue {
            sign: self.sign.abs(),
            ..self
        }
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        let sign = if n % 2 == 0 { self.sign.abs() } else { self.sign };
        Self::new(sign, self.ln_abs * f64::from(n))
    }

    fn plus(self, other: LogValue) -> LogValue {
        if self.sign == 0 {
            return other;
        }
        if other.sign == 0 {
            return self;
        }
        let (big, small) = if self.ln_abs >= other.ln_abs {
            (self, other)
        } else {
            (other, self)
        };
        let ratio = (small.ln_abs - big.ln_abs).exp();
        if big.sign == small.sign {
            LogValue::new(big.sign, big.ln_abs + ratio.ln_1p())
        } else if ratio == 1.0 {
            LogValue::ZERO
        } else {
            LogValue::new(big.sign, big.ln_abs + (-ratio).ln_1p())
        }
    }

    /// Sum of many terms with a single rescaling.
    pub fn sum<I: IntoIterator<Item = LogValue>>(terms: I) -> LogValue {
        let terms: Vec<LogValue> = terms.into_iter().filter(|t| !t.is_zero()).collect();
        let Some(top) = terms
            .iter()
            .map(|t| t.ln_abs)
            .max_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal))
        else {
            return LogValue::ZERO;
        };
        let acc: f64 = terms
            .iter()
            .map(|t| f64::from(t.sign) * (t.ln_abs - top).exp())
            .sum();
        LogValue::scaled(acc, -top)
    }
}

/// Serialized as `{sign, ln_abs, value}` with `value` null when not representable.
impl Serialize for LogValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("LogValue", 3)?;
        st.serialize_field("sign", &self.sign)?;
        st.serialize_field("ln_abs", &self.ln_abs.is_finite().then_some(self.ln_abs))?;
        st.serialize_field("value", &self.to_f64())?;
        st.end()
    }
}

impl Add for LogValue {
    type Output = LogValue;
    fn add(self, rhs: LogValue) -> LogValue {
        self.plus(rhs)
    }
}

impl Sub for LogValue {
    type Output = LogValue;
    fn sub(self, rhs: LogValue) -> LogValue {
        self.plus(-rhs)
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        LogValue::new(self.sign * rhs.sign, self.ln_abs + rhs.ln_abs)
    }
}

impl Div for LogValue {
    type Output = LogValue;
    fn div(self, rhs: LogValue) -> LogValue {
        assert!(rhs.sign != 0, "division by a zero LogValue");
        LogValue::new(self.sign * rhs.sign, self.ln_abs - rhs.ln_abs)
    }
}

impl Neg for LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        LogValue {
            sign: -self.sign,
            ..self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_matches_linear() {
        let a = LogValue::from_f64(3.5);
        let b = LogValue::from_f64(-1.25);
        assert!(((a + b).to_f64().unwrap() - 2.25).abs() < 1e-14);
        assert!(((a * b).to_f64().unwrap() + 4.375).abs() < 1e-14);
        assert!(((a / b).to_f64().unwrap() + 2.8).abs() < 1e-14);
        assert!((a - a).is_zero());
        let s = LogValue::sum([a, b, LogValue::ZERO, LogValue::from_f64(0.75)]);
        assert!((s.to_f64().unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn huge_and_tiny_stay_representable() {
        let tiny = LogValue::scaled(2.0, 2000.0);
        let huge = LogValue::scaled(0.5, -2000.0);
        assert_eq!(tiny.to_f64(), None);
        let prod = tiny * huge;
        assert!((prod.to_f64().unwrap() - 1.0).abs() < 1e-12);
        let sum = tiny + tiny;
        assert!((sum.ln_abs - (4.0f64.ln() - 2000.0)).abs() < 1e-12);
    }
}
