use std::fmt;

use crate::error::{Error, Result};

pub const DEFAULT_EPS: f64 = 1e-8;

/// Double-precision real compared with relative tolerance `eps`.
#[derive(Debug, Clone, Copy)]
pub struct ApproxReal {
    pub value: f64,
    pub eps: f64,
}

impl ApproxReal {
    pub fn new(value: f64, eps: f64) -> Self {
        ApproxReal { value, eps }
    }

    pub fn is_zero(&self) -> bool {
        self.value.abs() <= self.eps
    }

    pub fn approx_eq(&self, other: &ApproxReal) -> bool {
        let scale = 1f64.max(self.value.abs()).max(other.value.abs());
        (self.value - other.value).abs() <= self.eps * scale
    }

    pub fn inv(&self) -> Result<ApproxReal> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ApproxReal { value: 1.0 / self.value, eps: self.eps })
    }
}

impl PartialEq for ApproxReal {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}

impl fmt::Display for ApproxReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_tolerance() {
        let a = ApproxReal::new(1e6, 1e-8);
        let b = ApproxReal::new(1e6 + 1e-3, 1e-8);
        assert!(a == b);
        assert!(ApproxReal::new(1.0, 1e-8) != ApproxReal::new(1.0 + 1e-6, 1e-8));
        assert!(ApproxReal::new(1e-9, 1e-8).inv().is_err());
    }
}
