use std::fmt;

use crate::error::{Error, Result};

use super::prime::{add_mod, mul_mod, reduce_i64, sqrt_mod};
use super::rational::Rational;

/// `a + b·√D` for a fixed square-free `D ∉ {0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub a: Rational,
    pub b: Rational,
    d: i64,
}

pub fn is_square_free(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let m = d.unsigned_abs();
    let mut q = 2u64;
    while q * q <= m {
        if m % (q * q) == 0 {
            return false;
        }
        q += 1;
    }
    true
}

pub fn check_discriminant(d: i64) -> Result<()> {
    if d == 1 || !is_square_free(d) {
        return Err(Error::InvalidInput(format!("quadratic parameter {d} is not a square-free integer other than 1")));
    }
    Ok(())
}

/// Which square root of `D` mod p stands in for `√D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootChoice {
    Smaller,
    Larger,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, d: i64) -> Self {
        QuadExt { a, b, d }
    }

    pub fn from_rational(a: Rational, d: i64) -> Self {
        QuadExt { a, b: Rational::zero(), d }
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    fn dr(&self) -> Rational {
        Rational::from_i64(self.d)
    }

    pub fn add(&self, o: &QuadExt) -> QuadExt {
        QuadExt { a: self.a.add(&o.a), b: self.b.add(&o.b), d: self.d }
    }

    pub fn sub(&self, o: &QuadExt) -> QuadExt {
        QuadExt { a: self.a.sub(&o.a), b: self.b.sub(&o.b), d: self.d }
    }

    pub fn neg(&self) -> QuadExt {
        QuadExt { a: self.a.neg(), b: self.b.neg(), d: self.d }
    }

    pub fn mul(&self, o: &QuadExt) -> QuadExt {
        let a = self.a.mul(&o.a).add(&self.b.mul(&o.b).mul(&self.dr()));
        let b = self.a.mul(&o.b).add(&self.b.mul(&o.a));
        QuadExt { a, b, d: self.d }
    }

    pub fn conj(&self) -> QuadExt {
        QuadExt { a: self.a.clone(), b: self.b.neg(), d: self.d }
    }

    /// Field norm `a² − D b²`, zero only for zero since `D` is not a square.
    pub fn norm(&self) -> Rational {
        self.a.mul(&self.a).sub(&self.b.mul(&self.b).mul(&self.dr()))
    }

    pub fn inv(&self) -> Result<QuadExt> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ninv = n.inv()?;
        Ok(QuadExt { a: self.a.mul(&ninv), b: self.b.neg().mul(&ninv), d: self.d })
    }

    pub fn to_f64(&self) -> Result<f64> {
        if self.b.is_zero() {
            return Ok(self.a.to_f64());
        }
        if self.d < 0 {
            return Err(Error::InvalidInput("imaginary quadratic value has no real image".into()));
        }
        Ok(self.a.to_f64() + self.b.to_f64() * (self.d as f64).sqrt())
    }

    /// Reduction mod p, sending `√D` to the chosen square root of `D` mod p.
    /// Returns the image together with the root used.
    pub fn reduce_mod(&self, p: u64, choice: RootChoice) -> Result<(u64, u64)> {
        let s = sqrt_root_mod(self.d, p, choice)?;
        let a = self.a.reduce_mod(p)?;
        let b = self.b.reduce_mod(p)?;
        Ok((add_mod(a, mul_mod(b, s, p), p), s))
    }
}

pub fn sqrt_root_mod(d: i64, p: u64, choice: RootChoice) -> Result<u64> {
    let dm = reduce_i64(d, p);
    if dm == 0 {
        return Err(Error::BadPrime(p));
    }
    let s = sqrt_mod(dm, p).ok_or(Error::NoSquareRoot(d, p))?;
    Ok(match choice {
        RootChoice::Smaller => s,
        RootChoice::Larger => p - s,
    })
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.b.is_negative() {
            write!(f, "{}-{}*sqrt{}", self.a, self.b.neg(), self.d)
        } else {
            write!(f, "{}+{}*sqrt{}", self.a, self.b, self.d)
        }
    }
}

/// Parses `a+b*sqrtD`, `a-b*sqrtD`, `b*sqrtD`, or a plain rational.
pub fn parse_quad(s: &str, d: i64) -> Result<QuadExt> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(pos) = s.find("*sqrt") else {
        return Ok(QuadExt::from_rational(s.parse()?, d));
    };
    let dstr = &s[pos + 5..];
    let dd: i64 = dstr.parse().map_err(|_| Error::Parse(format!("bad discriminant in {s:?}")))?;
    if dd != d {
        return Err(Error::Parse(format!("{s:?} uses sqrt{dd}, context expects sqrt{d}")));
    }
    let head = &s[..pos];
    // split "a±b" at the last sign that is not leading and not part of "+-"
    let bytes = head.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'+' && bytes[i - 1] != b'-' {
            split = Some(i);
            break;
        }
    }
    let (a, b) = match split {
        None => (Rational::zero(), head.parse::<Rational>()?),
        Some(i) => {
            let a: Rational = head[..i].parse()?;
            let rest = &head[i..];
            let b: Rational = if let Some(r) = rest.strip_prefix('+') { r.parse()? } else { rest.parse()? };
            (a, b)
        }
    };
    Ok(QuadExt::new(a, b, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: (i64, i64), b: (i64, i64), d: i64) -> QuadExt {
        QuadExt::new(Rational::from_frac(a.0, a.1).unwrap(), Rational::from_frac(b.0, b.1).unwrap(), d)
    }

    #[test]
    fn golden_ratio_identities() {
        let tau = q((1, 2), (1, 2), 5);
        // τ² = τ + 1
        assert_eq!(tau.mul(&tau), q((3, 2), (1, 2), 5));
        // τ⁻¹ = τ − 1
        assert_eq!(tau.inv().unwrap(), q((-1, 2), (1, 2), 5));
    }

    #[test]
    fn gaussian_norm() {
        let z = q((2, 1), (1, 1), -1);
        assert_eq!(z.mul(&z.conj()), q((5, 1), (0, 1), -1));
    }

    #[test]
    fn reduction_of_tau_mod_11() {
        let tau = q((1, 2), (1, 2), 5);
        let (v1, s1) = tau.reduce_mod(11, RootChoice::Smaller).unwrap();
        let (v2, s2) = tau.reduce_mod(11, RootChoice::Larger).unwrap();
        assert_eq!((s1, v1), (4, 8));
        assert_eq!((s2, v2), (7, 4));
        assert!(matches!(tau.reduce_mod(7, RootChoice::Smaller), Err(Error::NoSquareRoot(5, 7))));
    }

    #[test]
    fn display_parse_roundtrip() {
        for v in [q((1, 2), (1, 2), 5), q((3, 1), (-2, 3), -1), q((0, 1), (1, 1), 2), q((4, 1), (0, 1), 2)] {
            let s = v.to_string();
            assert_eq!(parse_quad(&s, v.discriminant()).unwrap(), v, "{s}");
        }
        assert_eq!(parse_quad("1/2+-1/2*sqrt5", 5).unwrap(), q((1, 2), (-1, 2), 5));
        assert!(parse_quad("1+sqrt5", 5).is_err() || parse_quad("1+1*sqrt3", 5).is_err());
    }

    #[test]
    fn square_free() {
        assert!(is_square_free(5) && is_square_free(-1) && is_square_free(2) && is_square_free(-3));
        assert!(!is_square_free(12) && !is_square_free(0));
        assert!(check_discriminant(1).is_err());
    }
}
