use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn from_i64(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_frac(num: i64, den: i64) -> Result<Self> {
        Self::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn add(&self, o: &Rational) -> Rational {
        Rational(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Rational) -> Rational {
        Rational(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Rational) -> Rational {
        Rational(&self.0 * &o.0)
    }

    pub fn neg(&self) -> Rational {
        Rational(-&self.0)
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    pub fn inv(&self) -> Result<Rational> {
        if self.0.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Rational(self.0.recip()))
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // ratio of huge integers: scale through the bit lengths
            let n = self.numer().to_f64().unwrap_or(f64::INFINITY);
            let d = self.denom().to_f64().unwrap_or(f64::INFINITY);
            n / d
        })
    }

    /// Image in F_p; fails when p divides the denominator.
    pub fn reduce_mod(&self, p: u64) -> Result<u64> {
        let pb = BigInt::from(p);
        let den = self.denom().mod_floor(&pb);
        if den.is_zero() {
            return Err(Error::BadPrime(p));
        }
        let num = self.numer().mod_floor(&pb).to_u64().expect("residue fits");
        let den = den.to_u64().expect("residue fits");
        let inv = super::prime::inv_mod(den, p).ok_or(Error::BadPrime(p))?;
        Ok(super::prime::mul_mod(num, inv, p))
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_i64(v)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `a`, `a/b`, and finite decimals such as `-1.25`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            return Rational::new(n, d);
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int_part.starts_with('-');
            let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
            let mut n = BigInt::from_str(&digits).map_err(|_| bad())?;
            if negative {
                n = -n;
            }
            let d = num_traits::pow(BigInt::from(10), frac_part.len());
            return Rational::new(n, d);
        }
        let n = BigInt::from_str(s).map_err(|_| bad())?;
        Ok(Rational(BigRational::from_integer(n)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_and_parse() {
        let r: Rational = "6/-8".parse().unwrap();
        assert_eq!(r.to_string(), "-3/4");
        assert!(r.denom().is_positive());
        assert_eq!("-1.25".parse::<Rational>().unwrap(), Rational::from_frac(-5, 4).unwrap());
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::from_i64(7));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn inverse_and_reduction() {
        let r = Rational::from_frac(3, 4).unwrap();
        assert_eq!(r.inv().unwrap(), Rational::from_frac(4, 3).unwrap());
        assert_eq!(Rational::from_frac(1, 2).unwrap().reduce_mod(7).unwrap(), 4);
        assert_eq!(Rational::from_i64(-1).reduce_mod(5).unwrap(), 4);
        assert_eq!(Rational::from_frac(1, 7).unwrap().reduce_mod(7), Err(Error::BadPrime(7)));
    }
}
