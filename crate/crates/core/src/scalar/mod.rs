//! Coefficient fields: rationals, quadratic extensions, prime fields and
//! approximate reals behind one [`Scalar`] type.

mod approx;
pub mod prime;
mod quad;
mod rational;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use approx::{ApproxReal, DEFAULT_EPS};
pub use prime::Fp;
pub use quad::{check_discriminant, is_square_free, parse_quad, sqrt_root_mod, QuadExt, RootChoice};
pub use rational::Rational;

/// The coefficient field of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "field", rename_all = "lowercase")]
pub enum FieldSpec {
    Rational,
    Quadratic {
        #[serde(rename = "D")]
        d: i64,
    },
    Prime {
        p: u64,
    },
    Approx {
        #[serde(default = "default_eps")]
        eps: f64,
    },
}

fn default_eps() -> f64 {
    DEFAULT_EPS
}

impl FieldSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FieldSpec::Rational => Ok(()),
            FieldSpec::Quadratic { d } => check_discriminant(d),
            FieldSpec::Prime { p } => {
                if prime::is_prime(p) && p < (1 << 62) {
                    Ok(())
                } else {
                    Err(Error::BadPrime(p))
                }
            }
            FieldSpec::Approx { eps } => {
                if eps > 0.0 && eps.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidInput(format!("tolerance {eps} must be positive")))
                }
            }
        }
    }

    /// Exact fields of characteristic zero.
    pub fn is_char_zero_exact(&self) -> bool {
        matches!(self, FieldSpec::Rational | FieldSpec::Quadratic { .. })
    }

    pub fn is_approx(&self) -> bool {
        matches!(self, FieldSpec::Approx { .. })
    }

    pub fn prime(&self) -> Option<u64> {
        match *self {
            FieldSpec::Prime { p } => Some(p),
            _ => None,
        }
    }

    /// Short label used in reports.
    pub fn label(&self) -> String {
        match *self {
            FieldSpec::Rational => "rational".into(),
            FieldSpec::Quadratic { d } => format!("quadratic(D={d})"),
            FieldSpec::Prime { p } => format!("prime(p={p})"),
            FieldSpec::Approx { eps } => format!("approx(eps={eps:e})"),
        }
    }
}

/// An element of one of the supported fields.
#[derive(Debug, Clone)]
pub enum Scalar {
    Rational(Rational),
    Quad(QuadExt),
    Prime(Fp),
    Approx(ApproxReal),
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            (Scalar::Quad(a), Scalar::Quad(b)) => a == b,
            (Scalar::Prime(a), Scalar::Prime(b)) => a == b,
            (Scalar::Approx(a), Scalar::Approx(b)) => a == b,
            _ => false,
        }
    }
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Quad(q) => FieldSpec::Quadratic { d: q.discriminant() },
            Scalar::Prime(x) => FieldSpec::Prime { p: x.modulus() },
            Scalar::Approx(x) => FieldSpec::Approx { eps: x.eps },
        }
    }

    pub fn zero(field: FieldSpec) -> Scalar {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: FieldSpec) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: FieldSpec, v: i64) -> Scalar {
        match field {
            FieldSpec::Rational => Scalar::Rational(Rational::from_i64(v)),
            FieldSpec::Quadratic { d } => Scalar::Quad(QuadExt::from_rational(Rational::from_i64(v), d)),
            FieldSpec::Prime { p } => Scalar::Prime(Fp::from_i64(v, p)),
            FieldSpec::Approx { eps } => Scalar::Approx(ApproxReal::new(v as f64, eps)),
        }
    }

    pub fn from_rational(field: FieldSpec, v: &Rational) -> Result<Scalar> {
        Ok(match field {
            FieldSpec::Rational => Scalar::Rational(v.clone()),
            FieldSpec::Quadratic { d } => Scalar::Quad(QuadExt::from_rational(v.clone(), d)),
            FieldSpec::Prime { p } => Scalar::Prime(Fp::new(v.reduce_mod(p)?, p)),
            FieldSpec::Approx { eps } => Scalar::Approx(ApproxReal::new(v.to_f64(), eps)),
        })
    }

    pub fn from_f64(eps: f64, v: f64) -> Scalar {
        Scalar::Approx(ApproxReal::new(v, eps))
    }

    fn mismatch(&self, other: &Scalar) -> Error {
        Error::FieldMismatch(self.field(), other.field())
    }

    pub fn add(&self, o: &Scalar) -> Result<Scalar> {
        Ok(match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a.add(b)),
            (Scalar::Quad(a), Scalar::Quad(b)) if a.discriminant() == b.discriminant() => Scalar::Quad(a.add(b)),
            (Scalar::Prime(a), Scalar::Prime(b)) if a.modulus() == b.modulus() => Scalar::Prime(a.add(b)),
            (Scalar::Approx(a), Scalar::Approx(b)) if a.eps == b.eps => {
                Scalar::Approx(ApproxReal::new(a.value + b.value, a.eps))
            }
            _ => return Err(self.mismatch(o)),
        })
    }

    pub fn sub(&self, o: &Scalar) -> Result<Scalar> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Result<Scalar> {
        Ok(match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a.mul(b)),
            (Scalar::Quad(a), Scalar::Quad(b)) if a.discriminant() == b.discriminant() => Scalar::Quad(a.mul(b)),
            (Scalar::Prime(a), Scalar::Prime(b)) if a.modulus() == b.modulus() => Scalar::Prime(a.mul(b)),
            (Scalar::Approx(a), Scalar::Approx(b)) if a.eps == b.eps => {
                Scalar::Approx(ApproxReal::new(a.value * b.value, a.eps))
            }
            _ => return Err(self.mismatch(o)),
        })
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(a.neg()),
            Scalar::Quad(a) => Scalar::Quad(a.neg()),
            Scalar::Prime(a) => Scalar::Prime(a.neg()),
            Scalar::Approx(a) => Scalar::Approx(ApproxReal::new(-a.value, a.eps)),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.inv()?),
            Scalar::Quad(a) => Scalar::Quad(a.inv()?),
            Scalar::Prime(a) => Scalar::Prime(a.inv()?),
            Scalar::Approx(a) => Scalar::Approx(a.inv()?),
        })
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar> {
        if self.field() != o.field() {
            return Err(self.mismatch(o));
        }
        self.mul(&o.inv()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one(self.field());
        for _ in 0..e {
            acc = acc.mul(self).expect("same field");
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(a) => a.is_zero(),
            Scalar::Quad(a) => a.is_zero(),
            Scalar::Prime(a) => a.is_zero(),
            Scalar::Approx(a) => a.is_zero(),
        }
    }

    /// Exact zero test, ignoring the approximate tolerance.
    pub fn is_exact_zero(&self) -> bool {
        match self {
            Scalar::Approx(a) => a.value == 0.0,
            s => s.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Scalar::one(self.field())
    }

    /// Real image, when the value has one.
    pub fn to_f64(&self) -> Result<f64> {
        match self {
            Scalar::Rational(a) => Ok(a.to_f64()),
            Scalar::Quad(a) => a.to_f64(),
            Scalar::Prime(_) => Err(Error::InvalidInput("prime field element has no real image".into())),
            Scalar::Approx(a) => Ok(a.value),
        }
    }

    /// Image in F_p. Quadratic values use the chosen root of `D`.
    pub fn reduce_mod(&self, p: u64, choice: RootChoice) -> Result<Fp> {
        match self {
            Scalar::Rational(a) => Ok(Fp::new(a.reduce_mod(p)?, p)),
            Scalar::Quad(a) => Ok(Fp::new(a.reduce_mod(p, choice)?.0, p)),
            Scalar::Prime(a) if a.modulus() == p => Ok(*a),
            other => Err(Error::FieldMismatch(other.field(), FieldSpec::Prime { p })),
        }
    }

    /// Converts into `target`: exact data may be reduced mod p or rounded to
    /// floats; other conversions are refused.
    pub fn convert(&self, target: FieldSpec, choice: RootChoice) -> Result<Scalar> {
        if self.field() == target {
            return Ok(self.clone());
        }
        match (self, target) {
            (Scalar::Rational(a), _) => Scalar::from_rational(target, a),
            (Scalar::Quad(a), FieldSpec::Quadratic { d }) if a.b.is_zero() => {
                Ok(Scalar::Quad(QuadExt::from_rational(a.a.clone(), d)))
            }
            (Scalar::Quad(a), FieldSpec::Rational) if a.b.is_zero() => Ok(Scalar::Rational(a.a.clone())),
            (Scalar::Quad(_), FieldSpec::Prime { p }) => Ok(Scalar::Prime(self.reduce_mod(p, choice)?)),
            (Scalar::Quad(a), FieldSpec::Approx { eps }) => Ok(Scalar::Approx(ApproxReal::new(a.to_f64()?, eps))),
            (Scalar::Approx(a), FieldSpec::Approx { eps }) => Ok(Scalar::Approx(ApproxReal::new(a.value, eps))),
            _ => Err(Error::FieldMismatch(self.field(), target)),
        }
    }

    pub fn as_fp(&self) -> Option<Fp> {
        match self {
            Scalar::Prime(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(x) => Some(x),
            _ => None,
        }
    }

    /// Parses the textual syntax of `field`: `num/den`, decimals,
    /// `a+b*sqrtD`, integers mod p. Floats accept any of these.
    pub fn parse(field: FieldSpec, s: &str) -> Result<Scalar> {
        let t = s.trim();
        match field {
            FieldSpec::Rational => Ok(Scalar::Rational(t.parse()?)),
            FieldSpec::Quadratic { d } => Ok(Scalar::Quad(parse_quad(t, d)?)),
            FieldSpec::Prime { p } => {
                let r: Rational = t.parse()?;
                Ok(Scalar::Prime(Fp::new(r.reduce_mod(p)?, p)))
            }
            FieldSpec::Approx { eps } => {
                if let Ok(v) = t.parse::<f64>() {
                    return Ok(Scalar::Approx(ApproxReal::new(v, eps)));
                }
                if let Some(pos) = t.find("*sqrt") {
                    let d: i64 = t[pos + 5..].parse().map_err(|_| Error::Parse(format!("bad scalar {t:?}")))?;
                    let q = parse_quad(t, d)?;
                    return Ok(Scalar::Approx(ApproxReal::new(q.to_f64()?, eps)));
                }
                let r: Rational = t.parse()?;
                Ok(Scalar::Approx(ApproxReal::new(r.to_f64(), eps)))
            }
        }
    }

    /// Reads a JSON string or number.
    pub fn from_json(field: FieldSpec, v: &serde_json::Value) -> Result<Scalar> {
        match v {
            serde_json::Value::String(s) => Scalar::parse(field, s),
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Scalar::from_i64(field, i))
                } else {
                    Scalar::parse(field, &n.to_string())
                }
            }
            other => Err(Error::Parse(format!("expected scalar, found {other}"))),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(a) => write!(f, "{a}"),
            Scalar::Quad(a) => write!(f, "{a}"),
            Scalar::Prime(a) => write!(f, "{}", a.residue()),
            Scalar::Approx(a) => write!(f, "{a}"),
        }
    }
}
