//! The bias parameter `x` and other values that are exact when possible.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::bigmath::{ratio_string, ratio_to_f64};
use crate::error::{Error, Result};

/// A value carried either as an exact rational or as a float.
///
/// Parsing follows the command-line convention: `"3"` and `"3/2"` are exact,
/// anything with a decimal point or exponent is a float.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Real(f64),
}

impl Scalar {
    pub fn one() -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(1)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => ratio_to_f64(r),
            Scalar::Real(v) => *v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Real(_) => None,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Real(v) => *v > 0.0,
        }
    }

    /// Fails unless the value is strictly positive and finite.
    pub fn positive(self) -> Result<Self> {
        let ok = match &self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Real(v) => v.is_finite() && *v > 0.0,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::NonPositiveX(self.to_string()))
        }
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar::Real(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::Exact(v)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(v)))
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::ParseScalar(s.to_string());
        if let Some((p, q)) = t.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            return Ok(Scalar::Exact(BigRational::new(p, q)));
        }
        if let Ok(i) = t.parse::<BigInt>() {
            return Ok(Scalar::Exact(BigRational::from_integer(i)));
        }
        t.parse::<f64>().map(Scalar::Real).map_err(|_| bad())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => f.write_str(&ratio_string(r)),
            Scalar::Real(v) => write!(f, "{v:?}"),
        }
    }
}

/// Exact values serialize as `"p/q"` strings, floats as JSON numbers.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => ser.serialize_str(&ratio_string(r)),
            Scalar::Real(v) => ser.serialize_f64(*v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_routes_by_syntax() {
        assert!(matches!("1".parse::<Scalar>().unwrap(), Scalar::Exact(_)));
        assert_eq!("6/4".parse::<Scalar>().unwrap().to_string(), "3/2");
        assert!(matches!("1.5".parse::<Scalar>().unwrap(), Scalar::Real(v) if v == 1.5));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn positivity_guard() {
        assert!("0".parse::<Scalar>().unwrap().positive().is_err());
        assert!("-1/2".parse::<Scalar>().unwrap().positive().is_err());
        assert!("0.25".parse::<Scalar>().unwrap().positive().is_ok());
    }
}
