use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A nonzero exact rational, standing in for the gluing parameter λ ∈ K*.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar(Rational64);

impl Scalar {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        Self::from_rational(Rational64::new(numer, denom))
    }

    pub fn from_int(v: i64) -> Result<Self> {
        Self::new(v, 1)
    }

    pub fn from_rational(v: Rational64) -> Result<Self> {
        if v.is_zero() {
            Err(Error::ZeroScalar)
        } else {
            Ok(Scalar(v))
        }
    }

    pub fn one() -> Self {
        Scalar(Rational64::one())
    }

    pub fn minus_one() -> Self {
        Scalar(-Rational64::one())
    }

    pub fn value(&self) -> Rational64 {
        self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_minus_one(&self) -> bool {
        self.0 == -Rational64::one()
    }

    /// λ = ±1
    pub fn is_sign(&self) -> bool {
        self.is_one() || self.is_minus_one()
    }

    pub fn inv(&self) -> Self {
        Scalar(self.0.recip())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Accepts `n` or `n/d` with `d != 0`; the value must be nonzero.
impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed scalar literal {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            None => Scalar::from_int(s.parse().map_err(|_| bad())?),
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Scalar::new(n, d)
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
