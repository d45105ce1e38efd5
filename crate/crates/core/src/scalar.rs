//! Exact rational scalars and their canonical JSON encoding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision rational number. Every norm, pairing and
/// construction in this crate is computed with it.
pub type Scalar = BigRational;

/// `n / d` as a scalar. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Sign as a scalar in {-1, 0, 1}.
pub fn sgn(x: &Scalar) -> Scalar {
    match x.cmp(&Scalar::zero()) {
        Ordering::Less => -Scalar::one(),
        Ordering::Equal => Scalar::zero(),
        Ordering::Greater => Scalar::one(),
    }
}

pub fn abs(x: &Scalar) -> Scalar {
    x.abs()
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite float.
pub fn from_f64(x: f64) -> Option<Scalar> {
    BigRational::from_float(x)
}

pub fn max_of<'a>(it: impl IntoIterator<Item = &'a Scalar>) -> Option<Scalar> {
    it.into_iter().max().cloned()
}

pub fn min_of<'a>(it: impl IntoIterator<Item = &'a Scalar>) -> Option<Scalar> {
    it.into_iter().min().cloned()
}

/// Serde wrapper for a scalar: `{"num": "-3", "den": "4"}` with the
/// denominator positive and the fraction reduced.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Q(pub Scalar);

impl From<Scalar> for Q {
    fn from(s: Scalar) -> Self {
        Q(s)
    }
}

impl From<&Scalar> for Q {
    fn from(s: &Scalar) -> Self {
        Q(s.clone())
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: String,
    den: String,
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RationalRepr {
            num: self.0.numer().to_string(),
            den: self.0.denom().to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = RationalRepr::deserialize(deserializer)?;
        let num: BigInt = repr
            .num
            .trim()
            .parse()
            .map_err(|_| D::Error::custom(format!("invalid numerator {:?}", repr.num)))?;
        let den: BigInt = repr
            .den
            .trim()
            .parse()
            .map_err(|_| D::Error::custom(format!("invalid denominator {:?}", repr.den)))?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Q(BigRational::new(num, den)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_reduced() {
        let q = Q(rat(6, -8));
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"{"num":"-3","den":"4"}"#);
        let back: Q = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn rejects_zero_denominator_and_garbage() {
        assert!(serde_json::from_str::<Q>(r#"{"num":"1","den":"0"}"#).is_err());
        assert!(serde_json::from_str::<Q>(r#"{"num":"x","den":"1"}"#).is_err());
        assert!(serde_json::from_str::<Q>(r#"{"num":1,"den":"1"}"#).is_err());
    }

    #[test]
    fn sign_and_float_conversion() {
        assert_eq!(sgn(&rat(-2, 3)), int(-1));
        assert_eq!(sgn(&zero()), zero());
        assert_eq!(from_f64(0.375).unwrap(), rat(3, 8));
        assert!((to_f64(&rat(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
    }
}
