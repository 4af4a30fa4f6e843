//! Exact rational scalars and vectors.
//!
//! Every position, payoff, price and probability in the crate is a
//! [`Rat`]. Rationals are rendered as `"p/q"` (or `"p"` when integral) and
//! parsed from the same format, plain integers, or finite decimals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn zeros(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Rat> {
    let mut v = zeros(n);
    v[i] = Rat::one();
    v
}

/// Parses `"p/q"`, `"p"`, or a finite decimal such as `"-0.125"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !whole_digits.chars().all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let digits = format!("{whole_digits}{frac}");
        let n =
            BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rat::new(n, d);
        return Ok(if negative { -r } else { r });
    }
    BigInt::from_str(t)
        .map(Rat::from_integer)
        .map_err(|_| bad())
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact conversion of a finite float.
pub fn from_f64(x: f64) -> Rat {
    Rat::from_float(x).expect("finite float")
}

/// Decimal rendering with `digits` fractional digits, truncated toward zero.
pub fn fmt_decimal(r: &Rat, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (r * Rat::from_integer(scale.clone())).round().to_integer();
    let negative = scaled.is_negative();
    let abs = scaled.abs();
    let (whole, frac) = abs.div_rem(&scale);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!(
            "{sign}{whole}.{:0>width$}",
            frac.to_string(),
            width = digits
        )
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rat], s: &Rat) -> Vec<Rat> {
    a.iter().map(|x| x * s).collect()
}

pub fn neg(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero_vec(a: &[Rat]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn linf_norm(a: &[Rat]) -> Rat {
    a.iter().map(Signed::abs).max().unwrap_or_else(Rat::zero)
}

/// Scales `v` to the primitive integer vector on the same ray.
/// The zero vector is returned unchanged.
pub fn primitive(v: &[Rat]) -> Vec<Rat> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| Rat::from_integer(x / &g))
        .collect()
}

/// Positive factor `f` such that `f * v` is primitive integral.
pub fn primitive_factor(v: &[Rat]) -> Option<Rat> {
    let first = v.iter().position(|x| !x.is_zero())?;
    let p = primitive(v);
    Some(&p[first] / &v[first])
}

pub fn fmt_vec(v: &[Rat]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

pub fn fmt_mat(m: &[Vec<Rat>]) -> Vec<Vec<String>> {
    m.iter().map(|v| fmt_vec(v)).collect()
}

/// Parses a vector written as `"(1,0,-1/2)"`, `"[1, 0]"` or `"1,0"`.
pub fn parse_vec(s: &str) -> Result<Vec<Rat>> {
    let t = s
        .trim()
        .trim_start_matches(['(', '['])
        .trim_end_matches([')', ']']);
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    t.split(',').map(parse_rat).collect()
}

/// Serde wrapper: reads integers or `"p/q"` strings, writes `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JsonRat(pub Rat);

impl fmt::Display for JsonRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rat(&self.0))
    }
}

impl Serialize for JsonRat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&fmt_rat(&self.0))
    }
}

impl<'de> Deserialize<'de> for JsonRat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct RatVisitor;
        impl Visitor<'_> for RatVisitor {
            type Value = JsonRat;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a rational string \"p/q\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<JsonRat, E> {
                Ok(JsonRat(int(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<JsonRat, E> {
                Ok(JsonRat(Rat::from_integer(BigInt::from(v))))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<JsonRat, E> {
                Err(E::custom(format!(
                    "floating-point literal {v} is not exact; write it as a string \"p/q\""
                )))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<JsonRat, E> {
                parse_rat(v).map(JsonRat).map_err(E::custom)
            }
        }
        deserializer.deserialize_any(RatVisitor)
    }
}

pub fn unwrap_vec(v: &[JsonRat]) -> Vec<Rat> {
    v.iter().map(|x| x.0.clone()).collect()
}

pub fn wrap_vec(v: &[Rat]) -> Vec<JsonRat> {
    v.iter().cloned().map(JsonRat).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_accepted_forms() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-7").unwrap(), int(-7));
        assert_eq!(parse_rat("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rat(".5").unwrap(), rat(1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert_eq!(
            parse_vec("(1,0,-1/2)").unwrap(),
            vec![int(1), int(0), rat(-1, 2)]
        );
    }

    #[test]
    fn formatting() {
        assert_eq!(fmt_rat(&rat(-1, 6)), "-1/6");
        assert_eq!(fmt_rat(&int(4)), "4");
        assert_eq!(fmt_decimal(&rat(-1, 6), 4), "-0.1667");
        assert_eq!(fmt_decimal(&rat(1, 3), 0), "0");
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(primitive(&[rat(2, 3), rat(4, 3)]), vec![int(1), int(2)]);
        assert_eq!(primitive(&[rat(-1, 2), int(0)]), vec![int(-1), int(0)]);
        assert_eq!(primitive_factor(&[rat(1, 2), rat(1, 2)]).unwrap(), int(2));
    }

    #[test]
    fn json_round_trip() {
        let v: Vec<JsonRat> = serde_json::from_str(r#"[1, "-1/4", "0.5"]"#).unwrap();
        assert_eq!(unwrap_vec(&v), vec![int(1), rat(-1, 4), rat(1, 2)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1","-1/4","1/2"]"#);
        assert!(serde_json::from_str::<JsonRat>("0.5").is_err());
    }
}
