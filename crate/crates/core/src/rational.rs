//! Exact rational scalars and their JSON encoding.

use num::bigint::{BigInt, Sign};
use num::{BigRational, Integer, One, Signed, ToPrimitive, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

pub type Q = BigRational;

pub fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn qr(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite binary64 number.
pub fn from_f64(v: f64) -> Q {
    Q::from_float(v).expect("finite float")
}

pub fn floor_int(v: &Q) -> BigInt {
    v.floor().to_integer()
}

pub fn ceil_int(v: &Q) -> BigInt {
    v.ceil().to_integer()
}

pub fn int_to_i64(v: &BigInt) -> i64 {
    v.to_i64().expect("lattice coordinate out of i64 range")
}

pub fn pow_q(base: &Q, exp: u32) -> Q {
    num::pow(base.clone(), exp as usize)
}

/// Exact square root when the argument is the square of a rational.
pub fn rational_sqrt(v: &Q) -> Option<Q> {
    if v.is_negative() {
        return None;
    }
    let n = v.numer().sqrt();
    let d = v.denom().sqrt();
    if &(&n * &n) == v.numer() && &(&d * &d) == v.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Exact `k`-th root of a nonnegative rational, when it is rational.
pub fn rational_root(v: &Q, k: u32) -> Option<Q> {
    if v.is_negative() || k == 0 {
        return None;
    }
    let n = v.numer().nth_root(k);
    let d = v.denom().nth_root(k);
    if &num::pow(n.clone(), k as usize) == v.numer() && &num::pow(d.clone(), k as usize) == v.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Scales `(normal, offset)` so that the normal is a primitive integer vector.
pub fn primitive_scale(normal: &[Q], offset: &Q) -> (Vec<Q>, Q) {
    let mut l = BigInt::one();
    for c in normal {
        l = l.lcm(c.denom());
    }
    let ints: Vec<BigInt> = normal.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return (normal.to_vec(), offset.clone());
    }
    let scale = Q::new(l, g.clone());
    let out: Vec<Q> = ints.into_iter().map(|c| Q::from_integer(c / &g)).collect();
    (out, offset * scale)
}

pub fn sign_of(v: &Q) -> i8 {
    match v.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

fn big_to_value(v: &BigInt) -> Value {
    let s = v.to_string();
    Value::Number(s.parse().expect("integer literal"))
}

pub fn q_to_json(v: &Q) -> Value {
    Value::Array(vec![big_to_value(v.numer()), big_to_value(v.denom())])
}

fn value_to_big(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.to_string().parse().ok(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

/// Accepts `[num, den]`, an integer, a decimal literal or a `"p/q"` string.
pub fn q_from_json(v: &Value) -> Option<Q> {
    match v {
        Value::Array(items) if items.len() == 2 => {
            let n = value_to_big(&items[0])?;
            let d = value_to_big(&items[1])?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        Value::Number(n) => {
            let s = n.to_string();
            if let Ok(i) = s.parse::<BigInt>() {
                Some(Q::from_integer(i))
            } else {
                parse_decimal(&s)
            }
        }
        Value::String(s) => parse_q_str(s),
        _ => None,
    }
}

pub fn parse_q_str(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Ok(i) = s.parse::<BigInt>() {
        return Some(Q::from_integer(i));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Option<Q> {
    if s.contains(['e', 'E']) {
        let f: f64 = s.parse().ok()?;
        return Q::from_float(f);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (ip, fp) = body.split_once('.')?;
    let digits = format!("{ip}{fp}");
    let n: BigInt = digits.parse().ok()?;
    let d = num::pow(BigInt::from(10), fp.len());
    let v = Q::new(n, d);
    Some(if neg { -v } else { v })
}

/// Serde adapter for a single rational stored as `[num, den]`.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
        q_to_json(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let v = Value::deserialize(d)?;
        q_from_json(&v).ok_or_else(|| D::Error::custom(format!("not a rational: {v}")))
    }
}

pub mod serde_q_opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(q) => q_to_json(q).serialize(s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        let v = Value::deserialize(d)?;
        if v.is_null() {
            return Ok(None);
        }
        q_from_json(&v).map(Some).ok_or_else(|| D::Error::custom(format!("not a rational: {v}")))
    }
}

pub mod serde_qvec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        Value::Array(v.iter().map(q_to_json).collect()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let v = Value::deserialize(d)?;
        let arr = v.as_array().ok_or_else(|| D::Error::custom("expected an array of rationals"))?;
        arr.iter().map(|x| q_from_json(x).ok_or_else(|| D::Error::custom(format!("not a rational: {x}")))).collect()
    }
}

pub mod serde_qvecs {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        Value::Array(v.iter().map(|p| Value::Array(p.iter().map(q_to_json).collect())).collect()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
        let v = Value::deserialize(d)?;
        let arr = v.as_array().ok_or_else(|| D::Error::custom("expected an array of points"))?;
        arr.iter()
            .map(|p| {
                let coords = p.as_array().ok_or_else(|| D::Error::custom("expected a point"))?;
                coords
                    .iter()
                    .map(|x| q_from_json(x).ok_or_else(|| D::Error::custom(format!("not a rational: {x}"))))
                    .collect()
            })
            .collect()
    }
}
