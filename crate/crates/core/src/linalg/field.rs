use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::LinalgError;

/// The ground field every matrix in a computation lives over.
///
/// Rationals are the default. A prime field trades generality for speed; its
/// ranks are still exact, just over a different field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Field {
    #[default]
    Rational,
    Prime(u64),
}

impl Field {
    /// Builds `GF(p)`, rejecting composite or tiny moduli.
    pub fn prime(p: u64) -> Result<Self, LinalgError> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(LinalgError::NotPrime(p))
        }
    }

    pub fn zero(self) -> FieldScalar {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldScalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, x: i64) -> FieldScalar {
        match self {
            Field::Rational => FieldScalar::Rational(BigRational::from_integer(BigInt::from(x))),
            Field::Prime(p) => FieldScalar::Prime {
                value: reduce_i64(x, p),
                modulus: p,
            },
        }
    }

    /// Maps a rational into this field. Fails in `GF(p)` when `p` divides the
    /// denominator.
    pub fn from_rational(self, x: &BigRational) -> Result<FieldScalar, LinalgError> {
        match self {
            Field::Rational => Ok(FieldScalar::Rational(x.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let num = reduce_big(x.numer(), &pb);
                let den = reduce_big(x.denom(), &pb);
                if den == 0 {
                    return Err(LinalgError::DenominatorVanishes { modulus: p });
                }
                Ok(FieldScalar::Prime {
                    value: mul_mod(num, inv_mod(den, p), p),
                    modulus: p,
                })
            }
        }
    }

    /// Parses an entry literal: an integer or a `p/q` string.
    pub fn parse_scalar(self, text: &str) -> Result<FieldScalar, LinalgError> {
        let q = parse_rational(text)?;
        self.from_rational(&q)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for Field {
    type Err = LinalgError;

    /// Accepts `Q`, `GF(p)`, `GF:p` or a bare prime.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        let digits = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("GF:"))
            .unwrap_or(t);
        let p: u64 = digits
            .trim()
            .parse()
            .map_err(|_| LinalgError::BadField(s.to_string()))?;
        Field::prime(p)
    }
}

// JSON form: "Q" or {"GF": p}.
impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Gf {
            #[serde(rename = "GF")]
            gf: u64,
        }
        match self {
            Field::Rational => s.serialize_str("Q"),
            Field::Prime(p) => Gf { gf: *p }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Name(String),
            Gf {
                #[serde(rename = "GF")]
                gf: u64,
            },
        }
        match Raw::deserialize(d)? {
            Raw::Name(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Gf { gf } => Field::prime(gf).map_err(serde::de::Error::custom),
        }
    }
}

/// A single field element.
///
/// Rationals are kept in lowest terms with a positive denominator (the
/// `num-rational` invariant); prime-field values live in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

impl FieldScalar {
    pub fn field(&self) -> Field {
        match self {
            FieldScalar::Rational(_) => Field::Rational,
            FieldScalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rational(q) => q.is_zero(),
            FieldScalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Rational(q) => q.is_one(),
            FieldScalar::Prime { value, .. } => *value == 1,
        }
    }

    /// Small-integer view, when the element is an integer that fits in `i64`.
    /// Prime-field elements report their canonical representative.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            FieldScalar::Rational(q) if q.is_integer() => q.numer().to_i64(),
            FieldScalar::Rational(_) => None,
            FieldScalar::Prime { value, .. } => i64::try_from(*value).ok(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a + b),
            (
                FieldScalar::Prime { value: a, modulus },
                FieldScalar::Prime {
                    value: b,
                    modulus: m2,
                },
            ) if modulus == m2 => FieldScalar::Prime {
                value: add_mod(*a, *b, *modulus),
                modulus: *modulus,
            },
            _ => panic!("field mismatch: {} vs {}", self.field(), other.field()),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            FieldScalar::Rational(a) => FieldScalar::Rational(-a),
            FieldScalar::Prime { value, modulus } => FieldScalar::Prime {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a * b),
            (
                FieldScalar::Prime { value: a, modulus },
                FieldScalar::Prime {
                    value: b,
                    modulus: m2,
                },
            ) if modulus == m2 => FieldScalar::Prime {
                value: mul_mod(*a, *b, *modulus),
                modulus: *modulus,
            },
            _ => panic!("field mismatch: {} vs {}", self.field(), other.field()),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldScalar::Rational(a) => FieldScalar::Rational(a.recip()),
            FieldScalar::Prime { value, modulus } => FieldScalar::Prime {
                value: inv_mod(*value, *modulus),
                modulus: *modulus,
            },
        })
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            FieldScalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            FieldScalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

pub(crate) fn parse_rational(text: &str) -> Result<BigRational, LinalgError> {
    let bad = || LinalgError::BadScalar(text.to_string());
    let t = text.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

pub(crate) fn reduce_i64(x: i64, p: u64) -> u64 {
    (x as i128).rem_euclid(p as i128) as u64
}

fn reduce_big(x: &BigInt, p: &BigInt) -> u64 {
    let mut r = x % p;
    if r.is_negative() {
        r += p;
    }
    r.to_u64().expect("residue fits in u64")
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}
