//! Exact rational scalars and the serialization conventions shared by every
//! JSON surface of the crate.
//!
//! All geometry in this crate is exact: coordinates, linear-form values and
//! polynomial exponents are `Rat` ([`num_rational::Rational64`]) end to end.
//! On the wire, a rational is a plain JSON number when it is an integer and a
//! `"p/q"` string otherwise, so goldens stay diff-able.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

pub type Rat = Rational64;

/// Least common multiple of the denominators of `coords`, always >= 1.
pub fn denominator_lcm(coords: &[Rat]) -> i64 {
    coords.iter().fold(1i64, |acc, c| acc.lcm(c.denom()))
}

/// Fractional part in `[0, 1)`.
pub fn fractional(r: Rat) -> Rat {
    let f = r - r.floor();
    debug_assert!(!f.is_negative() && f < Rat::from_integer(1));
    f
}

pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<i64, Error> {
        t.trim()
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("invalid rational `{s}`")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let denom = parse_int(q)?;
            if denom == 0 {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rat::new(parse_int(p)?, denom))
        }
    }
}

pub fn parse_rat_list(s: &str) -> Result<Vec<Rat>, Error> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rat).collect()
}

pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter: integer rationals as JSON numbers, others as `"p/q"` strings.
pub mod rat_flexible {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Str(String),
    }

    pub fn serialize<S: Serializer>(r: &Rat, ser: S) -> Result<S::Ok, S::Error> {
        if r.is_integer() {
            ser.serialize_i64(*r.numer())
        } else {
            ser.serialize_str(&format_rat(r))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rat, D::Error> {
        match Repr::deserialize(de)? {
            Repr::Int(n) => Ok(Rat::from_integer(n)),
            Repr::Str(s) => parse_rat(&s).map_err(D::Error::custom),
        }
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Rat], ser: S) -> Result<S::Ok, S::Error> {
            #[derive(Serialize)]
            struct Wrap<'a>(#[serde(with = "super::super::rat_flexible")] &'a Rat);
            ser.collect_seq(v.iter().map(Wrap))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Rat>, D::Error> {
            #[derive(Deserialize)]
            struct Wrap(#[serde(with = "super::super::rat_flexible")] Rat);
            Ok(Vec::<Wrap>::deserialize(de)?
                .into_iter()
                .map(|w| w.0)
                .collect())
        }
    }
}

/// Serde adapter: rationals always as strings (used for inequality bounds).
pub mod rat_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(de)?;
        parse_rat(&s).map_err(D::Error::custom)
    }
}

/// Decimal rendering for mesh export: exact when the denominator divides a
/// power of ten, otherwise rounded to 12 places. Deterministic either way.
pub fn decimal_string(r: &Rat) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let a = r.abs();
    let int = a.floor().to_integer();
    let mut frac = a - a.floor();
    let mut digits = String::new();
    for _ in 0..12 {
        if frac.is_zero() {
            break;
        }
        frac *= Rat::from_integer(10);
        let d = frac.floor().to_integer();
        digits.push(char::from(b'0' + d as u8));
        frac -= frac.floor();
    }
    if digits.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{digits}")
    }
}
