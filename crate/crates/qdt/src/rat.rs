//! Exact rational arithmetic and its `"a/b"` wire format.
//!
//! Every quantity the checkers compare — averages, Kraft sums, distances —
//! is an exact rational. Floating point would turn tight inequalities like
//! `p(x,z) <= p(x,y) + p(y,z) - p(y,y)` into approximate ones and silently
//! change verdicts, so `f64` never appears in any law check.

use num_rational::Ratio;
use std::fmt;

/// Exact rational scalar used throughout the crate.
///
/// `i64` components are plenty: path lengths are capped well below 63 bits
/// (see [`crate::treecore::MAX_DEPTH`]), and averages over `n!` traces stay
/// within range for every size the tooling accepts.
pub type Rat = Ratio<i64>;

/// Shorthand for `n/d` in lowest terms.
///
/// # Panics
///
/// Panics if `d == 0` (same as `Ratio::new`).
pub fn rat(n: i64, d: i64) -> Rat {
    Ratio::new(n, d)
}

/// Shorthand for the integer rational `n/1`.
pub fn rat_int(n: i64) -> Rat {
    Ratio::from_integer(n)
}

/// Renders a rational as `"a/b"`, lowest terms, denominator positive.
///
/// Integers keep the explicit `"/1"` so the format is uniform and
/// position-independent parsers stay trivial.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Error from [`parse_rat`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseRatError {
    input: String,
    reason: &'static str,
}

impl fmt::Display for ParseRatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?}: {}", self.input, self.reason)
    }
}

impl std::error::Error for ParseRatError {}

/// Parses `"a/b"` (or a bare integer `"a"`) into a rational.
///
/// Whitespace around either component is rejected; the wire format is
/// exactly what [`format_rat`] emits, plus bare integers for convenience.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let err = |reason| ParseRatError {
        input: s.to_string(),
        reason,
    };
    match s.split_once('/') {
        None => {
            let n: i64 = s.parse().map_err(|_| err("expected an integer"))?;
            Ok(Ratio::from_integer(n))
        }
        Some((num, den)) => {
            let n: i64 = num.parse().map_err(|_| err("numerator is not an integer"))?;
            let d: i64 = den.parse().map_err(|_| err("denominator is not an integer"))?;
            if d == 0 {
                return Err(err("denominator is zero"));
            }
            Ok(Ratio::new(n, d))
        }
    }
}

/// Serde adapter serializing a [`Rat`] field as the `"a/b"` string.
///
/// ```
/// # use qdt::rat::{self, Rat};
/// # use serde::{Serialize, Deserialize};
/// #[derive(Serialize, Deserialize)]
/// struct Report {
///     #[serde(with = "rat::rat_string")]
///     average: Rat,
/// }
/// ```
pub mod rat_string {
    use super::{format_rat, parse_rat, Rat};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(de)?;
        parse_rat(&s).map_err(de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rat>` fields (each entry an `"a/b"` string).
pub mod rat_vec {
    use super::{format_rat, parse_rat, Rat};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(v.iter().map(format_rat))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Rat>, D::Error> {
        let raw = Vec::<String>::deserialize(de)?;
        raw.iter()
            .map(|s| parse_rat(s).map_err(de::Error::custom))
            .collect()
    }
}

/// Serde adapter for `Vec<Vec<Rat>>` fields (matrices of `"a/b"` strings).
pub mod rat_matrix {
    use super::{format_rat, parse_rat, Rat};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Rat>], ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(
            m.iter()
                .map(|row| row.iter().map(format_rat).collect::<Vec<_>>()),
        )
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(de)?;
        raw.iter()
            .map(|row| {
                row.iter()
                    .map(|s| parse_rat(s).map_err(de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Serde adapter for `Option<Vec<Rat>>` fields.
pub mod rat_vec_opt {
    use super::{format_rat, parse_rat, Rat};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rat>>, ser: S) -> Result<S::Ok, S::Error> {
        match v {
            None => ser.serialize_none(),
            Some(v) => ser.collect_seq(v.iter().map(format_rat)),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> Result<Option<Vec<Rat>>, D::Error> {
        let raw = Option::<Vec<String>>::deserialize(de)?;
        raw.map(|v| {
            v.iter()
                .map(|s| parse_rat(s).map_err(de::Error::custom))
                .collect()
        })
        .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_is_lowest_terms_positive_denominator() {
        assert_eq!(format_rat(&rat(6, 4)), "3/2");
        assert_eq!(format_rat(&rat(1, -2)), "-1/2");
        assert_eq!(format_rat(&rat(-3, -9)), "1/3");
        assert_eq!(format_rat(&rat_int(5)), "5/1");
        assert_eq!(format_rat(&rat_int(0)), "0/1");
    }

    #[test]
    fn parse_accepts_fractions_and_integers() {
        assert_eq!(parse_rat("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rat("-3/2").unwrap(), rat(-3, 2));
        assert_eq!(parse_rat("3/-2").unwrap(), rat(-3, 2));
        assert_eq!(parse_rat("7").unwrap(), rat_int(7));
        assert_eq!(parse_rat("0/5").unwrap(), rat_int(0));
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "a/b", "1/0", "1/", "/2", "1.5", " 1/2", "1 / 2"] {
            assert!(parse_rat(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn round_trip_through_wire_format() {
        for (n, d) in [(0, 1), (14, 3), (-7, 2), (59, 12), (1, 1 << 40)] {
            let r = rat(n, d);
            assert_eq!(parse_rat(&format_rat(&r)).unwrap(), r);
        }
    }
}
