//! Exact rational scalars and their textual form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

pub type Rat = BigRational;

/// A vector in a concrete Riesz space.
pub type RVec = Vec<Rat>;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rat {
    Rat::from_integer(BigInt::from(value))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn zeros(n: usize) -> RVec {
    vec![Rat::zero(); n]
}

pub fn ones(n: usize) -> RVec {
    vec![Rat::one(); n]
}

/// `p/q` with `q > 0`; integers print without a denominator.
pub fn to_string(value: &Rat) -> String {
    value.to_string()
}

pub fn vec_to_strings(values: &[Rat]) -> Vec<String> {
    values.iter().map(to_string).collect()
}

pub fn parse(text: &str) -> Option<Rat> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
        None => text.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

pub fn abs(value: &Rat) -> Rat {
    value.abs()
}

pub fn serialize<S: Serializer>(value: &Rat, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&to_string(value))
}

pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rat, D::Error> {
    let text = String::deserialize(deserializer)?;
    parse(&text).ok_or_else(|| serde::de::Error::custom(format!("not a rational: {text}")))
}

/// Serde adapters for `Vec<Rat>`.
pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(values: &[Rat], serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&to_string(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<Rat>, D::Error> {
        let texts = Vec::<String>::deserialize(deserializer)?;
        texts
            .iter()
            .map(|t| parse(t).ok_or_else(|| serde::de::Error::custom(format!("not a rational: {t}"))))
            .collect()
    }
}

/// Serde adapters for `Vec<Vec<Rat>>`.
pub mod matrix {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(rows: &[Vec<Rat>], serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(rows.len()))?;
        for row in rows {
            seq.serialize_element(&vec_to_strings(row))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        assert_eq!(to_string(&rat(6, -4)), "-3/2");
        assert_eq!(to_string(&int(3)), "3");
        assert_eq!(parse("7/3"), Some(rat(7, 3)));
        assert_eq!(parse(" -2 "), Some(int(-2)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
    }
}
