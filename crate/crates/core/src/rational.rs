//! Exact non-negative rational weights.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{check_dims, Error, Result};
use crate::relation::VertexSet;

pub type Rational = num_rational::BigRational;

/// Builds `num/den` as an exact rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses "7", "1/3" or "0". Negative values and zero denominators are rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    if let Some((_, den)) = trimmed.split_once('/') {
        if den
            .trim()
            .parse::<BigInt>()
            .map(|d| d.is_zero())
            .unwrap_or(false)
        {
            return Err(Error::InvalidWeight(format!(
                "zero denominator in {text:?}"
            )));
        }
    }
    let value = Rational::from_str(trimmed)
        .map_err(|_| Error::InvalidWeight(format!("not a rational: {text:?}")))?;
    if value.is_negative() {
        return Err(Error::InvalidWeight(format!("negative weight {text:?}")));
    }
    Ok(value)
}

pub fn serialize_rational<S: Serializer>(
    value: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

pub fn serialize_rationals<S: Serializer>(
    values: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(|v| v.to_string()))
}

/// A length-n vector of exact non-negative weights, one per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if let Some((v, w)) = values.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(Error::InvalidWeight(format!(
                "weight of vertex {} is negative ({w})",
                v + 1
            )));
        }
        Ok(Self(values))
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![Rational::one(); n])
    }

    pub fn from_integers(values: &[u64]) -> Self {
        Self(
            values
                .iter()
                .map(|&w| Rational::from_integer(BigInt::from(w)))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_all_ones(&self) -> bool {
        self.0.iter().all(|w| w.is_one())
    }

    pub fn total(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, w| acc + w)
    }

    /// Total weight of the members of `set`.
    pub fn weight_of(&self, set: &VertexSet) -> Result<Rational> {
        check_dims(self.len(), set.universe())?;
        Ok(set.iter().fold(Rational::zero(), |acc, v| acc + &self.0[v]))
    }

    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        Self::new(self.0.iter().map(|w| w * factor).collect())
    }

    /// Integer copy counts, if every weight is a whole number.
    pub fn as_integers(&self) -> Option<Vec<u64>> {
        self.0
            .iter()
            .map(|w| {
                if w.is_integer() {
                    w.to_integer().to_u64()
                } else {
                    None
                }
            })
            .collect()
    }

    /// The smallest positive multiple of `self` with integer entries whose gcd is 1.
    pub fn to_primitive_integers(&self) -> Option<Vec<u64>> {
        if self.0.iter().all(Zero::is_zero) {
            return None;
        }
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|w| (w * &lcm).to_integer()).collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        ints.iter().map(|x| (x / &gcd).to_u64()).collect()
    }
}

impl Index<usize> for WeightVector {
    type Output = Rational;

    fn index(&self, v: usize) -> &Rational {
        &self.0[v]
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for WeightVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_rationals(&self.0, s)
    }
}
