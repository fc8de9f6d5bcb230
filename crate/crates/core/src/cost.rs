//! Exact cost arithmetic.
//!
//! Every cost in the crate is a non-negative decimal with at most six
//! fractional digits, stored as an integer count of millionths. Ratios of
//! costs are kept as fractions and compared by cross-multiplication.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_integer::Integer;
use serde::{de, ser, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Number of fixed-point units per whole cost unit.
pub const SCALE: u64 = 1_000_000;
const FRACTION_DIGITS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostParseError {
    #[error("empty cost literal")]
    Empty,
    #[error("negative cost `{0}`")]
    Negative(String),
    #[error("cost `{0}` has more than 6 fractional digits")]
    TooPrecise(String),
    #[error("malformed cost literal `{0}`")]
    Malformed(String),
    #[error("cost `{0}` overflows")]
    Overflow(String),
}

/// A non-negative exact cost in units of 10^-6.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cost(u64);

impl Cost {
    pub const ZERO: Cost = Cost(0);

    pub const fn from_micros(micros: u64) -> Self {
        Cost(micros)
    }

    pub const fn from_units(units: u64) -> Self {
        Cost(units * SCALE)
    }

    pub const fn micros(self) -> u64 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// `self - rhs`, or zero when `rhs` is larger.
    pub fn saturating_sub(self, rhs: Cost) -> Cost {
        Cost(self.0.saturating_sub(rhs.0))
    }

    pub fn checked_sub(self, rhs: Cost) -> Option<Cost> {
        self.0.checked_sub(rhs.0).map(Cost)
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / SCALE as f64
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0.checked_add(rhs.0).expect("cost overflow"))
    }
}

impl AddAssign for Cost {
    fn add_assign(&mut self, rhs: Cost) {
        *self = *self + rhs;
    }
}

impl Mul<u64> for Cost {
    type Output = Cost;
    fn mul(self, rhs: u64) -> Cost {
        Cost(self.0.checked_mul(rhs).expect("cost overflow"))
    }
}

impl Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::ZERO, |acc, c| acc + c)
    }
}

impl<'a> Sum<&'a Cost> for Cost {
    fn sum<I: Iterator<Item = &'a Cost>>(iter: I) -> Cost {
        iter.copied().sum()
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let whole = self.0 / SCALE;
        let frac = self.0 % SCALE;
        if frac == 0 {
            return write!(f, "{whole}");
        }
        let digits = format!("{frac:06}");
        write!(f, "{whole}.{}", digits.trim_end_matches('0'))
    }
}

impl FromStr for Cost {
    type Err = CostParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(CostParseError::Empty);
        }
        if s.starts_with('-') {
            // "-0" and friends are still rejected: costs are written unsigned.
            return Err(CostParseError::Negative(s.to_string()));
        }
        let (whole, frac) = match s.split_once('.') {
            Some((w, f)) => (w, f),
            None => (s, ""),
        };
        let all_digits = |part: &str| part.bytes().all(|b| b.is_ascii_digit());
        if whole.is_empty()
            || !all_digits(whole)
            || !all_digits(frac)
            || (s.contains('.') && frac.is_empty())
        {
            return Err(CostParseError::Malformed(s.to_string()));
        }
        let frac = frac.trim_end_matches('0');
        if frac.len() > FRACTION_DIGITS {
            return Err(CostParseError::TooPrecise(s.to_string()));
        }
        let overflow = || CostParseError::Overflow(s.to_string());
        let whole: u64 = whole.parse().map_err(|_| overflow())?;
        let mut frac_micros = 0u64;
        for (i, b) in frac.bytes().enumerate() {
            frac_micros += u64::from(b - b'0') * 10u64.pow((FRACTION_DIGITS - 1 - i) as u32);
        }
        whole
            .checked_mul(SCALE)
            .and_then(|w| w.checked_add(frac_micros))
            .map(Cost)
            .ok_or_else(overflow)
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let number = serde_json::Number::from_str(&self.to_string()).map_err(ser::Error::custom)?;
        number.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cost {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let number = serde_json::Number::deserialize(deserializer)?;
        number.to_string().parse().map_err(de::Error::custom)
    }
}

/// An exact non-negative ratio `numerator / denominator` of a cost and a
/// positive count. Ordering is by value, computed without division.
#[derive(Debug, Clone, Copy)]
pub struct Ratio {
    numerator: Cost,
    denominator: u64,
}

impl Ratio {
    pub fn new(numerator: Cost, denominator: u64) -> Self {
        assert!(denominator > 0, "ratio with zero denominator");
        Ratio {
            numerator,
            denominator,
        }
    }

    pub fn numerator(&self) -> Cost {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Value as a reduced fraction of whole units, `(p, q)` with `q > 0`.
    pub fn reduced(&self) -> (u128, u128) {
        let p = u128::from(self.numerator.micros());
        let q = u128::from(self.denominator) * u128::from(SCALE);
        let g = p.gcd(&q);
        (p / g, q / g)
    }

    pub fn as_f64(&self) -> f64 {
        self.numerator.as_f64() / self.denominator as f64
    }

    /// Exact check that `self == p / q` for whole-unit integers.
    pub fn equals_fraction(&self, p: u128, q: u128) -> bool {
        self.reduced() == {
            let g = p.gcd(&q);
            (p / g, q / g)
        }
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = u128::from(self.numerator.micros()) * u128::from(other.denominator);
        let rhs = u128::from(other.numerator.micros()) * u128::from(self.denominator);
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = self.reduced();
        if q == 1 {
            write!(f, "{p}")
        } else {
            write!(f, "{p}/{q}")
        }
    }
}
