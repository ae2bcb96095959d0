//! Scalar field abstraction.
//!
//! Every algorithm in this crate is written against [`Field`], an ordered
//! field with exact arithmetic. The decision procedures compare values with
//! `==` and `<`, so only exact types are admitted: floating point types do
//! not implement the trait.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, Signed};

/// An exact ordered field.
pub trait Field:
    Clone + Debug + Display + Ord + Hash + Num + Signed + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;

    /// Parses `"p/q"` or `"p"`.
    fn parse_rational(s: &str) -> Option<Self>;

    fn two() -> Self {
        Self::from_i64(2)
    }

    fn half() -> Self {
        Self::one() / Self::two()
    }
}

impl<T> Field for Ratio<T>
where
    T: Clone
        + Integer
        + Signed
        + Hash
        + Debug
        + Display
        + std::str::FromStr
        + From<i64>
        + Send
        + Sync
        + 'static,
{
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(T::from(v))
    }

    fn parse_rational(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: T = p.trim().parse().ok()?;
                let q: T = q.trim().parse().ok()?;
                if q.is_zero() {
                    return None;
                }
                Some(Ratio::new(p, q))
            }
            None => s.parse::<T>().ok().map(Ratio::from_integer),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type Q = Ratio<BigInt>;

    #[test]
    fn lowest_terms_and_display() {
        let a = Q::parse_rational("4/-6").unwrap();
        assert_eq!(a.to_string(), "-2/3");
        assert_eq!(Q::parse_rational("5").unwrap().to_string(), "5");
        assert_eq!(Q::parse_rational("10/5").unwrap().to_string(), "2");
        assert!(Q::parse_rational("1/0").is_none());
        assert!(Q::parse_rational("x").is_none());
    }

    #[test]
    fn exact_sum() {
        let a = Q::parse_rational("1/3").unwrap();
        let b = Q::parse_rational("1/6").unwrap();
        assert_eq!(a + b, Q::half());
    }

    #[test]
    fn small_ratio_is_a_field() {
        let a = Ratio::<i64>::from_i64(3);
        assert_eq!(a / Ratio::<i64>::from_i64(6), Ratio::<i64>::half());
    }
}
