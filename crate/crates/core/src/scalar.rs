//! Numeric abstraction shared by every algorithm in the crate.
//!
//! Bids, weights, costs and set-cover duals are exact by default
//! ([`Rational`](crate::Rational)), but every routine only asks for
//! [`Scalar`], so the same code runs over `f64`, `f32`, or any other
//! ordered field from `num-traits`.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Num, ToPrimitive};

/// An ordered numeric field usable as bid, weight, or dual value.
pub trait Scalar:
    Num + Clone + PartialOrd + Debug + Display + ToPrimitive + FromPrimitive + Send + Sync + 'static
{
    /// Lossy conversion used where a real-valued constant (e.g. `e^{-1/α}`)
    /// has to be compared against an exact quantity.
    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("integer fits scalar")
    }

    /// Total order used for argmax/argmin. Incomparable values (NaN) are a bug
    /// in the caller and abort loudly.
    fn cmp_total(&self, other: &Self) -> Ordering {
        self.partial_cmp(other)
            .unwrap_or_else(|| panic!("incomparable scalars {self:?} and {other:?}"))
    }
}

impl<T> Scalar for T where
    T: Num
        + Clone
        + PartialOrd
        + Debug
        + Display
        + ToPrimitive
        + FromPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Sum of a sequence of scalars.
pub fn sum<'a, T: Scalar, I: IntoIterator<Item = &'a T>>(items: I) -> T {
    items.into_iter().fold(T::zero(), |acc, x| acc + x.clone())
}

/// An extended nonnegative score: either a finite value or `+∞`.
///
/// The derived ordering places every finite value below `Infinite`.
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub enum Score<V> {
    Finite(V),
    Infinite,
}

impl<V: Scalar> Score<V> {
    pub fn zero() -> Self {
        Score::Finite(V::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Score::Finite(v) if v.is_zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Score::Infinite)
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Score::Finite(v) if *v < V::zero())
    }

    pub fn finite(&self) -> Option<&V> {
        match self {
            Score::Finite(v) => Some(v),
            Score::Infinite => None,
        }
    }

    pub fn cmp_total(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Score::Finite(a), Score::Finite(b)) => a.cmp_total(b),
            (Score::Finite(_), Score::Infinite) => Ordering::Less,
            (Score::Infinite, Score::Finite(_)) => Ordering::Greater,
            (Score::Infinite, Score::Infinite) => Ordering::Equal,
        }
    }
}

impl<V: Display> Display for Score<V> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Score::Finite(v) => write!(f, "{v}"),
            Score::Infinite => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn infinite_dominates_finite() {
        let a = Score::Finite(Rational::new(7, 2));
        assert_eq!(a.cmp_total(&Score::Infinite), Ordering::Less);
        assert!(Score::<f64>::Infinite > Score::Finite(1e300));
    }

    #[test]
    fn zero_and_negative() {
        assert!(Score::<Rational>::zero().is_zero());
        assert!(Score::Finite(Rational::new(-1, 3)).is_negative());
        assert!(!Score::<f64>::Infinite.is_zero());
    }

    #[test]
    fn rational_and_float_share_the_trait() {
        fn total<T: Scalar>(xs: &[T]) -> T {
            sum(xs)
        }
        assert_eq!(total(&[Rational::new(1, 2), Rational::new(1, 3)]), Rational::new(5, 6));
        assert_eq!(total(&[0.5f32, 0.25]), 0.75);
    }
}
