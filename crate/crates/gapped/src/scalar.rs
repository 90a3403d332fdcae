//! Scalar abstractions.
//!
//! Two families of scalars run through the crate:
//!
//! * [`Exact`] — exact ordered field scalars used for Novikov coefficients
//!   and energy exponents. Instantiated with arbitrary-precision rationals
//!   ([`num_rational::BigRational`]) in the crate-root aliases; `Ratio<i64>`
//!   also works for small experiments. Floats deliberately do *not*
//!   implement this trait: valuation ties and gap detection require
//!   decidable comparison.
//! * [`Real`] — floating-point scalars for the numeric geometry kernels
//!   (Lagrangian paths, the model Dehn twist). Implemented by `f32`/`f64`.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::iter::Sum;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FromPrimitive, Num, NumAssign, Signed};

/// An exact ordered field scalar: rational arithmetic with decidable
/// comparison, hashing for term keys, and a canonical `p/q` string form.
pub trait Exact: Clone + Eq + Ord + Hash + Debug + Display + Signed + Num {
    /// Builds the scalar from an integer ratio. `denom` must be nonzero.
    fn from_ratio(numer: i64, denom: i64) -> Self;

    /// Parses the `p/q` (or plain `p`) string form. Returns `None` on
    /// malformed input or zero denominator.
    fn parse_ratio(s: &str) -> Option<Self>;

    /// Exact conversion into an arbitrary-precision rational, used by the
    /// lattice arithmetic (gcd of energies, group membership).
    fn to_big_rational(&self) -> BigRational;

    /// Canonical string form: `p` when the denominator is one, `p/q`
    /// otherwise. Round-trips exactly through [`Exact::parse_ratio`].
    fn format_ratio(&self) -> String {
        format!("{}", self)
    }

    fn from_i64(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
}

impl Exact for BigRational {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn parse_ratio(s: &str) -> Option<Self> {
        parse_ratio_parts(s, |n, d| {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d == BigInt::from(0) {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        })
    }

    fn to_big_rational(&self) -> BigRational {
        self.clone()
    }
}

impl Exact for Ratio<i64> {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(numer, denom)
    }

    fn parse_ratio(s: &str) -> Option<Self> {
        parse_ratio_parts(s, |n, d| {
            let n: i64 = n.parse().ok()?;
            let d: i64 = d.parse().ok()?;
            if d == 0 {
                None
            } else {
                Some(Ratio::new(n, d))
            }
        })
    }

    fn to_big_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

fn parse_ratio_parts<T>(s: &str, build: impl FnOnce(&str, &str) -> Option<T>) -> Option<T> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => build(n.trim(), d.trim()),
        None => build(s, "1"),
    }
}

/// Floating-point scalar for the numeric geometry kernels.
pub trait Real: Float + FromPrimitive + NumAssign + Debug + Display + Sum {
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        let x = BigRational::parse_ratio("-3/4").unwrap();
        assert_eq!(x, BigRational::from_ratio(-3, 4));
        assert_eq!(x.format_ratio(), "-3/4");
        let y = BigRational::parse_ratio("5").unwrap();
        assert_eq!(y.format_ratio(), "5");
        assert!(BigRational::parse_ratio("1/0").is_none());
        assert!(BigRational::parse_ratio("a/b").is_none());
    }

    #[test]
    fn small_ratio_backend() {
        let x = Ratio::<i64>::parse_ratio("7/2").unwrap();
        assert_eq!(x.to_big_rational(), BigRational::from_ratio(7, 2));
    }
}
