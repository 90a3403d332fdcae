//! Filtered homological algebra over Novikov rings, with the index theory
//! and model symplectic geometry that feed it.
//!
//! The crate has two halves. The exact half works over an arbitrary exact
//! rational scalar (see [`scalar::Exact`]): Novikov-ring arithmetic,
//! filtered complexes with energy levels, their spectral sequences,
//! mapping-cone exact triangles, and truncated A-infinity algebra with
//! Maurer-Cartan solving. The numeric half works over any float (see
//! [`scalar::Real`]): Maslov-type indices of sampled Lagrangian paths and
//! a numerically verified model Dehn twist on `T*S^n`.
//!
//! The aliases below fix the concrete scalars used by the CLI and the test
//! suites: arbitrary-precision rationals for the algebra, `f64` for the
//! geometry.

pub mod scalar;

pub mod novikov;

pub mod filtered;

pub mod anchored;

pub mod elimination;

pub mod spectral;

pub mod triangle;

pub mod ainfty;

pub mod bimodule;

pub mod maslov;

pub mod dims;

pub mod dehn;

pub mod fixtures;

pub use num_rational::BigRational;

/// Exact rational scalar used throughout the CLI and fixtures.
pub type Rat = BigRational;

/// Novikov scalar over arbitrary-precision rationals.
pub type Nov = novikov::NovikovScalar<Rat>;

/// Covering-group element over arbitrary-precision rationals.
pub type PiElement = novikov::PiGroupElement<Rat>;

/// Filtered complex over arbitrary-precision rationals.
pub type Complex = filtered::FilteredComplex<Rat>;

/// Filtered map over arbitrary-precision rationals.
pub type Map = filtered::FilteredMap<Rat>;

/// Double-precision cotangent point of `T*S^n`.
pub type CotangentPoint = dehn::CotangentPoint<f64>;

/// Double-precision twist profile.
pub type TwistProfile = dehn::TwistProfile<f64>;

/// Double-precision sampled Lagrangian path.
pub type LagrangianPath = maslov::LagrangianPath<f64>;

/// Convenience constructor for exact rationals.
pub fn rat(numer: i64, denom: i64) -> Rat {
    use scalar::Exact;
    Rat::from_ratio(numer, denom)
}
