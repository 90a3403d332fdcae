//! Dimension and index formulas for punctured-plane and disc moduli.
//!
//! Two modes for the punctured-plane dimension at a closed geodesic orbit:
//!
//! * `CZ`: `(−μ_CZ + n/2) + (n − 3) + 2c₁`, with the generalized index
//!   `μ_CZ` a half-integer (stored doubled);
//! * `MorseBott`: `−Morse(γ) + (n − 3) + 2c₁`.
//!
//! The conversion used here is `μ_CZ = Morse + n/2`, which makes the two
//! modes agree identically. A negative dimension yields the verdict that
//! the moduli space is empty for generic data; with `c₁ = 0` and
//! `Morse ≥ n − 1` (simple geodesics and their multiples) the dimension is
//! always at most `−2`.
//!
//! For discs with `k + 1` boundary marked points the dimension is
//! `n + μ(β) + k − 2`, and in the rigid case the boundary-index identity
//! `μ_out − 1 = 1 + Σ (μ_in − 1)` must hold.

/// Input of the punctured-plane dimension computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitIndex {
    /// Generalized index, doubled to stay integral.
    CzDoubled(i64),
    /// Morse index of the underlying geodesic.
    Morse(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SftDimension {
    pub dimension: i64,
    /// True when the dimension is negative, so the moduli space is empty
    /// for generic almost complex structures.
    pub empty_for_generic: bool,
}

/// Doubled generalized index of a geodesic orbit from its Morse index:
/// `μ_CZ = Morse + n/2`.
pub fn cz_doubled_from_morse(n: i64, morse: i64) -> i64 {
    2 * morse + n
}

/// Expected dimension of the punctured-plane moduli at an orbit over the
/// `n`-sphere, with relative Chern number `c1`.
///
/// Panics if the `CZ` input parity is inconsistent with `n` (the doubled
/// index must have the parity of `n`).
pub fn sft_dimension(n: i64, index: OrbitIndex, c1: i64) -> SftDimension {
    let dimension = match index {
        OrbitIndex::CzDoubled(cz2) => {
            assert!(
                (cz2 - n).rem_euclid(2) == 0,
                "doubled index {cz2} has wrong parity for n = {n}"
            );
            (-cz2 + n) / 2 + (n - 3) + 2 * c1
        }
        OrbitIndex::Morse(m) => -m + (n - 3) + 2 * c1,
    };
    SftDimension { dimension, empty_for_generic: dimension < 0 }
}

/// Dimension of the disc moduli with one output and `k` input marked
/// points in a class of boundary index `mu`: `n + mu + k − 2`.
pub fn disc_moduli_dimension(n: i64, mu: i64, k: i64) -> i64 {
    n + mu + k - 2
}

/// Boundary-index identity for rigid polygons: the output index satisfies
/// `μ_out − 1 = 1 + Σ (μ_in − 1)`.
pub fn degree_identity_holds(mu_out: i64, mu_in: &[i64]) -> bool {
    mu_out - 1 == 1 + mu_in.iter().map(|m| m - 1).sum::<i64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_geodesic_dimension_is_minus_two() {
        for n in 2..=6 {
            let d = sft_dimension(n, OrbitIndex::Morse(n - 1), 0);
            assert_eq!(d.dimension, -2);
            assert!(d.empty_for_generic);
        }
    }

    #[test]
    fn multiple_geodesics_are_more_negative() {
        for n in 2..=6 {
            for extra in 1..=4 {
                let d = sft_dimension(n, OrbitIndex::Morse(n - 1 + extra), 0);
                assert!(d.dimension < -2);
            }
        }
    }

    #[test]
    fn modes_agree_under_the_conversion() {
        for n in 1..=6 {
            for morse in 0..=8 {
                for c1 in -2..=2 {
                    let via_morse = sft_dimension(n, OrbitIndex::Morse(morse), c1);
                    let cz2 = cz_doubled_from_morse(n, morse);
                    let via_cz = sft_dimension(n, OrbitIndex::CzDoubled(cz2), c1);
                    assert_eq!(via_morse, via_cz);
                }
            }
        }
    }

    #[test]
    fn positive_dimension_case() {
        // c₁ = 2, n = 2, Morse = 1: −1 + (−1) + 4 = 2.
        let d = sft_dimension(2, OrbitIndex::Morse(1), 2);
        assert_eq!(d.dimension, 2);
        assert!(!d.empty_for_generic);
    }

    #[test]
    fn disc_dimension_values() {
        assert_eq!(disc_moduli_dimension(2, 0, 2), 2);
        assert_eq!(disc_moduli_dimension(3, 0, 1), 2);
        assert_eq!(disc_moduli_dimension(4, -3, 1), 0);
    }

    #[test]
    fn degree_identity() {
        // μ_out = 2 + Σ(μ_in − 1): e.g. inputs (1, 1) give μ_out = 2.
        assert!(degree_identity_holds(2, &[1, 1]));
        assert!(degree_identity_holds(1, &[0, 1, 1]));
        assert!(!degree_identity_holds(2, &[1, 2]));
    }
}
