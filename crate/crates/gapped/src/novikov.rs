//! Arithmetic in the universal Novikov ring and its subrings.
//!
//! A scalar is a finite, cap-truncated formal sum `Σ aᵢ T^{λᵢ} e^{kᵢ/2}`
//! with exact rational coefficients `aᵢ` and energies `λᵢ`, and integer
//! half-exponents `kᵢ`. The symbol `e` has degree 2, so a term with
//! half-exponent `k` contributes `k` to the cohomological degree; whole
//! powers `e^μ` correspond to even `k = 2μ`. Storing the doubled exponent
//! keeps the `e^{μ/2}` factors of the covering-group embedding on the
//! integer lattice.
//!
//! A value with `cap = Some(c)` is exact below energy `c`: terms with
//! `λ ≥ c` are unknown and are dropped. Operations propagate caps so that
//! the result is never claimed exact beyond what the inputs support;
//! in particular division lowers the cap by the valuation of the divisor.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::Exact;

/// One term `c · T^λ · e^{k/2}` of a Novikov scalar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term<R> {
    pub coeff: R,
    pub energy: R,
    /// Doubled exponent of `e`; even values are whole powers.
    pub index: i64,
}

/// Errors raised by Novikov arithmetic.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum NovikovError {
    #[error("division by zero in the Novikov ring")]
    ZeroDivision,
    #[error("leading energy slice is not a single invertible term")]
    NonInvertibleLeading,
    #[error("whole-power embedding requires an even covering index")]
    OddIndex,
    #[error("scalar terms must be strictly sorted by (energy, index): {0}")]
    Unsorted(String),
    #[error("serialized term has a half-integer e-exponent and no wire form")]
    HalfExponent,
}

/// Cap-truncated element of the universal Novikov ring over `R`.
///
/// Invariants: terms strictly sorted by `(energy, index)`, no zero
/// coefficients, every energy below the cap when one is set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NovikovScalar<R: Exact> {
    terms: Vec<Term<R>>,
    cap: Option<R>,
}

impl<R: Exact> NovikovScalar<R> {
    pub fn zero() -> Self {
        NovikovScalar { terms: Vec::new(), cap: None }
    }

    pub fn one() -> Self {
        Self::monomial(R::one(), R::zero(), 0)
    }

    /// Single term `c · T^λ · e^{index/2}`.
    pub fn monomial(coeff: R, energy: R, index: i64) -> Self {
        let mut s = NovikovScalar { terms: vec![Term { coeff, energy, index }], cap: None };
        s.normalize();
        s
    }

    /// `c · T^λ · e^μ` with a whole power of `e`.
    pub fn whole(coeff: R, energy: R, mu: i64) -> Self {
        Self::monomial(coeff, energy, 2 * mu)
    }

    pub fn from_rational(c: R) -> Self {
        Self::monomial(c, R::zero(), 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(R::from_i64(n))
    }

    /// Builds a scalar from raw terms (merged and sorted) and a cap.
    pub fn from_terms(terms: Vec<Term<R>>, cap: Option<R>) -> Self {
        let mut s = NovikovScalar { terms, cap };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        self.terms.sort_by(|a, b| (&a.energy, a.index).cmp(&(&b.energy, b.index)));
        let mut merged: Vec<Term<R>> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.energy == t.energy && last.index == t.index => {
                    last.coeff = last.coeff.clone() + t.coeff;
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        if let Some(c) = &self.cap {
            merged.retain(|t| &t.energy < c);
        }
        self.terms = merged;
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term<R>] {
        &self.terms
    }

    pub fn cap(&self) -> Option<&R> {
        self.cap.as_ref()
    }

    /// Valuation `𝔳`: energy of the leading term, `None` (`+∞`) for zero.
    pub fn valuation(&self) -> Option<R> {
        self.terms.first().map(|t| t.energy.clone())
    }

    /// True when every term has `𝔳 ≥ 0`.
    pub fn in_valuation_ring(&self) -> bool {
        self.terms.iter().all(|t| !t.energy.is_negative())
    }

    /// True when every term has `𝔳 > 0`.
    pub fn in_maximal_ideal(&self) -> bool {
        self.terms.iter().all(|t| t.energy.is_positive())
    }

    /// Restricts to terms with energy below `cap` and records the cap.
    pub fn truncate(&self, cap: R) -> Self {
        let new_cap = match &self.cap {
            Some(c) if c < &cap => c.clone(),
            _ => cap,
        };
        let mut s = self.clone();
        s.cap = Some(new_cap);
        s.normalize();
        s
    }

    /// Forgets the cap without changing the terms.
    pub fn with_cap(mut self, cap: Option<R>) -> Self {
        self.cap = cap;
        self.normalize();
        self
    }

    pub fn neg(&self) -> Self {
        NovikovScalar {
            terms: self
                .terms
                .iter()
                .map(|t| Term { coeff: -t.coeff.clone(), energy: t.energy.clone(), index: t.index })
                .collect(),
            cap: self.cap.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let cap = min_cap(self.cap.clone(), other.cap.clone());
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(terms, cap)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Convolution product `T^λ e^{k/2} · T^{λ'} e^{k'/2} = T^{λ+λ'} e^{(k+k')/2}`.
    ///
    /// The result cap is `min(cap(a) + 𝔳(b), cap(b) + 𝔳(a))`: the unknown
    /// tail of one factor enters the product shifted by the valuation of
    /// the other.
    pub fn mul(&self, other: &Self) -> Self {
        let cap = min_cap(
            shift_cap(self.cap.clone(), other.valuation()),
            shift_cap(other.cap.clone(), self.valuation()),
        );
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let energy = a.energy.clone() + b.energy.clone();
                if let Some(c) = &cap {
                    if &energy >= c {
                        continue;
                    }
                }
                terms.push(Term {
                    coeff: a.coeff.clone() * b.coeff.clone(),
                    energy,
                    index: a.index + b.index,
                });
            }
        }
        Self::from_terms(terms, cap)
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return NovikovScalar { terms: Vec::new(), cap: self.cap.clone() };
        }
        NovikovScalar {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff.clone() * c.clone(),
                    energy: t.energy.clone(),
                    index: t.index,
                })
                .collect(),
            cap: self.cap.clone(),
        }
    }

    /// Multiplication by the monomial `T^λ e^{k/2}`.
    pub fn shift(&self, energy: &R, index: i64) -> Self {
        self.mul(&Self::monomial(R::one(), energy.clone(), index))
    }

    /// Truncated inverse: `b` with `a · b ≡ 1` below `cap`.
    ///
    /// Requires the leading energy slice of `a` to consist of a single term
    /// (an `e`-monomial); the rest is handled by a geometric series. When
    /// `a` itself carries a cap, the result cap is clamped to the depth the
    /// input supports, `cap(a) − 2𝔳(a)`.
    pub fn invert(&self, cap: &R) -> Result<Self, NovikovError> {
        let lead = self.terms.first().ok_or(NovikovError::ZeroDivision)?.clone();
        if self.terms.iter().skip(1).any(|t| t.energy == lead.energy) {
            return Err(NovikovError::NonInvertibleLeading);
        }
        let result_cap = match &self.cap {
            Some(ca) => {
                let supported = ca.clone() - lead.energy.clone() - lead.energy.clone();
                if supported < *cap {
                    supported
                } else {
                    cap.clone()
                }
            }
            None => cap.clone(),
        };
        let lead_inv = Self::monomial(
            R::one() / lead.coeff.clone(),
            -lead.energy.clone(),
            -lead.index,
        );
        // a = lead · (1 + x) with 𝔳(x) > 0; a⁻¹ = lead⁻¹ · Σ (−x)^j.
        let x = lead_inv.mul(self).sub(&Self::one());
        let series_cap = result_cap.clone() + lead.energy.clone();
        let mut sum = Self::one().truncate(series_cap.clone());
        let mut power = Self::one().truncate(series_cap.clone());
        if let Some(v) = x.valuation() {
            debug_assert!(v.is_positive());
            let mut depth = v.clone();
            let neg_x = x.neg();
            while depth < series_cap {
                power = power.mul(&neg_x);
                sum = sum.add(&power);
                depth = depth + v.clone();
            }
        }
        Ok(lead_inv.mul(&sum).truncate(result_cap).with_cap_keep(cap))
    }

    fn with_cap_keep(mut self, requested: &R) -> Self {
        if self.cap.is_none() || self.cap.as_ref() == Some(requested) {
            self.cap = Some(requested.clone());
            self.normalize();
        }
        self
    }

    /// Truncated division `self / other`.
    pub fn div(&self, other: &Self, cap: &R) -> Result<Self, NovikovError> {
        Ok(self.mul(&other.invert(cap)?))
    }

    /// Forgets the `e`-grading by setting every half-exponent to zero.
    ///
    /// Valid on scalars whose terms have pairwise distinct energies (which
    /// holds for differential entries, where the exponent is forced by the
    /// endpoint degrees); merging collisions would silently add coefficients.
    pub fn strip_index(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| Term { coeff: t.coeff.clone(), energy: t.energy.clone(), index: 0 })
                .collect(),
            self.cap.clone(),
        )
    }

    /// Leading coefficient of the energy-zero slice when the scalar has no
    /// negative-energy part; used for residue computations.
    pub fn residue(&self) -> R {
        self.terms
            .iter()
            .find(|t| t.energy.is_zero())
            .map(|t| t.coeff.clone())
            .unwrap_or_else(R::zero)
    }
}

fn min_cap<R: Exact>(a: Option<R>, b: Option<R>) -> Option<R> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x < y { x } else { y }),
        (Some(x), None) => Some(x),
        (None, y) => y,
    }
}

/// `cap + 𝔳`; a `None` in either slot means `+∞`.
fn shift_cap<R: Exact>(cap: Option<R>, valuation: Option<R>) -> Option<R> {
    match (cap, valuation) {
        (Some(c), Some(v)) => Some(c + v),
        _ => None,
    }
}

impl<R: Exact> fmt::Display for NovikovScalar<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        } else {
            for (i, t) in self.terms.iter().enumerate() {
                if i > 0 {
                    write!(f, " + ")?;
                }
                write!(f, "{}", t.coeff.format_ratio())?;
                if !t.energy.is_zero() {
                    write!(f, "*T^{}", t.energy.format_ratio())?;
                }
                if t.index != 0 {
                    if t.index % 2 == 0 {
                        write!(f, "*e^{}", t.index / 2)?;
                    } else {
                        write!(f, "*e^{}/2", t.index)?;
                    }
                }
            }
        }
        if let Some(c) = &self.cap {
            write!(f, " (mod T^{})", c.format_ratio())?;
        }
        Ok(())
    }
}

// --- wire form -------------------------------------------------------------
//
// {"terms": [{"c": "p/q", "lambda": "p/q", "mu": int}, ...], "cap": "p/q"?}
//
// `mu` is the whole power of `e`; scalars carrying half powers have no wire
// form. Parsing rejects unsorted or duplicate (lambda, mu) keys.

#[derive(Serialize, Deserialize)]
struct WireTerm {
    c: String,
    lambda: String,
    mu: i64,
}

#[derive(Serialize, Deserialize)]
struct WireScalar {
    terms: Vec<WireTerm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cap: Option<String>,
}

impl<R: Exact> Serialize for NovikovScalar<R> {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.index % 2 != 0 {
                return Err(serde::ser::Error::custom(NovikovError::HalfExponent.to_string()));
            }
            terms.push(WireTerm {
                c: t.coeff.format_ratio(),
                lambda: t.energy.format_ratio(),
                mu: t.index / 2,
            });
        }
        WireScalar { terms, cap: self.cap.as_ref().map(|c| c.format_ratio()) }.serialize(ser)
    }
}

impl<'de, R: Exact> Deserialize<'de> for NovikovScalar<R> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let wire = WireScalar::deserialize(de)?;
        let mut terms = Vec::with_capacity(wire.terms.len());
        for t in &wire.terms {
            let coeff = R::parse_ratio(&t.c)
                .ok_or_else(|| D::Error::custom(format!("bad rational {:?}", t.c)))?;
            let energy = R::parse_ratio(&t.lambda)
                .ok_or_else(|| D::Error::custom(format!("bad rational {:?}", t.lambda)))?;
            if coeff.is_zero() {
                return Err(D::Error::custom("zero coefficient term"));
            }
            terms.push(Term { coeff, energy, index: 2 * t.mu });
        }
        for w in terms.windows(2) {
            if (&w[0].energy, w[0].index) >= (&w[1].energy, w[1].index) {
                return Err(D::Error::custom(
                    NovikovError::Unsorted(format!(
                        "({}, {}) then ({}, {})",
                        w[0].energy.format_ratio(),
                        w[0].index / 2,
                        w[1].energy.format_ratio(),
                        w[1].index / 2
                    ))
                    .to_string(),
                ));
            }
        }
        let cap = match wire.cap {
            Some(s) => Some(
                R::parse_ratio(&s).ok_or_else(|| D::Error::custom(format!("bad cap {:?}", s)))?,
            ),
            None => None,
        };
        if let Some(c) = &cap {
            if terms.iter().any(|t| &t.energy >= c) {
                return Err(D::Error::custom("term at or above the stated cap"));
            }
        }
        Ok(NovikovScalar { terms, cap })
    }
}

// --- covering group --------------------------------------------------------

/// Element of the covering deck-transformation group `Π ⊂ ℝ × ℤ`:
/// an energy together with a Maslov integer. The group law is
/// componentwise addition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiGroupElement<R> {
    pub energy: R,
    pub maslov: i64,
}

impl<R: Exact> PiGroupElement<R> {
    pub fn new(energy: R, maslov: i64) -> Self {
        PiGroupElement { energy, maslov }
    }

    pub fn identity() -> Self {
        PiGroupElement { energy: R::zero(), maslov: 0 }
    }

    pub fn compose(&self, other: &Self) -> Self {
        PiGroupElement {
            energy: self.energy.clone() + other.energy.clone(),
            maslov: self.maslov + other.maslov,
        }
    }

    pub fn inverse(&self) -> Self {
        PiGroupElement { energy: -self.energy.clone(), maslov: -self.maslov }
    }

    /// Embedding `g ↦ T^{E(g)} e^{μ(g)/2}` into the Novikov ring.
    ///
    /// Odd Maslov integers land on the half lattice, which the scalar
    /// representation carries natively.
    pub fn embed(&self) -> NovikovScalar<R> {
        NovikovScalar::monomial(R::one(), self.energy.clone(), self.maslov)
    }

    /// Strict variant refusing half powers of `e`.
    pub fn embed_whole(&self) -> Result<NovikovScalar<R>, NovikovError> {
        if self.maslov % 2 != 0 {
            return Err(NovikovError::OddIndex);
        }
        Ok(self.embed())
    }
}

/// Finitely generated subgroup of `ℚ × ℤ` with decidable membership.
#[derive(Clone, Debug)]
pub struct PiGroup<R> {
    pub generators: Vec<PiGroupElement<R>>,
}

impl<R: Exact> PiGroup<R> {
    pub fn new(generators: Vec<PiGroupElement<R>>) -> Self {
        PiGroup { generators }
    }

    /// Decides whether `g` lies in the subgroup generated by the listed
    /// elements, i.e. whether an integer combination of the generators
    /// equals `g`. Works on the integer lattice obtained by clearing
    /// energy denominators.
    pub fn contains(&self, g: &PiGroupElement<R>) -> bool {
        let mut denoms: Vec<BigInt> = vec![g.energy.to_big_rational().denom().clone()];
        for gen in &self.generators {
            denoms.push(gen.energy.to_big_rational().denom().clone());
        }
        let lcm = denoms.iter().fold(BigInt::one(), |acc, d| acc.lcm(d));
        let scale = |x: &R| -> BigInt {
            let r = x.to_big_rational();
            r.numer() * (&lcm / r.denom())
        };
        let cols: Vec<[BigInt; 2]> = self
            .generators
            .iter()
            .map(|gen| [scale(&gen.energy), BigInt::from(gen.maslov)])
            .collect();
        let target = [scale(&g.energy), BigInt::from(g.maslov)];
        lattice_contains_2d(&cols, &target)
    }
}

/// Membership of `target` in the ℤ-span of `cols ⊂ ℤ²` via a Hermite-style
/// reduction: gcd the first row, eliminate, then test divisibility on the
/// remaining row.
fn lattice_contains_2d(cols: &[[BigInt; 2]], target: &[BigInt; 2]) -> bool {
    if target[0].is_zero() && target[1].is_zero() {
        return true;
    }
    let mut basis: Vec<[BigInt; 2]> = cols.to_vec();
    basis.retain(|c| !(c[0].is_zero() && c[1].is_zero()));
    if basis.is_empty() {
        return false;
    }
    // Reduce the first coordinate to a single pivot g = gcd of row 0.
    let mut pivot: Option<[BigInt; 2]> = None;
    let mut rest: Vec<BigInt> = Vec::new();
    for c in basis {
        match pivot.as_mut() {
            None => {
                if c[0].is_zero() {
                    rest.push(c[1].clone());
                } else {
                    pivot = Some(c);
                }
            }
            Some(p) => {
                if c[0].is_zero() {
                    rest.push(c[1].clone());
                } else {
                    // Euclidean steps on the first coordinate.
                    let mut a = p.clone();
                    let mut b = c;
                    while !b[0].is_zero() {
                        let q = &a[0] / &b[0];
                        let new = [&a[0] - &q * &b[0], &a[1] - &q * &b[1]];
                        a = b;
                        b = new;
                    }
                    rest.push(b[1].clone());
                    *p = a;
                }
            }
        }
    }
    match pivot {
        None => {
            // Lattice lies in {0} × ℤ·g1.
            if !target[0].is_zero() {
                return false;
            }
            divides_any(&rest, &target[1])
        }
        Some(p) => {
            if target[0].is_zero() && target[1].is_zero() {
                return true;
            }
            if (&target[0] % &p[0]).is_zero() {
                let q = &target[0] / &p[0];
                let residual = &target[1] - &q * &p[1];
                divides_any(&rest, &residual)
            } else {
                false
            }
        }
    }
}

fn divides_any(gens: &[BigInt], x: &BigInt) -> bool {
    if x.is_zero() {
        return true;
    }
    let g = gens.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return false;
    }
    (x % g).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Nov = NovikovScalar<BigRational>;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    fn t_pow(n: i64, d: i64) -> Nov {
        Nov::monomial(BigRational::one(), rat(n, d), 0)
    }

    #[test]
    fn additive_inverse_cancels() {
        let a = t_pow(0, 1);
        assert!(a.add(&a.neg()).is_zero());
    }

    #[test]
    fn like_terms_merge() {
        let a = Nov::whole(rat(2, 1), rat(1, 1), 1);
        let b = Nov::whole(rat(3, 1), rat(1, 1), 1);
        assert_eq!(a.add(&b), Nov::whole(rat(5, 1), rat(1, 1), 1));
    }

    #[test]
    fn cap_drops_high_terms() {
        let a = t_pow(1, 2).truncate(rat(1, 1));
        let b = t_pow(2, 1).truncate(rat(1, 1));
        let sum = a.add(&b);
        assert_eq!(sum.terms().len(), 1);
        assert_eq!(sum.valuation(), Some(rat(1, 2)));
    }

    #[test]
    fn convolution_adds_exponents() {
        let a = Nov::whole(BigRational::one(), rat(1, 2), 1);
        let b = Nov::whole(BigRational::one(), rat(1, 4), -1);
        assert_eq!(a.mul(&b), Nov::whole(BigRational::one(), rat(3, 4), 0));
    }

    #[test]
    fn unit_law() {
        let x = Nov::whole(rat(2, 3), rat(7, 5), 2).add(&t_pow(2, 1));
        assert_eq!(x.mul(&Nov::one()), x);
    }

    #[test]
    fn distributes_over_two_terms() {
        let a = Nov::whole(rat(2, 1), rat(1, 1), 1).add(&t_pow(2, 1));
        let b = Nov::monomial(rat(3, 1), rat(1, 2), 0);
        let expect = Nov::whole(rat(6, 1), rat(3, 2), 1).add(&Nov::monomial(rat(3, 1), rat(5, 2), 0));
        assert_eq!(a.mul(&b), expect);
    }

    #[test]
    fn valuation_of_leading_term() {
        let a = Nov::whole(rat(2, 1), rat(3, 10), 2).add(&t_pow(11, 10));
        assert_eq!(a.valuation(), Some(rat(3, 10)));
        assert_eq!(Nov::zero().valuation(), None);
        assert_eq!(Nov::one().valuation(), Some(rat(0, 1)));
    }

    #[test]
    fn inversion_of_one_plus_t() {
        let a = Nov::one().add(&t_pow(1, 1));
        let inv = a.invert(&rat(3, 1)).unwrap();
        let expect = Nov::one().add(&t_pow(1, 1).neg()).add(&t_pow(2, 1)).truncate(rat(3, 1));
        assert_eq!(inv, expect);
        let round = a.mul(&inv);
        assert_eq!(round, Nov::one().truncate(rat(3, 1)));
    }

    #[test]
    fn scalar_inverse() {
        let a = Nov::from_rational(rat(2, 1));
        let inv = a.invert(&rat(5, 1)).unwrap();
        assert_eq!(inv.terms()[0].coeff, rat(1, 2));
        assert_eq!(a.mul(&inv), Nov::one().truncate(rat(5, 1)));
    }

    #[test]
    fn shifted_unit_round_trip() {
        // T^{1/2}(1+T) inverted up to T^2.
        let a = t_pow(1, 2).mul(&Nov::one().add(&t_pow(1, 1)));
        let inv = a.invert(&rat(2, 1)).unwrap();
        let round = a.mul(&inv).truncate(rat(2, 1));
        assert_eq!(round, Nov::one().truncate(rat(2, 1)));
    }

    #[test]
    fn zero_division_rejected() {
        assert_eq!(Nov::zero().invert(&rat(1, 1)), Err(NovikovError::ZeroDivision));
    }

    #[test]
    fn mixed_leading_slice_rejected() {
        let a = Nov::whole(BigRational::one(), rat(0, 1), 0)
            .add(&Nov::whole(BigRational::one(), rat(0, 1), 1));
        assert_eq!(a.invert(&rat(1, 1)), Err(NovikovError::NonInvertibleLeading));
    }

    #[test]
    fn embedding_examples() {
        let id = PiGroupElement::<BigRational>::identity();
        assert_eq!(id.embed(), Nov::one());
        let g = PiGroupElement::new(rat(1, 1), 2);
        assert_eq!(g.embed_whole().unwrap(), Nov::whole(BigRational::one(), rat(1, 1), 1));
        let odd = PiGroupElement::new(rat(1, 1), 3);
        assert_eq!(odd.embed_whole(), Err(NovikovError::OddIndex));
        assert_eq!(odd.embed().terms()[0].index, 3);
    }

    #[test]
    fn embedding_is_homomorphism() {
        let g = PiGroupElement::new(rat(1, 3), 4);
        let h = PiGroupElement::new(rat(5, 7), -2);
        assert_eq!(g.compose(&h).embed(), g.embed().mul(&h.embed()));
    }

    #[test]
    fn embedding_is_injective() {
        let elements: Vec<PiGroupElement<BigRational>> = (0..6)
            .flat_map(|e| (-2..3).map(move |m| PiGroupElement::new(rat(e, 2), m)))
            .collect();
        for (i, g) in elements.iter().enumerate() {
            for h in elements.iter().skip(i + 1) {
                assert_ne!(g.embed(), h.embed());
            }
        }
    }

    #[test]
    fn group_membership() {
        let grp = PiGroup::new(vec![
            PiGroupElement::new(rat(1, 2), 2),
            PiGroupElement::new(rat(0, 1), 6),
        ]);
        assert!(grp.contains(&PiGroupElement::new(rat(3, 2), 0)));
        assert!(grp.contains(&PiGroupElement::new(rat(1, 2), 8)));
        assert!(!grp.contains(&PiGroupElement::new(rat(1, 3), 0)));
        assert!(!grp.contains(&PiGroupElement::new(rat(1, 2), 1)));
        let empty = PiGroup::<BigRational>::new(vec![]);
        assert!(empty.contains(&PiGroupElement::identity()));
        assert!(!empty.contains(&PiGroupElement::new(rat(1, 1), 0)));
    }

    #[test]
    fn wire_round_trip() {
        let a = Nov::whole(rat(-2, 3), rat(1, 2), 1).add(&t_pow(1, 1)).truncate(rat(7, 1));
        let json = serde_json::to_string(&a).unwrap();
        let back: Nov = serde_json::from_str(&json).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn wire_rejects_unsorted_and_duplicates() {
        let unsorted = r#"{"terms":[{"c":"1","lambda":"2","mu":0},{"c":"1","lambda":"1","mu":0}]}"#;
        assert!(serde_json::from_str::<Nov>(unsorted).is_err());
        let dup = r#"{"terms":[{"c":"1","lambda":"1","mu":0},{"c":"2","lambda":"1","mu":0}]}"#;
        assert!(serde_json::from_str::<Nov>(dup).is_err());
    }

    fn arb_scalar() -> impl Strategy<Value = Nov> {
        prop::collection::vec((-4i64..5, 0i64..6, -2i64..3), 0..5).prop_map(|ts| {
            let terms = ts
                .into_iter()
                .filter(|(c, _, _)| *c != 0)
                .map(|(c, l, m)| Term { coeff: rat(c, 1), energy: rat(l, 2), index: 2 * m })
                .collect();
            Nov::from_terms(terms, None)
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b), b.add(&a));
        }

        #[test]
        fn valuation_is_non_archimedean(a in arb_scalar(), b in arb_scalar()) {
            if let (Some(va), Some(vb)) = (a.valuation(), b.valuation()) {
                let prod = a.mul(&b);
                if let Some(vp) = prod.valuation() {
                    prop_assert_eq!(vp, va.clone() + vb.clone());
                }
                let sum = a.add(&b);
                if let Some(vs) = sum.valuation() {
                    let lo = va.clone().min(vb.clone());
                    prop_assert!(vs >= lo);
                    if va != vb {
                        prop_assert_eq!(vs, lo);
                    }
                }
            }
        }

        #[test]
        fn valuation_ring_is_closed(a in arb_scalar(), b in arb_scalar()) {
            if a.in_valuation_ring() && b.in_valuation_ring() {
                prop_assert!(a.mul(&b).in_valuation_ring());
                prop_assert!(a.add(&b).in_valuation_ring());
                if b.in_maximal_ideal() {
                    prop_assert!(a.mul(&b).in_maximal_ideal());
                }
            }
        }
    }
}
