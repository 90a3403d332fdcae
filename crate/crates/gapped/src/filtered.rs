//! Filtered graded free modules over the Novikov valuation ring.
//!
//! A [`FilteredComplex`] is a finite free module with named generators,
//! integer degrees and nonnegative action levels, a degree-one sparse
//! differential with Novikov scalar entries, and an energy cap below which
//! all identities are exact. The level of `T^λ e^{k/2} g` is `level(g) + λ`,
//! and the decreasing filtration `F^λ` collects elements of level `≥ λ`.
//!
//! Degree bookkeeping treats `e` as a degree-2 symbol: a term with doubled
//! exponent `k` from generator `g` to generator `h` raises degree by
//! `deg(h) + k − deg(g)`, which the differential must make equal to one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::novikov::NovikovScalar;
use crate::scalar::Exact;

/// A named generator with cohomological degree and action level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator<R> {
    pub name: String,
    pub degree: i64,
    pub level: R,
}

/// Structural errors raised while building complexes and maps.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("duplicate generator name {0:?}")]
    DuplicateName(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("generator {0:?} has negative level")]
    NegativeLevel(String),
    #[error("map shapes do not match")]
    ShapeMismatch,
}

/// One invariant violation found by [`FilteredComplex::check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A differential term does not raise total degree by exactly one.
    Degree { src: String, dst: String, raised_by: i64 },
    /// `level(dst) + λ < level(src)`: the entry lowers the filtration.
    Filtration { src: String, dst: String, shortfall: String },
    /// `(δ∘δ)(src)` has a nonzero component on `dst` below the cap.
    SquareNonzero { src: String, dst: String, witness: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Degree { src, dst, raised_by } => {
                write!(f, "entry {src} -> {dst} raises degree by {raised_by}, expected 1")
            }
            Violation::Filtration { src, dst, shortfall } => {
                write!(f, "entry {src} -> {dst} lowers the filtration by {shortfall}")
            }
            Violation::SquareNonzero { src, dst, witness } => {
                write!(f, "δ²({src}) has component {witness} on {dst}")
            }
        }
    }
}

/// Result of validating a complex; empty means success.
#[derive(Debug, Clone, Default)]
pub struct CheckReport {
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Finite filtered graded free module with a degree-one differential,
/// exact below its energy cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex<R: Exact> {
    generators: Vec<Generator<R>>,
    /// Sparse differential, keyed by (source index, target index).
    entries: BTreeMap<(usize, usize), NovikovScalar<R>>,
    cap: R,
}

impl<R: Exact> FilteredComplex<R> {
    pub fn new(generators: Vec<Generator<R>>, cap: R) -> Result<Self, ComplexError> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !seen.insert(g.name.clone()) {
                return Err(ComplexError::DuplicateName(g.name.clone()));
            }
            if g.level < R::zero() {
                return Err(ComplexError::NegativeLevel(g.name.clone()));
            }
        }
        Ok(FilteredComplex { generators, entries: BTreeMap::new(), cap })
    }

    pub fn generators(&self) -> &[Generator<R>] {
        &self.generators
    }

    pub fn cap(&self) -> &R {
        &self.cap
    }

    pub fn index_of(&self, name: &str) -> Result<usize, ComplexError> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| ComplexError::UnknownGenerator(name.to_string()))
    }

    /// Sets the differential entry from `src` to `dst`, truncated at the
    /// cap. Zero scalars clear the slot.
    pub fn set_entry(
        &mut self,
        src: &str,
        dst: &str,
        scalar: NovikovScalar<R>,
    ) -> Result<(), ComplexError> {
        let i = self.index_of(src)?;
        let j = self.index_of(dst)?;
        self.set_entry_idx(i, j, scalar);
        Ok(())
    }

    pub fn set_entry_idx(&mut self, src: usize, dst: usize, scalar: NovikovScalar<R>) {
        let scalar = scalar.truncate(self.cap.clone());
        if scalar.is_zero() {
            self.entries.remove(&(src, dst));
        } else {
            self.entries.insert((src, dst), scalar);
        }
    }

    pub fn entry(&self, src: usize, dst: usize) -> Option<&NovikovScalar<R>> {
        self.entries.get(&(src, dst))
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &NovikovScalar<R>)> {
        self.entries.iter().map(|(&(i, j), s)| (i, j, s))
    }

    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let degs: Vec<i64> = self.generators.iter().map(|g| g.degree).collect();
        Some((*degs.iter().min()?, *degs.iter().max()?))
    }

    /// The differential as a [`FilteredMap`] from the complex to itself.
    pub fn differential(&self) -> FilteredMap<R> {
        FilteredMap {
            source: self.shape(),
            target: self.shape(),
            degree: 1,
            entries: self.entries.clone(),
            cap: self.cap.clone(),
        }
    }

    pub(crate) fn shape(&self) -> Vec<Generator<R>> {
        self.generators.clone()
    }

    /// Validates degree raising, filtration preservation and `δ∘δ = 0`
    /// below the cap, reporting every violation with a witness entry.
    pub fn check(&self) -> CheckReport {
        let mut violations = Vec::new();
        for (&(i, j), s) in &self.entries {
            let src = &self.generators[i];
            let dst = &self.generators[j];
            for t in s.terms() {
                let raised = dst.degree + t.index - src.degree;
                if raised != 1 {
                    violations.push(Violation::Degree {
                        src: src.name.clone(),
                        dst: dst.name.clone(),
                        raised_by: raised,
                    });
                    break;
                }
            }
            if let Some(v) = s.valuation() {
                let order = dst.level.clone() + v - src.level.clone();
                if order < R::zero() {
                    violations.push(Violation::Filtration {
                        src: src.name.clone(),
                        dst: dst.name.clone(),
                        shortfall: (-order).format_ratio(),
                    });
                }
            }
        }
        let square = self.differential().compose(&self.differential()).expect("same shape");
        for (i, j, s) in square.entries() {
            if !s.is_zero() {
                violations.push(Violation::SquareNonzero {
                    src: self.generators[i].name.clone(),
                    dst: self.generators[j].name.clone(),
                    witness: s.to_string(),
                });
            }
        }
        CheckReport { violations }
    }

    /// Effective order of a differential term from generator `i` to `j`
    /// with scalar energy `λ`: `level(j) + λ − level(i)`.
    fn term_order(&self, i: usize, j: usize, energy: &R) -> R {
        self.generators[j].level.clone() + energy.clone() - self.generators[i].level.clone()
    }

    /// The energy-zero leading part `δ₀`: keeps, in each entry, exactly the
    /// term whose energy equals the level difference of its endpoints (the
    /// part surviving in the reduced complex `C̄ = C/Λ⁺C`).
    pub fn leading_part(&self) -> Self {
        let mut lead = self.clone();
        lead.entries = BTreeMap::new();
        for (&(i, j), s) in &self.entries {
            let keep: Vec<_> = s
                .terms()
                .iter()
                .filter(|t| self.term_order(i, j, &t.energy).is_zero())
                .cloned()
                .collect();
            if !keep.is_empty() {
                lead.entries
                    .insert((i, j), NovikovScalar::from_terms(keep, Some(self.cap.clone())));
            }
        }
        lead
    }

    /// Rational coefficient of the order-zero term of the `(src, dst)`
    /// entry: the matrix of the reduced differential over the residue field.
    pub fn residue_entry(&self, src: usize, dst: usize) -> R {
        match self.entries.get(&(src, dst)) {
            None => R::zero(),
            Some(s) => s
                .terms()
                .iter()
                .find(|t| self.term_order(src, dst, &t.energy).is_zero())
                .map(|t| t.coeff.clone())
                .unwrap_or_else(R::zero),
        }
    }

    /// Set of realized support levels: generator levels together with the
    /// levels hit by differential terms.
    pub fn realized_levels(&self) -> BTreeSet<R> {
        let mut levels: BTreeSet<R> = self.generators.iter().map(|g| g.level.clone()).collect();
        for (&(_, j), s) in &self.entries {
            for t in s.terms() {
                levels.insert(self.generators[j].level.clone() + t.energy.clone());
            }
        }
        levels
    }

    /// Set of nonnegative differences of realized support levels.
    pub fn gap_spectrum(&self) -> BTreeSet<R> {
        let levels: Vec<R> = self.realized_levels().into_iter().collect();
        let mut diffs = BTreeSet::new();
        for (a, x) in levels.iter().enumerate() {
            for y in levels.iter().skip(a) {
                diffs.insert(y.clone() - x.clone());
            }
        }
        diffs
    }

    /// True if no realized level difference lies in the interval.
    pub fn gap_check(&self, interval: &Interval<R>) -> bool {
        !self.gap_spectrum().iter().any(|d| interval.contains(d))
    }

    /// Orders realized by differential terms, i.e. the amounts by which the
    /// entries raise the filtration.
    pub fn order_spectrum(&self) -> BTreeSet<R> {
        let mut orders = BTreeSet::new();
        for (&(i, j), s) in &self.entries {
            for t in s.terms() {
                orders.insert(self.term_order(i, j, &t.energy));
            }
        }
        orders
    }
}

/// Interval of exact rationals with configurable end points;
/// `hi = None` means `+∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval<R> {
    pub lo: R,
    pub lo_closed: bool,
    pub hi: Option<R>,
    pub hi_closed: bool,
}

impl<R: Exact> Interval<R> {
    /// `[lo; hi)`
    pub fn half_open(lo: R, hi: R) -> Self {
        Interval { lo, lo_closed: true, hi: Some(hi), hi_closed: false }
    }

    /// `(lo; hi)`
    pub fn open(lo: R, hi: R) -> Self {
        Interval { lo, lo_closed: false, hi: Some(hi), hi_closed: false }
    }

    /// `[lo; ∞)`
    pub fn ray(lo: R) -> Self {
        Interval { lo, lo_closed: true, hi: None, hi_closed: false }
    }

    pub fn contains(&self, x: &R) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = match &self.hi {
            None => true,
            Some(h) => {
                if self.hi_closed {
                    x <= h
                } else {
                    x < h
                }
            }
        };
        above && below
    }
}

/// Filtration-compatible map between filtered complexes, with a fixed
/// degree shift and sparse Novikov entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredMap<R: Exact> {
    source: Vec<Generator<R>>,
    target: Vec<Generator<R>>,
    pub degree: i64,
    entries: BTreeMap<(usize, usize), NovikovScalar<R>>,
    cap: R,
}

impl<R: Exact> FilteredMap<R> {
    pub fn zero(source: &FilteredComplex<R>, target: &FilteredComplex<R>, degree: i64) -> Self {
        let cap = if source.cap < target.cap { source.cap.clone() } else { target.cap.clone() };
        FilteredMap {
            source: source.shape(),
            target: target.shape(),
            degree,
            entries: BTreeMap::new(),
            cap,
        }
    }

    pub fn identity(c: &FilteredComplex<R>) -> Self {
        let mut m = Self::zero(c, c, 0);
        for i in 0..m.source.len() {
            m.entries.insert((i, i), NovikovScalar::one().truncate(m.cap.clone()));
        }
        m
    }

    pub fn source(&self) -> &[Generator<R>] {
        &self.source
    }

    pub fn target(&self) -> &[Generator<R>] {
        &self.target
    }

    pub fn cap(&self) -> &R {
        &self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|s| s.is_zero())
    }

    pub fn set_entry(&mut self, src: usize, dst: usize, scalar: NovikovScalar<R>) {
        let scalar = scalar.truncate(self.cap.clone());
        if scalar.is_zero() {
            self.entries.remove(&(src, dst));
        } else {
            self.entries.insert((src, dst), scalar);
        }
    }

    pub fn entry(&self, src: usize, dst: usize) -> Option<&NovikovScalar<R>> {
        self.entries.get(&(src, dst))
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &NovikovScalar<R>)> {
        self.entries.iter().map(|(&(i, j), s)| (i, j, s))
    }

    fn term_order(&self, i: usize, j: usize, energy: &R) -> R {
        self.target[j].level.clone() + energy.clone() - self.source[i].level.clone()
    }

    /// Order of the map: the largest `a` with `f(F^λ) ⊆ F^{λ+a}`, i.e. the
    /// minimum effective order over nonzero entry terms. `None` encodes the
    /// `[+∞; ∞)` convention for the zero map.
    pub fn order(&self) -> Option<R> {
        let mut best: Option<R> = None;
        for (&(i, j), s) in &self.entries {
            for t in s.terms() {
                let o = self.term_order(i, j, &t.energy);
                best = Some(match best {
                    None => o,
                    Some(b) => {
                        if o < b {
                            o
                        } else {
                            b
                        }
                    }
                });
            }
        }
        best
    }

    /// Splits entry terms by effective order: `low` collects terms of order
    /// `< ε`, `high` the rest, with `low + high = self` exactly.
    pub fn split_by_threshold(&self, eps: &R) -> (Self, Self) {
        let mut low = self.clone();
        let mut high = self.clone();
        low.entries.clear();
        high.entries.clear();
        for (&(i, j), s) in &self.entries {
            let (lo_terms, hi_terms): (Vec<_>, Vec<_>) = s
                .terms()
                .iter()
                .cloned()
                .partition(|t| self.term_order(i, j, &t.energy) < *eps);
            if !lo_terms.is_empty() {
                low.entries
                    .insert((i, j), NovikovScalar::from_terms(lo_terms, Some(self.cap.clone())));
            }
            if !hi_terms.is_empty() {
                high.entries
                    .insert((i, j), NovikovScalar::from_terms(hi_terms, Some(self.cap.clone())));
            }
        }
        (low, high)
    }

    pub fn add(&self, other: &Self) -> Result<Self, ComplexError> {
        if self.source != other.source
            || self.target != other.target
            || self.degree != other.degree
        {
            return Err(ComplexError::ShapeMismatch);
        }
        let mut out = self.clone();
        for (&(i, j), s) in &other.entries {
            let sum = match out.entries.get(&(i, j)) {
                Some(e) => e.add(s),
                None => s.clone(),
            };
            out.set_entry(i, j, sum);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &NovikovScalar<R>) -> Self {
        let mut out = self.clone();
        out.entries.clear();
        for (&(i, j), e) in &self.entries {
            out.set_entry(i, j, e.mul(s));
        }
        out
    }

    pub fn negate(&self) -> Self {
        let mut out = self.clone();
        for s in out.entries.values_mut() {
            *s = s.neg();
        }
        out
    }

    /// Composition `other ∘ self` (apply `self` first).
    pub fn compose(&self, other: &Self) -> Result<Self, ComplexError> {
        if self.target != other.source {
            return Err(ComplexError::ShapeMismatch);
        }
        let cap = if self.cap < other.cap { self.cap.clone() } else { other.cap.clone() };
        let mut out = FilteredMap {
            source: self.source.clone(),
            target: other.target.clone(),
            degree: self.degree + other.degree,
            entries: BTreeMap::new(),
            cap,
        };
        for (&(i, k), s) in &self.entries {
            for (&(k2, j), t) in &other.entries {
                if k != k2 {
                    continue;
                }
                let prod = s.mul(t);
                let sum = match out.entries.get(&(i, j)) {
                    Some(e) => e.add(&prod),
                    None => prod,
                };
                out.set_entry(i, j, sum);
            }
        }
        Ok(out)
    }

    /// Applies the map to coordinates over the source generators.
    pub fn apply(&self, coords: &[NovikovScalar<R>]) -> Vec<NovikovScalar<R>> {
        let mut out = vec![NovikovScalar::zero().truncate(self.cap.clone()); self.target.len()];
        for (&(i, j), s) in &self.entries {
            if i < coords.len() && !coords[i].is_zero() {
                out[j] = out[j].add(&coords[i].mul(s));
            }
        }
        out
    }

    /// Checks filtration preservation entry term by entry term.
    pub fn filtration_ok(&self) -> bool {
        self.entries
            .iter()
            .all(|(&(i, j), s)| s.terms().iter().all(|t| !self.term_order(i, j, &t.energy).is_negative()))
    }
}

// --- wire form ---------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct WireGenerator {
    pub name: String,
    pub degree: i64,
    pub level: String,
}

#[derive(Serialize, Deserialize)]
pub struct WireEntry {
    pub src: String,
    pub dst: String,
    pub scalar: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
pub struct WireComplex {
    pub generators: Vec<WireGenerator>,
    pub differential: Vec<WireEntry>,
    pub cap: String,
}

impl<R: Exact> FilteredComplex<R> {
    pub fn to_wire(&self) -> WireComplex {
        WireComplex {
            generators: self
                .generators
                .iter()
                .map(|g| WireGenerator {
                    name: g.name.clone(),
                    degree: g.degree,
                    level: g.level.format_ratio(),
                })
                .collect(),
            differential: self
                .entries
                .iter()
                .map(|(&(i, j), s)| WireEntry {
                    src: self.generators[i].name.clone(),
                    dst: self.generators[j].name.clone(),
                    scalar: serde_json::to_value(s).expect("scalar wire form"),
                })
                .collect(),
            cap: self.cap.format_ratio(),
        }
    }

    /// Parses the wire form; error strings carry a JSON-pointer-style path
    /// to the offending field.
    pub fn from_wire(wire: &WireComplex) -> Result<Self, String> {
        let cap =
            R::parse_ratio(&wire.cap).ok_or_else(|| format!("/cap: bad rational {:?}", wire.cap))?;
        let mut gens = Vec::new();
        for (n, g) in wire.generators.iter().enumerate() {
            let level = R::parse_ratio(&g.level)
                .ok_or_else(|| format!("/generators/{n}/level: bad rational {:?}", g.level))?;
            gens.push(Generator { name: g.name.clone(), degree: g.degree, level });
        }
        let mut complex = FilteredComplex::new(gens, cap).map_err(|e| format!("/generators: {e}"))?;
        for (n, e) in wire.differential.iter().enumerate() {
            let scalar: NovikovScalar<R> = serde_json::from_value(e.scalar.clone())
                .map_err(|err| format!("/differential/{n}/scalar: {err}"))?;
            let i = complex
                .index_of(&e.src)
                .map_err(|_| format!("/differential/{n}/src: unknown generator {:?}", e.src))?;
            let j = complex
                .index_of(&e.dst)
                .map_err(|_| format!("/differential/{n}/dst: unknown generator {:?}", e.dst))?;
            let prev = complex.entry(i, j).cloned().unwrap_or_else(NovikovScalar::zero);
            complex.set_entry_idx(i, j, prev.add(&scalar));
        }
        Ok(complex)
    }
}

#[derive(Serialize, Deserialize)]
pub struct WireMap {
    pub degree: i64,
    pub entries: Vec<WireEntry>,
}

impl<R: Exact> FilteredMap<R> {
    pub fn to_wire(&self) -> WireMap {
        WireMap {
            degree: self.degree,
            entries: self
                .entries
                .iter()
                .map(|(&(i, j), s)| WireEntry {
                    src: self.source[i].name.clone(),
                    dst: self.target[j].name.clone(),
                    scalar: serde_json::to_value(s).expect("scalar wire form"),
                })
                .collect(),
        }
    }

    /// Parses the wire form against explicit source and target complexes.
    pub fn from_wire(
        wire: &WireMap,
        source: &FilteredComplex<R>,
        target: &FilteredComplex<R>,
    ) -> Result<Self, String> {
        let mut map = FilteredMap::zero(source, target, wire.degree);
        for (n, e) in wire.entries.iter().enumerate() {
            let scalar: NovikovScalar<R> = serde_json::from_value(e.scalar.clone())
                .map_err(|err| format!("/entries/{n}/scalar: {err}"))?;
            let i = source
                .index_of(&e.src)
                .map_err(|_| format!("/entries/{n}/src: unknown generator {:?}", e.src))?;
            let j = target
                .index_of(&e.dst)
                .map_err(|_| format!("/entries/{n}/dst: unknown generator {:?}", e.dst))?;
            let prev = map.entry(i, j).cloned().unwrap_or_else(NovikovScalar::zero);
            map.set_entry(i, j, prev.add(&scalar));
        }
        Ok(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use crate::{Complex, Nov};

    fn gen(name: &str, degree: i64, level_n: i64, level_d: i64) -> Generator<crate::Rat> {
        Generator { name: name.into(), degree, level: rat(level_n, level_d) }
    }

    fn two_gen(level_x: (i64, i64), level_y: (i64, i64), scalar: Nov) -> Complex {
        let mut c = Complex::new(
            vec![gen("x", 0, level_x.0, level_x.1), gen("y", 1, level_y.0, level_y.1)],
            rat(10, 1),
        )
        .unwrap();
        c.set_entry("x", "y", scalar).unwrap();
        c
    }

    #[test]
    fn zero_differential_passes() {
        let c = Complex::new(vec![gen("x", 0, 0, 1), gen("y", 1, 1, 1)], rat(10, 1)).unwrap();
        assert!(c.check().passed());
    }

    #[test]
    fn filtration_margin_passes() {
        // x at level 0, y at level 1, d(x) = T y: order = 1 + 1 - 0 ≥ 0.
        let c = two_gen((0, 1), (1, 1), Nov::monomial(rat(1, 1), rat(1, 1), 0));
        assert!(c.check().passed());
    }

    #[test]
    fn filtration_violation_detected() {
        // x at level 1, y at level 0, d(x) = T^{1/2} y: order = 0 + 1/2 - 1 < 0.
        let c = two_gen((1, 1), (0, 1), Nov::monomial(rat(1, 1), rat(1, 2), 0));
        let report = c.check();
        assert_eq!(report.violations.len(), 1);
        match &report.violations[0] {
            Violation::Filtration { src, dst, shortfall } => {
                assert_eq!(src, "x");
                assert_eq!(dst, "y");
                assert_eq!(shortfall, "1/2");
            }
            v => panic!("unexpected violation {v:?}"),
        }
    }

    #[test]
    fn degree_violation_detected() {
        let mut c = Complex::new(vec![gen("x", 0, 0, 1), gen("y", 2, 0, 1)], rat(10, 1)).unwrap();
        c.set_entry("x", "y", Nov::monomial(rat(1, 1), rat(1, 1), 0)).unwrap();
        let report = c.check();
        assert!(matches!(report.violations[0], Violation::Degree { raised_by: 2, .. }));
    }

    #[test]
    fn square_violation_detected() {
        let mut c = Complex::new(
            vec![gen("x", 0, 0, 1), gen("y", 1, 0, 1), gen("z", 2, 0, 1)],
            rat(10, 1),
        )
        .unwrap();
        c.set_entry("x", "y", Nov::from_int(1)).unwrap();
        c.set_entry("y", "z", Nov::from_int(1)).unwrap();
        let report = c.check();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::SquareNonzero { src, dst, .. } if src == "x" && dst == "z")));
    }

    #[test]
    fn leading_part_keeps_energy_zero_entries() {
        // Equal levels: 2·T^0 survives, T^1 dies in the reduced complex.
        let c =
            two_gen((0, 1), (0, 1), Nov::from_int(2).add(&Nov::monomial(rat(1, 1), rat(1, 1), 0)));
        let lead = c.leading_part();
        assert_eq!(lead.entry(0, 1).unwrap(), &Nov::from_int(2).truncate(rat(10, 1)));
        assert_eq!(lead.residue_entry(0, 1), rat(2, 1));

        let c2 = two_gen((0, 1), (0, 1), Nov::monomial(rat(1, 1), rat(1, 1), 0));
        assert!(c2.leading_part().entry(0, 1).is_none());
    }

    #[test]
    fn map_order_examples() {
        let c = Complex::new(vec![gen("x", 0, 0, 1), gen("y", 0, 0, 1)], rat(10, 1)).unwrap();
        let id = FilteredMap::identity(&c);
        assert_eq!(id.order(), Some(rat(0, 1)));

        let mut f = FilteredMap::zero(&c, &c, 0);
        f.set_entry(0, 1, Nov::monomial(rat(1, 1), rat(3, 1), 0));
        assert_eq!(f.order(), Some(rat(3, 1)));

        let z = FilteredMap::zero(&c, &c, 0);
        assert_eq!(z.order(), None);
    }

    #[test]
    fn split_recombines_exactly() {
        let c = Complex::new(vec![gen("x", 0, 0, 1), gen("y", 0, 0, 1)], rat(10, 1)).unwrap();
        let mut f = FilteredMap::zero(&c, &c, 0);
        f.set_entry(0, 0, Nov::from_int(1));
        f.set_entry(0, 1, Nov::monomial(rat(1, 1), rat(2, 1), 0));
        let (low, high) = f.split_by_threshold(&rat(1, 1));
        assert_eq!(low.entry(0, 0).unwrap(), &Nov::from_int(1).truncate(rat(10, 1)));
        assert!(low.entry(0, 1).is_none());
        assert!(high.entry(0, 0).is_none());
        assert_eq!(low.add(&high).unwrap(), f);
    }

    #[test]
    fn gap_spectrum_examples() {
        // Orders 0 and 3ε (ε = 1): gap (0; 3) holds, [1; 2) holds.
        let mut c = Complex::new(
            vec![gen("x", 0, 0, 1), gen("y", 1, 0, 1), gen("u", 0, 0, 1), gen("v", 1, 0, 1)],
            rat(20, 1),
        )
        .unwrap();
        c.set_entry("x", "y", Nov::from_int(1)).unwrap();
        c.set_entry("u", "v", Nov::monomial(rat(1, 1), rat(3, 1), 0)).unwrap();
        assert!(c.gap_check(&Interval::open(rat(0, 1), rat(3, 1))));
        assert!(c.gap_check(&Interval::half_open(rat(1, 1), rat(2, 1))));

        // An order-ε term breaks the gap [ε; 2ε).
        let mut c2 = Complex::new(vec![gen("x", 0, 0, 1), gen("y", 1, 0, 1)], rat(20, 1)).unwrap();
        c2.set_entry("x", "y", Nov::monomial(rat(1, 1), rat(1, 1), 0)).unwrap();
        assert!(!c2.gap_check(&Interval::half_open(rat(1, 1), rat(2, 1))));

        // Empty differential: every interval is a gap.
        let c3 = Complex::new(vec![gen("x", 0, 0, 1)], rat(20, 1)).unwrap();
        assert!(c3.gap_check(&Interval::open(rat(0, 1), rat(100, 1))));
    }

    #[test]
    fn composition_order_subadditive() {
        let c =
            Complex::new(vec![gen("x", 0, 0, 1), gen("y", 0, 1, 2), gen("z", 0, 0, 1)], rat(30, 1))
                .unwrap();
        let mut f = FilteredMap::zero(&c, &c, 0);
        f.set_entry(0, 1, Nov::monomial(rat(2, 1), rat(1, 1), 0));
        let mut g = FilteredMap::zero(&c, &c, 0);
        g.set_entry(1, 2, Nov::monomial(rat(3, 1), rat(2, 1), 0));
        let gf = f.compose(&g).unwrap();
        let (of, og, ogf) = (f.order().unwrap(), g.order().unwrap(), gf.order().unwrap());
        assert!(ogf >= of + og);
    }

    #[test]
    fn order_invariant_under_valuation_zero_unit() {
        let c = Complex::new(vec![gen("x", 0, 0, 1), gen("y", 0, 1, 2)], rat(10, 1)).unwrap();
        let mut f = FilteredMap::zero(&c, &c, 0);
        f.set_entry(0, 1, Nov::monomial(rat(3, 1), rat(1, 1), 0));
        let unit = Nov::from_int(2).add(&Nov::monomial(rat(1, 1), rat(5, 1), 0));
        assert_eq!(f.order(), f.scale(&unit).order());
    }

    #[test]
    fn wire_round_trip() {
        let c = two_gen((0, 1), (1, 2), Nov::monomial(rat(1, 1), rat(3, 4), 0));
        let wire = c.to_wire();
        let json = serde_json::to_string(&wire).unwrap();
        let back: WireComplex = serde_json::from_str(&json).unwrap();
        let c2 = Complex::from_wire(&back).unwrap();
        assert_eq!(c, c2);
    }
}
