//! Truncated filtered A-infinity algebras: relation checking with signs,
//! Maurer-Cartan solving by energy induction, and deformation by a
//! bounding cochain.
//!
//! Operations `m_k` are stored as sparse tensors on a finite generator
//! set, with arities `0 ..= k_max` and Novikov scalar coefficients, exact
//! below the energy cap. Arguments are written in the descending order
//! `m_k(x_k, …, x_1)`; the defining relation is
//!
//! ```text
//!   Σ (−1)^*  m_{k₁}(x_k, …, x_{k−i}, m_{k₂}(x_{k−i−1}, …, x_{k−i−k₂}), …, x_1) = 0
//!   * = i + deg x_k + … + deg x_{k−i},
//! ```
//!
//! summed over `k₁ + k₂ = k + 1` and block positions `i = −1, …, k − k₂ − 1`;
//! the exponent for `i = −1` (no arguments left of the block) is `−1`. The
//! same table drives the coderivation route, which must reproduce the
//! direct residuals up to the global sign of the outer contraction.
//!
//! Degree bookkeeping: each `m_k` raises shifted degree by one, so a tensor
//! entry from inputs of degrees `d_k, …, d_1` to an output of degree `d`
//! with `e`-half-exponent `κ` must satisfy `d + κ = Σ dᵢ − k + 2`.
//! Filtration: the output level plus the scalar valuation is at least the
//! sum of the input levels.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elimination::{NovVector, QMatrix};
use crate::filtered::Generator;
use crate::novikov::NovikovScalar;
use crate::scalar::Exact;

/// Sparse tensor entry of one operation: generator inputs in descending
/// written order, one output generator, a scalar coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpEntry<R: Exact> {
    pub inputs: Vec<usize>,
    pub output: usize,
    pub scalar: NovikovScalar<R>,
}

/// A truncated filtered A-infinity structure on a finite generator set.
#[derive(Clone, Debug)]
pub struct AInftyData<R: Exact> {
    generators: Vec<Generator<R>>,
    ops: BTreeMap<usize, Vec<OpEntry<R>>>,
    pub k_max: usize,
    cap: R,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AInftyError {
    #[error("unknown generator index {0}")]
    UnknownGenerator(usize),
    #[error("operation arity {0} exceeds k_max {1}")]
    ArityTooLarge(usize, usize),
    #[error("entry violates degree bookkeeping: expected shift {expected}, got {got}")]
    DegreeMismatch { expected: i64, got: i64 },
    #[error("entry violates filtration: output level + valuation falls short by {0}")]
    FiltrationViolation(String),
    #[error("bounding cochain has non-positive energy level; expansion may diverge")]
    DivergenceRisk,
}

impl<R: Exact> AInftyData<R> {
    pub fn new(generators: Vec<Generator<R>>, k_max: usize, cap: R) -> Self {
        AInftyData { generators, ops: BTreeMap::new(), k_max, cap }
    }

    pub fn generators(&self) -> &[Generator<R>] {
        &self.generators
    }

    pub fn cap(&self) -> &R {
        &self.cap
    }

    pub fn entries(&self, k: usize) -> &[OpEntry<R>] {
        self.ops.get(&k).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.ops.keys().cloned()
    }

    /// Adds a tensor entry after validating degree and filtration rules.
    pub fn add_entry(
        &mut self,
        k: usize,
        inputs: Vec<usize>,
        output: usize,
        scalar: NovikovScalar<R>,
    ) -> Result<(), AInftyError> {
        if k > self.k_max {
            return Err(AInftyError::ArityTooLarge(k, self.k_max));
        }
        if inputs.len() != k {
            return Err(AInftyError::ArityTooLarge(inputs.len(), k));
        }
        for &i in inputs.iter().chain(std::iter::once(&output)) {
            if i >= self.generators.len() {
                return Err(AInftyError::UnknownGenerator(i));
            }
        }
        let scalar = scalar.truncate(self.cap.clone());
        if scalar.is_zero() {
            return Ok(());
        }
        let in_deg: i64 = inputs.iter().map(|&i| self.generators[i].degree).sum();
        let expected = in_deg - k as i64 + 2;
        for t in scalar.terms() {
            let got = self.generators[output].degree + t.index;
            if got != expected {
                return Err(AInftyError::DegreeMismatch { expected, got });
            }
        }
        let in_level: R =
            inputs.iter().fold(R::zero(), |acc, &i| acc + self.generators[i].level.clone());
        if let Some(v) = scalar.valuation() {
            let margin = self.generators[output].level.clone() + v - in_level;
            if margin < R::zero() {
                return Err(AInftyError::FiltrationViolation((-margin).format_ratio()));
            }
        }
        self.ops.entry(k).or_default().push(OpEntry { inputs, output, scalar });
        Ok(())
    }

    fn zero_vec(&self) -> NovVector<R> {
        vec![NovikovScalar::zero().truncate(self.cap.clone()); self.generators.len()]
    }

    pub fn unit_vec(&self, g: usize) -> NovVector<R> {
        let mut v = self.zero_vec();
        v[g] = NovikovScalar::one().truncate(self.cap.clone());
        v
    }

    /// Energy level of an element: minimum of `𝔳(coeff) + level(gen)` over
    /// nonzero coordinates; `None` for the zero element.
    pub fn element_level(&self, v: &NovVector<R>) -> Option<R> {
        v.iter()
            .enumerate()
            .filter_map(|(g, s)| s.valuation().map(|val| val + self.generators[g].level.clone()))
            .min()
    }

    /// Multilinear evaluation of `m_k` on argument elements given in the
    /// written (descending) order.
    pub fn apply(&self, k: usize, args: &[NovVector<R>]) -> NovVector<R> {
        debug_assert_eq!(args.len(), k);
        let mut out = self.zero_vec();
        'entries: for e in self.entries(k) {
            let mut coeff = NovikovScalar::one().truncate(self.cap.clone());
            for (slot, &g) in e.inputs.iter().enumerate() {
                let c = &args[slot][g];
                if c.is_zero() {
                    continue 'entries;
                }
                coeff = coeff.mul(c);
            }
            out[e.output] = out[e.output].add(&coeff.mul(&e.scalar));
        }
        out
    }

    /// All generator tuples of length `k` (indices in written order).
    fn tuples(&self, k: usize) -> Vec<Vec<usize>> {
        let n = self.generators.len();
        let mut out = vec![Vec::new()];
        for _ in 0..k {
            let mut next = Vec::with_capacity(out.len() * n);
            for t in &out {
                for g in 0..n {
                    let mut t2 = t.clone();
                    t2.push(g);
                    next.push(t2);
                }
            }
            out = next;
        }
        out
    }
}

/// Sign `(−1)^{i + Σ deg}` for a block preceded by the listed degrees;
/// `i` is the number of preceding arguments minus one.
fn block_sign(preceding_degrees: &[i64]) -> i64 {
    let i = preceding_degrees.len() as i64 - 1;
    let s: i64 = preceding_degrees.iter().sum();
    if (i + s).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Nonzero residual of the defining relation at one generator tuple.
#[derive(Clone, Debug)]
pub struct RelationWitness<R: Exact> {
    pub arity: usize,
    pub tuple: Vec<usize>,
    pub residual: NovVector<R>,
}

/// Report of the relation check; empty witnesses means the relation holds
/// on all tuples up to `k_max` below the cap.
pub struct RelationReport<R: Exact> {
    pub witnesses: Vec<RelationWitness<R>>,
}

impl<R: Exact> RelationReport<R> {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Direct evaluation of the relation residual at a generator tuple.
pub fn relation_residual<R: Exact>(a: &AInftyData<R>, tuple: &[usize]) -> NovVector<R> {
    let k = tuple.len();
    let mut residual = a.zero_vec();
    for k2 in 0..=k {
        let k1 = k + 1 - k2;
        if k1 > a.k_max && a.entries(k1).is_empty() {
            continue;
        }
        // Block starts after `left` arguments, left = i + 1 ∈ 0 ..= k − k2.
        for left in 0..=(k - k2) {
            let degs: Vec<i64> =
                tuple[..left].iter().map(|&g| a.generators()[g].degree).collect();
            let sign = block_sign(&degs);
            let inner_args: Vec<NovVector<R>> =
                tuple[left..left + k2].iter().map(|&g| a.unit_vec(g)).collect();
            let inner = a.apply(k2, &inner_args);
            let mut outer_args: Vec<NovVector<R>> =
                tuple[..left].iter().map(|&g| a.unit_vec(g)).collect();
            outer_args.push(inner);
            outer_args.extend(tuple[left + k2..].iter().map(|&g| a.unit_vec(g)));
            let term = a.apply(k1, &outer_args);
            for (r, t) in residual.iter_mut().zip(term.iter()) {
                *r = if sign > 0 { r.add(t) } else { r.sub(t) };
            }
        }
    }
    residual
}

/// Checks the relation on every generator tuple of length `0 ..= k_max`,
/// with operations of arity beyond `k_max` treated as zero.
pub fn relation_check<R: Exact>(a: &AInftyData<R>) -> RelationReport<R> {
    let mut witnesses = Vec::new();
    for k in 0..=a.k_max {
        for tuple in a.tuples(k) {
            let residual = relation_residual(a, &tuple);
            if residual.iter().any(|s| !s.is_zero()) {
                witnesses.push(RelationWitness { arity: k, tuple, residual });
            }
        }
    }
    RelationReport { witnesses }
}

/// Formal sum of tensor words with Novikov coefficients, graded by length.
type TensorSum<R> = BTreeMap<Vec<usize>, NovikovScalar<R>>;

fn tensor_add<R: Exact>(acc: &mut TensorSum<R>, word: Vec<usize>, coeff: NovikovScalar<R>) {
    if coeff.is_zero() {
        return;
    }
    let slot = acc.entry(word).or_insert_with(NovikovScalar::zero);
    *slot = slot.add(&coeff);
    if slot.is_zero() {
        let key: Vec<Vec<usize>> =
            acc.iter().filter(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).collect();
        for k in key {
            acc.remove(&k);
        }
    }
}

/// One application of the total coderivation `d = Σ m̂_k` to a tensor word.
fn coderivation<R: Exact>(a: &AInftyData<R>, word: &[usize], coeff: &NovikovScalar<R>) -> TensorSum<R> {
    let mut out = TensorSum::new();
    let n = word.len();
    let arities: Vec<usize> = a.arities().collect();
    for &k2 in &arities {
        if k2 > n {
            continue;
        }
        for left in 0..=(n - k2) {
            let degs: Vec<i64> = word[..left].iter().map(|&g| a.generators()[g].degree).collect();
            let sign = block_sign(&degs);
            let inner_args: Vec<NovVector<R>> =
                word[left..left + k2].iter().map(|&g| a.unit_vec(g)).collect();
            let inner = a.apply(k2, &inner_args);
            for (g, c) in inner.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut new_word = Vec::with_capacity(n - k2 + 1);
                new_word.extend_from_slice(&word[..left]);
                new_word.push(g);
                new_word.extend_from_slice(&word[left + k2..]);
                let signed = if sign > 0 { coeff.mul(c) } else { coeff.mul(c).neg() };
                tensor_add(&mut out, new_word, signed);
            }
        }
    }
    out
}

/// Coderivation route for the relation residual: applies `d` twice to the
/// tuple and projects onto length-one words. Equals the direct residual up
/// to the global sign of the outer full contraction.
pub fn coderivation_square_residual<R: Exact>(a: &AInftyData<R>, tuple: &[usize]) -> NovVector<R> {
    let mut first = TensorSum::new();
    tensor_add(&mut first, tuple.to_vec(), NovikovScalar::one().truncate(a.cap().clone()));
    let first = coderivation_step(a, &first);
    let second = coderivation_step(a, &first);
    let mut out = a.zero_vec();
    for (word, coeff) in second {
        if word.len() == 1 {
            out[word[0]] = out[word[0]].add(&coeff);
        }
    }
    out
}

fn coderivation_step<R: Exact>(a: &AInftyData<R>, sum: &TensorSum<R>) -> TensorSum<R> {
    let mut out = TensorSum::new();
    for (word, coeff) in sum {
        for (w, c) in coderivation(a, word, coeff) {
            tensor_add(&mut out, w, c);
        }
    }
    out
}

/// A degree-one element of positive level, as a candidate bounding cochain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundingCochain<R: Exact> {
    pub coords: NovVector<R>,
}

/// Truncated sum `Σ_k m_k(b, …, b)`: the obstruction to `b` bounding.
pub fn mc_residual<R: Exact>(
    a: &AInftyData<R>,
    b: &BoundingCochain<R>,
) -> Result<NovVector<R>, AInftyError> {
    let nonzero = b.coords.iter().any(|s| !s.is_zero());
    let level = a.element_level(&b.coords);
    if nonzero {
        match &level {
            Some(l) if l.is_positive() => {}
            _ => return Err(AInftyError::DivergenceRisk),
        }
    }
    let mut out = a.zero_vec();
    for k in 0..=a.k_max {
        if a.entries(k).is_empty() {
            continue;
        }
        if k > 0 && !nonzero {
            continue;
        }
        // k insertions of b reach level k · level(b); skip once beyond cap.
        if k > 0 {
            if let Some(l) = &level {
                let mut depth = R::zero();
                for _ in 0..k {
                    depth = depth + l.clone();
                }
                if depth >= *a.cap() {
                    continue;
                }
            }
        }
        let args = vec![b.coords.clone(); k];
        let term = a.apply(k, &args);
        for (o, t) in out.iter_mut().zip(term.iter()) {
            *o = o.add(t);
        }
    }
    Ok(out)
}

/// Outcome of the energy-induction solver.
#[derive(Clone, Debug)]
pub enum McOutcome<R: Exact> {
    Solved(BoundingCochain<R>),
    /// First energy level with a residual class outside the image of the
    /// order-zero linearization, with the unkillable slice.
    Obstructed { level: R, class: Vec<R> },
}

/// Solves the Maurer-Cartan equation order by order in the energy level:
/// at each lowest obstructed level `λ`, the order-zero part of `m_1`
/// applied to a degree-one correction at level `λ` must cancel the
/// residual slice; the correction is found by exact elimination, and
/// failure reports the first obstruction.
pub fn mc_solve<R: Exact>(a: &AInftyData<R>) -> Result<McOutcome<R>, AInftyError> {
    let deg1: Vec<usize> = (0..a.generators.len()).filter(|&g| a.generators[g].degree == 1).collect();
    // Order-zero linearization on degree-1 inputs, rows = all generators.
    let lin: Vec<(usize, usize, R)> = a
        .entries(1)
        .iter()
        .flat_map(|e| {
            let src = e.inputs[0];
            let dst = e.output;
            e.scalar
                .terms()
                .iter()
                .filter(|t| {
                    a.generators[dst].level.clone() + t.energy.clone()
                        == a.generators[src].level.clone()
                })
                .map(|t| (src, dst, t.coeff.clone()))
                .collect::<Vec<_>>()
        })
        .collect();

    let mut b = BoundingCochain { coords: a.zero_vec() };
    let max_rounds = 10_000;
    for _ in 0..max_rounds {
        let residual = mc_residual(a, &b)?;
        let Some(level) = a.element_level(&residual) else {
            return Ok(McOutcome::Solved(b));
        };
        if level >= *a.cap() {
            return Ok(McOutcome::Solved(b));
        }
        // Rational slice of the residual at this level.
        let slice: Vec<R> = residual
            .iter()
            .enumerate()
            .map(|(g, s)| {
                let want = level.clone() - a.generators[g].level.clone();
                s.terms()
                    .iter()
                    .find(|t| t.energy == want)
                    .map(|t| t.coeff.clone())
                    .unwrap_or_else(R::zero)
            })
            .collect();
        if !level.is_positive() {
            return Ok(McOutcome::Obstructed { level, class: slice });
        }
        // Unknowns: degree-1 generators with level ≤ λ.
        let unknowns: Vec<usize> =
            deg1.iter().cloned().filter(|&g| a.generators[g].level <= level).collect();
        let n = a.generators.len();
        let mut m: QMatrix<R> = QMatrix::zeros(n, unknowns.len());
        for (col, &g) in unknowns.iter().enumerate() {
            for &(src, dst, ref c) in &lin {
                if src == g {
                    let prev = m.get(dst, col).clone();
                    m.set(dst, col, prev + c.clone());
                }
            }
        }
        let rhs: Vec<R> = slice.iter().map(|c| -c.clone()).collect();
        match m.solve(&rhs) {
            Some(x) => {
                for (col, &g) in unknowns.iter().enumerate() {
                    if x[col].is_zero() {
                        continue;
                    }
                    let energy = level.clone() - a.generators[g].level.clone();
                    let add = NovikovScalar::monomial(x[col].clone(), energy, 0)
                        .truncate(a.cap().clone());
                    b.coords[g] = b.coords[g].add(&add);
                }
            }
            None => return Ok(McOutcome::Obstructed { level, class: slice }),
        }
    }
    unreachable!("energy induction failed to terminate below the cap");
}

impl<R: Exact> QMatrix<R> {
    /// Solves `M x = rhs` by row reduction. Returns `None` if inconsistent;
    /// free variables are set to zero.
    pub fn solve(&self, rhs: &[R]) -> Option<Vec<R>> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, rhs[r].clone());
        }
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut rank = 0usize;
        for col in 0..self.cols {
            let pivot = (rank..self.rows).find(|&r| !aug.get(r, col).is_zero());
            let Some(p) = pivot else { continue };
            aug.swap_rows_pub(rank, p);
            let inv = R::one() / aug.get(rank, col).clone();
            for c in col..=self.cols {
                let v = aug.get(rank, c).clone() * inv.clone();
                aug.set(rank, c, v);
            }
            for r in 0..self.rows {
                if r != rank && !aug.get(r, col).is_zero() {
                    let f = aug.get(r, col).clone();
                    for c in col..=self.cols {
                        let v = aug.get(r, c).clone() - f.clone() * aug.get(rank, c).clone();
                        aug.set(r, c, v);
                    }
                }
            }
            pivots.push((rank, col));
            rank += 1;
        }
        for r in rank..self.rows {
            if !aug.get(r, self.cols).is_zero() {
                return None;
            }
        }
        let mut x = vec![R::zero(); self.cols];
        for &(r, c) in &pivots {
            x[c] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    fn swap_rows_pub(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            let x = self.get(a, c).clone();
            let y = self.get(b, c).clone();
            self.set(a, c, y);
            self.set(b, c, x);
        }
    }
}

/// Result of deforming by a candidate cochain.
pub struct Deformed<R: Exact> {
    pub algebra: AInftyData<R>,
    /// Whether the cochain solved the Maurer-Cartan equation below cap;
    /// when false the deformed structure has a nonzero `m_0`.
    pub mc_solved: bool,
}

/// Deforms the operations by inserting the exponential of `b` in every
/// slot: `m_k^b(x_k, …, x_1) = Σ m(b^{j_k}, x_k, …, x_1, b^{j_0})`.
/// Insertions carry no signs since `b` has shifted degree zero. The
/// expansion is exact below the cap because the operation family is
/// finitely supported in arity.
pub fn deform<R: Exact>(
    a: &AInftyData<R>,
    b: &BoundingCochain<R>,
) -> Result<Deformed<R>, AInftyError> {
    let residual = mc_residual(a, b)?;
    let mc_solved = residual.iter().all(|s| s.is_zero());
    let b_nonzero = b.coords.iter().any(|s| !s.is_zero());

    let mut out = AInftyData::new(a.generators.clone(), a.k_max, a.cap.clone());
    for j in 0..=a.k_max {
        for tuple in a.tuples(j) {
            let mut image = out.zero_vec();
            // Total big arity n = j + insertions; distribute insertions
            // over j + 1 slots.
            for n in j..=a.k_max {
                if a.entries(n).is_empty() {
                    continue;
                }
                let extra = n - j;
                if extra > 0 && !b_nonzero {
                    continue;
                }
                for comp in compositions(extra, j + 1) {
                    let mut args: Vec<NovVector<R>> = Vec::with_capacity(n);
                    for (slot, &g) in tuple.iter().enumerate() {
                        for _ in 0..comp[slot] {
                            args.push(b.coords.clone());
                        }
                        args.push(a.unit_vec(g));
                    }
                    for _ in 0..comp[j] {
                        args.push(b.coords.clone());
                    }
                    let term = a.apply(n, &args);
                    for (o, t) in image.iter_mut().zip(term.iter()) {
                        *o = o.add(t);
                    }
                }
            }
            for (g, s) in image.iter().enumerate() {
                if !s.is_zero() {
                    out.add_entry(j, tuple.clone(), g, s.clone())
                        .expect("deformed entries satisfy degree and filtration rules");
                }
            }
        }
    }
    Ok(Deformed { algebra: out, mc_solved })
}

/// All ways to write `total` as an ordered sum of `slots` nonnegative parts.
fn compositions(total: usize, slots: usize) -> Vec<Vec<usize>> {
    if slots == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, slots - 1) {
            let mut v = Vec::with_capacity(slots);
            v.push(first);
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

// --- wire form ---------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct WireOperation {
    pub k: usize,
    pub inputs: Vec<String>,
    pub output: String,
    pub scalar: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
pub struct WireAInfty {
    pub generators: Vec<crate::filtered::WireGenerator>,
    pub operations: Vec<WireOperation>,
    pub k_max: usize,
    pub cap: String,
}

impl<R: Exact> AInftyData<R> {
    pub fn to_wire(&self) -> WireAInfty {
        WireAInfty {
            generators: self
                .generators
                .iter()
                .map(|g| crate::filtered::WireGenerator {
                    name: g.name.clone(),
                    degree: g.degree,
                    level: g.level.format_ratio(),
                })
                .collect(),
            operations: self
                .ops
                .iter()
                .flat_map(|(&k, entries)| {
                    entries.iter().map(move |e| WireOperation {
                        k,
                        inputs: e.inputs.iter().map(|&i| self.generators[i].name.clone()).collect(),
                        output: self.generators[e.output].name.clone(),
                        scalar: serde_json::to_value(&e.scalar).expect("scalar wire form"),
                    })
                })
                .collect(),
            k_max: self.k_max,
            cap: self.cap.format_ratio(),
        }
    }

    pub fn from_wire(wire: &WireAInfty) -> Result<Self, String> {
        let cap =
            R::parse_ratio(&wire.cap).ok_or_else(|| format!("/cap: bad rational {:?}", wire.cap))?;
        let mut gens = Vec::new();
        for (n, g) in wire.generators.iter().enumerate() {
            let level = R::parse_ratio(&g.level)
                .ok_or_else(|| format!("/generators/{n}/level: bad rational {:?}", g.level))?;
            gens.push(Generator { name: g.name.clone(), degree: g.degree, level });
        }
        let mut a = AInftyData::new(
            gens,
            wire.operations.iter().map(|o| o.k).max().unwrap_or(0).max(2),
            cap,
        );
        let names: Vec<String> = a.generators.iter().map(|g| g.name.clone()).collect();
        let index = |name: &str, path: String| -> Result<usize, String> {
            names
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| format!("{path}: unknown generator {name:?}"))
        };
        for (n, op) in wire.operations.iter().enumerate() {
            let scalar: NovikovScalar<R> = serde_json::from_value(op.scalar.clone())
                .map_err(|e| format!("/operations/{n}/scalar: {e}"))?;
            let mut inputs = Vec::new();
            for (m, name) in op.inputs.iter().enumerate() {
                inputs.push(index(name, format!("/operations/{n}/inputs/{m}"))?);
            }
            let output = index(&op.output, format!("/operations/{n}/output"))?;
            a.add_entry(op.k, inputs, output, scalar)
                .map_err(|e| format!("/operations/{n}: {e}"))?;
        }
        a.k_max = wire.k_max.max(a.ops.keys().cloned().max().unwrap_or(0));
        Ok(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use crate::{Nov, Rat};

    fn gen(name: &str, degree: i64, level: Rat) -> Generator<Rat> {
        Generator { name: name.into(), degree, level }
    }

    /// Truncated polynomial algebra ℚ[t]/t³ in degree 0, product only.
    fn assoc_toy() -> AInftyData<Rat> {
        let gens =
            vec![gen("one", 0, rat(0, 1)), gen("t", 0, rat(0, 1)), gen("t2", 0, rat(0, 1))];
        let mut a = AInftyData::new(gens, 4, rat(8, 1));
        let table = [
            (0usize, 0usize, 0usize),
            (0, 1, 1),
            (1, 0, 1),
            (0, 2, 2),
            (2, 0, 2),
            (1, 1, 2),
        ];
        for (x, y, z) in table {
            a.add_entry(2, vec![x, y], z, Nov::from_int(1)).unwrap();
        }
        a
    }

    /// Degree-counting check: m₂ on degree-0 inputs must land in degree 0
    /// (Σdeg − k + 2 = 0 − 2 + 2).
    #[test]
    fn degree_bookkeeping_enforced() {
        let gens = vec![gen("a", 0, rat(0, 1)), gen("b", 1, rat(0, 1))];
        let mut a = AInftyData::new(gens, 3, rat(8, 1));
        let err = a.add_entry(2, vec![0, 0], 1, Nov::from_int(1)).unwrap_err();
        assert!(matches!(err, AInftyError::DegreeMismatch { expected: 0, got: 1 }));
    }

    #[test]
    fn filtration_rule_enforced() {
        let gens = vec![gen("a", 0, rat(1, 1)), gen("b", 1, rat(0, 1))];
        let mut a = AInftyData::new(gens, 3, rat(8, 1));
        // Output level 0 + valuation 0 < input level 1.
        let err = a.add_entry(1, vec![0], 1, Nov::from_int(1)).unwrap_err();
        assert!(matches!(err, AInftyError::FiltrationViolation(_)));
        assert!(a.add_entry(1, vec![0], 1, Nov::monomial(rat(1, 1), rat(1, 1), 0)).is_ok());
    }

    #[test]
    fn associative_encoding_passes() {
        let a = assoc_toy();
        let report = relation_check(&a);
        assert!(report.passed(), "witnesses: {:?}", report.witnesses.len());
    }

    #[test]
    fn square_nonzero_m1_fails_with_witness() {
        let gens = vec![gen("a", 0, rat(0, 1)), gen("b", 1, rat(0, 1)), gen("c", 2, rat(0, 1))];
        let mut a = AInftyData::new(gens, 3, rat(8, 1));
        a.add_entry(1, vec![0], 1, Nov::from_int(1)).unwrap();
        a.add_entry(1, vec![1], 2, Nov::from_int(1)).unwrap();
        let report = relation_check(&a);
        assert!(!report.passed());
        let w = &report.witnesses[0];
        assert_eq!(w.arity, 1);
        assert_eq!(w.tuple, vec![0]);
    }

    #[test]
    fn perturbed_associative_fails() {
        let mut a = assoc_toy();
        a.add_entry(2, vec![1, 2], 0, Nov::from_int(1)).unwrap();
        assert!(!relation_check(&a).passed());
    }

    #[test]
    fn coderivation_route_matches_direct_route() {
        // On the associative toy and on a perturbed variant, the squared
        // coderivation projected to words of length one must equal minus
        // the direct residual, term by term.
        for a in [assoc_toy(), {
            let mut p = assoc_toy();
            p.add_entry(2, vec![2, 2], 1, Nov::from_int(1)).unwrap();
            p
        }] {
            for k in 0..=3usize {
                for tuple in a.tuples(k) {
                    let direct = relation_residual(&a, &tuple);
                    let via_coder = coderivation_square_residual(&a, &tuple);
                    for (d, c) in direct.iter().zip(via_coder.iter()) {
                        assert!(d.add(c).is_zero(), "tuple {tuple:?}: {d} vs {c}");
                    }
                }
            }
        }
    }

    /// m₀ = T e₁, m₁(x) = e₁; then b = −T·x is the unique MC solution.
    fn solvable_toy() -> AInftyData<Rat> {
        let gens = vec![gen("x", 1, rat(0, 1)), gen("e1", 2, rat(0, 1))];
        let mut a = AInftyData::new(gens, 3, rat(6, 1));
        a.add_entry(0, vec![], 1, Nov::monomial(rat(1, 1), rat(1, 1), 0)).unwrap();
        a.add_entry(1, vec![0], 1, Nov::from_int(1)).unwrap();
        a
    }

    #[test]
    fn mc_residual_cases() {
        let a = solvable_toy();
        let zero = BoundingCochain { coords: vec![Nov::zero(), Nov::zero()] };
        let r = mc_residual(&a, &zero).unwrap();
        // b = 0: residual is m₀(1).
        assert_eq!(r[1], Nov::monomial(rat(1, 1), rat(1, 1), 0).truncate(rat(6, 1)));
        let b = BoundingCochain {
            coords: vec![Nov::monomial(rat(-1, 1), rat(1, 1), 0), Nov::zero()],
        };
        let r2 = mc_residual(&a, &b).unwrap();
        assert!(r2.iter().all(|s| s.is_zero()));
        // Valuation-zero cochain is rejected.
        let bad = BoundingCochain { coords: vec![Nov::from_int(1), Nov::zero()] };
        assert!(matches!(mc_residual(&a, &bad), Err(AInftyError::DivergenceRisk)));
    }

    #[test]
    fn mc_solver_recovers_planted_solution() {
        let a = solvable_toy();
        match mc_solve(&a).unwrap() {
            McOutcome::Solved(b) => {
                assert_eq!(
                    b.coords[0],
                    Nov::monomial(rat(-1, 1), rat(1, 1), 0).truncate(rat(6, 1))
                );
                assert!(b.coords[1].is_zero());
            }
            McOutcome::Obstructed { .. } => panic!("expected a solution"),
        }
    }

    #[test]
    fn mc_solver_zero_obstruction_when_m0_vanishes() {
        let a = assoc_toy();
        match mc_solve(&a).unwrap() {
            McOutcome::Solved(b) => assert!(b.coords.iter().all(|s| s.is_zero())),
            McOutcome::Obstructed { .. } => panic!("unobstructed"),
        }
    }

    #[test]
    fn mc_solver_reports_first_obstruction() {
        // m₀ hits a generator not in the image of the linearization.
        let gens = vec![gen("x", 1, rat(0, 1)), gen("e1", 2, rat(0, 1)), gen("e2", 2, rat(0, 1))];
        let mut a = AInftyData::new(gens, 3, rat(6, 1));
        a.add_entry(0, vec![], 2, Nov::monomial(rat(1, 1), rat(1, 1), 0)).unwrap();
        a.add_entry(1, vec![0], 1, Nov::from_int(1)).unwrap();
        match mc_solve(&a).unwrap() {
            McOutcome::Obstructed { level, class } => {
                assert_eq!(level, rat(1, 1));
                assert_eq!(class[2], rat(1, 1));
            }
            McOutcome::Solved(_) => panic!("expected obstruction"),
        }
    }

    #[test]
    fn deform_by_zero_is_identity() {
        let a = assoc_toy();
        let zero = BoundingCochain { coords: a.zero_vec() };
        let d = deform(&a, &zero).unwrap();
        assert!(d.mc_solved);
        for k in 0..=a.k_max {
            for tuple in a.tuples(k) {
                let args: Vec<_> = tuple.iter().map(|&g| a.unit_vec(g)).collect();
                assert_eq!(a.apply(k, &args), d.algebra.apply(k, &args));
            }
        }
    }

    #[test]
    fn deform_by_solution_kills_m0_and_squares_m1() {
        let a = solvable_toy();
        let McOutcome::Solved(b) = mc_solve(&a).unwrap() else { panic!("solvable") };
        let d = deform(&a, &b).unwrap();
        assert!(d.mc_solved);
        assert!(d.algebra.entries(0).is_empty(), "m₀^b must vanish");
        // (m₁^b)² = 0 on every generator.
        for g in 0..d.algebra.generators().len() {
            let once = d.algebra.apply(1, &[d.algebra.unit_vec(g)]);
            let twice = d.algebra.apply(1, &[once]);
            assert!(twice.iter().all(|s| s.is_zero()));
        }
    }

    #[test]
    fn deform_by_non_solution_exposes_residual_as_m0() {
        let a = solvable_toy();
        let b = BoundingCochain {
            coords: vec![Nov::monomial(rat(1, 2), rat(1, 1), 0), Nov::zero()],
        };
        let d = deform(&a, &b).unwrap();
        assert!(!d.mc_solved);
        let expect = mc_residual(&a, &b).unwrap();
        let got = d.algebra.apply(0, &[]);
        assert_eq!(got, expect);
    }

    /// Composite deformation at the residual level: inserting `b'` into
    /// the `b`-deformed operations expands every mixed word of `b`'s and
    /// `b'`'s exactly once, so it equals the residual of `b + b'`.
    #[test]
    fn composite_deformation_residual_identity() {
        let a = solvable_toy();
        let b = BoundingCochain {
            coords: vec![Nov::monomial(rat(-1, 1), rat(1, 1), 0), Nov::zero()],
        };
        let b_prime = BoundingCochain {
            coords: vec![Nov::monomial(rat(1, 3), rat(3, 2), 0), Nov::zero()],
        };
        let deformed = deform(&a, &b).unwrap();
        let lhs = mc_residual(&deformed.algebra, &b_prime).unwrap();
        let sum = BoundingCochain {
            coords: b
                .coords
                .iter()
                .zip(b_prime.coords.iter())
                .map(|(x, y)| x.add(y))
                .collect(),
        };
        let rhs = mc_residual(&a, &sum).unwrap();
        for (l, r) in lhs.iter().zip(rhs.iter()) {
            assert!(l.sub(r).is_zero(), "{l} vs {r}");
        }
    }

    #[test]
    fn wire_round_trip() {
        let a = assoc_toy();
        let wire = a.to_wire();
        let json = serde_json::to_string(&wire).unwrap();
        let back: WireAInfty = serde_json::from_str(&json).unwrap();
        let a2 = AInftyData::<Rat>::from_wire(&back).unwrap();
        assert!(relation_check(&a2).passed());
        assert_eq!(a.generators(), a2.generators());
    }
}
