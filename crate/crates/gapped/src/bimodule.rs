//! Filtered A-infinity bimodules over a pair of truncated algebras, and
//! the differential deformed by a pair of bounding cochains.
//!
//! The operator family `n_{k₁,k₀}` consumes `k₁` elements of the left
//! algebra, one center element, and `k₀` elements of the right algebra,
//! written in the descending order `n(y_{k₁}, …, y_1; x; z_{k₀}, …, z_1)`.
//! Degree bookkeeping: an entry raises `Σ|yᵢ|' + deg x + Σ|zⱼ|'` by exactly
//! one (primes are shifted degrees); filtration: output level plus scalar
//! valuation is at least the sum of all input levels.
//!
//! The bimodule relation is the coderivation square on strings
//! `(ȳ | x | z̄)`: inner `n` on a block around the center, plus algebra
//! contractions on either side, with the same positional sign rule as the
//! algebra relation, counting the center with its unshifted degree. For
//! bounding cochains `b₁`, `b₀` the deformed differential is
//! `δ(x) = Σ n(b₁^{k₁}; x; b₀^{k₀})`; insertions carry no signs.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ainfty::{AInftyData, BoundingCochain};
use crate::elimination::NovVector;
use crate::filtered::{FilteredComplex, FilteredMap, Generator};
use crate::novikov::NovikovScalar;
use crate::scalar::Exact;

/// One sparse tensor entry of `n_{k₁,k₀}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimodEntry<R: Exact> {
    /// Left algebra generators, written order `y_{k₁} … y_1`.
    pub left_inputs: Vec<usize>,
    pub center_in: usize,
    /// Right algebra generators, written order `z_{k₀} … z_1`.
    pub right_inputs: Vec<usize>,
    pub center_out: usize,
    pub scalar: NovikovScalar<R>,
}

/// Bimodule data: the two algebras, the center generators, the operators.
#[derive(Clone, Debug)]
pub struct BimoduleData<R: Exact> {
    pub left: AInftyData<R>,
    pub right: AInftyData<R>,
    center: Vec<Generator<R>>,
    ops: BTreeMap<(usize, usize), Vec<BimodEntry<R>>>,
    cap: R,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BimoduleError {
    #[error("unknown generator index {0}")]
    UnknownGenerator(usize),
    #[error("entry violates degree bookkeeping: expected shift {expected}, got {got}")]
    DegreeMismatch { expected: i64, got: i64 },
    #[error("entry violates filtration by {0}")]
    FiltrationViolation(String),
    #[error("bounding cochain has non-positive level")]
    DivergenceRisk,
    #[error("deformed differential does not square to zero: center {center} carries {witness}")]
    SquareNonzero { center: String, witness: String },
}

impl<R: Exact> BimoduleData<R> {
    pub fn new(left: AInftyData<R>, right: AInftyData<R>, center: Vec<Generator<R>>, cap: R) -> Self {
        BimoduleData { left, right, center, ops: BTreeMap::new(), cap }
    }

    pub fn center(&self) -> &[Generator<R>] {
        &self.center
    }

    pub fn cap(&self) -> &R {
        &self.cap
    }

    pub fn entries(&self, k1: usize, k0: usize) -> &[BimodEntry<R>] {
        self.ops.get(&(k1, k0)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn arities(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.ops.keys().cloned()
    }

    pub fn add_entry(
        &mut self,
        left_inputs: Vec<usize>,
        center_in: usize,
        right_inputs: Vec<usize>,
        center_out: usize,
        scalar: NovikovScalar<R>,
    ) -> Result<(), BimoduleError> {
        for &i in &left_inputs {
            if i >= self.left.generators().len() {
                return Err(BimoduleError::UnknownGenerator(i));
            }
        }
        for &i in &right_inputs {
            if i >= self.right.generators().len() {
                return Err(BimoduleError::UnknownGenerator(i));
            }
        }
        if center_in >= self.center.len() || center_out >= self.center.len() {
            return Err(BimoduleError::UnknownGenerator(center_in.max(center_out)));
        }
        let scalar = scalar.truncate(self.cap.clone());
        if scalar.is_zero() {
            return Ok(());
        }
        // Shifted-degree raise by one.
        let shifted_in: i64 = left_inputs
            .iter()
            .map(|&i| self.left.generators()[i].degree - 1)
            .chain(right_inputs.iter().map(|&i| self.right.generators()[i].degree - 1))
            .sum::<i64>()
            + self.center[center_in].degree;
        let expected = shifted_in + 1;
        for t in scalar.terms() {
            let got = self.center[center_out].degree + t.index;
            if got != expected {
                return Err(BimoduleError::DegreeMismatch { expected, got });
            }
        }
        let level_in: R = left_inputs
            .iter()
            .map(|&i| self.left.generators()[i].level.clone())
            .chain(right_inputs.iter().map(|&i| self.right.generators()[i].level.clone()))
            .fold(self.center[center_in].level.clone(), |acc, l| acc + l);
        if let Some(v) = scalar.valuation() {
            let margin = self.center[center_out].level.clone() + v - level_in;
            if margin < R::zero() {
                return Err(BimoduleError::FiltrationViolation((-margin).format_ratio()));
            }
        }
        let key = (left_inputs.len(), right_inputs.len());
        self.ops.entry(key).or_default().push(BimodEntry {
            left_inputs,
            center_in,
            right_inputs,
            center_out,
            scalar,
        });
        Ok(())
    }

    fn zero_center(&self) -> NovVector<R> {
        vec![NovikovScalar::zero().truncate(self.cap.clone()); self.center.len()]
    }

    /// Multilinear evaluation on elements: left args, center element,
    /// right args (written order).
    pub fn apply(
        &self,
        left_args: &[NovVector<R>],
        center: &NovVector<R>,
        right_args: &[NovVector<R>],
    ) -> NovVector<R> {
        let mut out = self.zero_center();
        'entries: for e in self.entries(left_args.len(), right_args.len()) {
            let mut coeff = center[e.center_in].clone();
            if coeff.is_zero() {
                continue;
            }
            for (slot, &g) in e.left_inputs.iter().enumerate() {
                let c = &left_args[slot][g];
                if c.is_zero() {
                    continue 'entries;
                }
                coeff = coeff.mul(c);
            }
            for (slot, &g) in e.right_inputs.iter().enumerate() {
                let c = &right_args[slot][g];
                if c.is_zero() {
                    continue 'entries;
                }
                coeff = coeff.mul(c);
            }
            out[e.center_out] = out[e.center_out].add(&coeff.mul(&e.scalar));
        }
        out
    }

    /// The center as a filtered complex carrying a given differential.
    pub fn center_complex(&self, diff: Option<&FilteredMap<R>>) -> FilteredComplex<R> {
        let mut c = FilteredComplex::new(self.center.clone(), self.cap.clone())
            .expect("center names unique");
        if let Some(d) = diff {
            for (i, j, s) in d.entries() {
                c.set_entry_idx(i, j, s.clone());
            }
        }
        c
    }
}

fn sign_of(count: usize, deg_sum: i64) -> i64 {
    let i = count as i64 - 1;
    if (i + deg_sum).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Residual of the bimodule relation on one string `(ȳ | x | z̄)` of
/// generators. The three families: inner `n` on a block around the center,
/// left-algebra contractions, right-algebra contractions, each signed by
/// the positional rule on the elements to its left.
pub fn bimodule_relation_residual<R: Exact>(
    bm: &BimoduleData<R>,
    ys: &[usize],
    x: usize,
    zs: &[usize],
) -> NovVector<R> {
    let k1 = ys.len();
    let k0 = zs.len();
    let lgen = bm.left.generators();
    let rgen = bm.right.generators();
    let mut residual = bm.zero_center();
    let add = |v: NovVector<R>, sign: i64, residual: &mut NovVector<R>| {
        for (r, t) in residual.iter_mut().zip(v.iter()) {
            *r = if sign > 0 { r.add(t) } else { r.sub(t) };
        }
    };

    // (a) Inner n on (y_{na}..y_1 | x | z_{k0}..z_{k0-nz+1}).
    for na in 0..=k1 {
        for nz in 0..=k0 {
            let left_out: &[usize] = &ys[..k1 - na];
            let degs: i64 = left_out.iter().map(|&g| lgen[g].degree).sum();
            let sign = sign_of(left_out.len(), degs);
            let inner_left: Vec<NovVector<R>> =
                ys[k1 - na..].iter().map(|&g| unit(lgen.len(), g, bm.cap())).collect();
            let inner_right: Vec<NovVector<R>> =
                zs[..nz].iter().map(|&g| unit(rgen.len(), g, bm.cap())).collect();
            let inner = bm.apply(&inner_left, &unit(bm.center.len(), x, bm.cap()), &inner_right);
            let outer_left: Vec<NovVector<R>> =
                left_out.iter().map(|&g| unit(lgen.len(), g, bm.cap())).collect();
            let outer_right: Vec<NovVector<R>> =
                zs[nz..].iter().map(|&g| unit(rgen.len(), g, bm.cap())).collect();
            let term = bm.apply(&outer_left, &inner, &outer_right);
            add(term, sign, &mut residual);
        }
    }

    // (b) Left-algebra contraction m_j on y_{c+j}..y_{c+1} blocks.
    let left_arities: Vec<usize> = bm.left.arities().collect();
    for &j in &left_arities {
        if j > k1 {
            continue;
        }
        for start in 0..=(k1 - j) {
            let degs: i64 = ys[..start].iter().map(|&g| lgen[g].degree).sum();
            let sign = sign_of(start, degs);
            let block: Vec<NovVector<R>> =
                ys[start..start + j].iter().map(|&g| unit(lgen.len(), g, bm.cap())).collect();
            let contracted = bm.left.apply(j, &block);
            let mut new_left: Vec<NovVector<R>> =
                ys[..start].iter().map(|&g| unit(lgen.len(), g, bm.cap())).collect();
            new_left.push(contracted);
            new_left.extend(ys[start + j..].iter().map(|&g| unit(lgen.len(), g, bm.cap())));
            let right: Vec<NovVector<R>> =
                zs.iter().map(|&g| unit(rgen.len(), g, bm.cap())).collect();
            let term = bm.apply(&new_left, &unit(bm.center.len(), x, bm.cap()), &right);
            add(term, sign, &mut residual);
        }
    }

    // (c) Right-algebra contraction; preceding elements are all y's, the
    // center (unshifted degree), and the z's left of the block.
    let right_arities: Vec<usize> = bm.right.arities().collect();
    for &j in &right_arities {
        if j > k0 {
            continue;
        }
        for start in 0..=(k0 - j) {
            let mut degs: i64 = ys.iter().map(|&g| lgen[g].degree).sum();
            degs += bm.center[x].degree;
            degs += zs[..start].iter().map(|&g| rgen[g].degree).sum::<i64>();
            let count = k1 + 1 + start;
            let sign = sign_of(count, degs);
            let block: Vec<NovVector<R>> =
                zs[start..start + j].iter().map(|&g| unit(rgen.len(), g, bm.cap())).collect();
            let contracted = bm.right.apply(j, &block);
            let left: Vec<NovVector<R>> =
                ys.iter().map(|&g| unit(lgen.len(), g, bm.cap())).collect();
            let mut new_right: Vec<NovVector<R>> =
                zs[..start].iter().map(|&g| unit(rgen.len(), g, bm.cap())).collect();
            new_right.push(contracted);
            new_right.extend(zs[start + j..].iter().map(|&g| unit(rgen.len(), g, bm.cap())));
            let term = bm.apply(&left, &unit(bm.center.len(), x, bm.cap()), &new_right);
            add(term, sign, &mut residual);
        }
    }

    residual
}

fn unit<R: Exact>(n: usize, g: usize, cap: &R) -> NovVector<R> {
    let mut v = vec![NovikovScalar::zero().truncate(cap.clone()); n];
    v[g] = NovikovScalar::one().truncate(cap.clone());
    v
}

/// Checks the bimodule relation on all strings with `k₁ + k₀ ≤ arity_cap`.
pub struct BimoduleReport<R: Exact> {
    pub witnesses: Vec<(Vec<usize>, usize, Vec<usize>, NovVector<R>)>,
}

impl<R: Exact> BimoduleReport<R> {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

pub fn bimodule_check<R: Exact>(bm: &BimoduleData<R>, arity_cap: usize) -> BimoduleReport<R> {
    let nl = bm.left.generators().len();
    let nr = bm.right.generators().len();
    let mut witnesses = Vec::new();
    for k1 in 0..=arity_cap {
        for k0 in 0..=(arity_cap - k1) {
            for ys in tuples(nl, k1) {
                for x in 0..bm.center.len() {
                    for zs in tuples(nr, k0) {
                        let residual = bimodule_relation_residual(bm, &ys, x, &zs);
                        if residual.iter().any(|s| !s.is_zero()) {
                            witnesses.push((ys.clone(), x, zs.clone(), residual));
                        }
                    }
                }
            }
        }
    }
    BimoduleReport { witnesses }
}

fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * n.max(1));
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

/// Builds the differential deformed by the pair of bounding cochains,
/// `δ(x) = Σ n(b₁^{⊗k₁}; x; b₀^{⊗k₀})`, verifies `δ² = 0` below the cap,
/// and returns it as a filtered map on the center complex.
pub fn deformed_differential<R: Exact>(
    bm: &BimoduleData<R>,
    b1: &BoundingCochain<R>,
    b0: &BoundingCochain<R>,
) -> Result<FilteredMap<R>, BimoduleError> {
    for (alg, b) in [(&bm.left, b1), (&bm.right, b0)] {
        if b.coords.iter().any(|s| !s.is_zero()) {
            match alg.element_level(&b.coords) {
                Some(l) if l.is_positive() => {}
                _ => return Err(BimoduleError::DivergenceRisk),
            }
        }
    }
    let b1_zero = b1.coords.iter().all(|s| s.is_zero());
    let b0_zero = b0.coords.iter().all(|s| s.is_zero());

    let center = bm.center_complex(None);
    let mut delta = FilteredMap::zero(&center, &center, 1);
    for x in 0..bm.center.len() {
        let mut image = bm.zero_center();
        for (k1, k0) in bm.arities() {
            if (k1 > 0 && b1_zero) || (k0 > 0 && b0_zero) {
                continue;
            }
            let left = vec![b1.coords.clone(); k1];
            let right = vec![b0.coords.clone(); k0];
            let term = bm.apply(&left, &unit(bm.center.len(), x, bm.cap()), &right);
            for (o, t) in image.iter_mut().zip(term.iter()) {
                *o = o.add(t);
            }
        }
        for (j, s) in image.iter().enumerate() {
            if !s.is_zero() {
                delta.set_entry(x, j, s.clone());
            }
        }
    }
    let square = delta.compose(&delta).expect("same shape");
    for (i, j, s) in square.entries() {
        if !s.is_zero() {
            return Err(BimoduleError::SquareNonzero {
                center: format!("{} -> {}", bm.center[i].name, bm.center[j].name),
                witness: s.to_string(),
            });
        }
    }
    Ok(delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::{mc_solve, McOutcome};
    use crate::elimination::homology;
    use crate::rat;
    use crate::{Nov, Rat};

    fn gen(name: &str, degree: i64, level: Rat) -> Generator<Rat> {
        Generator { name: name.into(), degree, level }
    }

    fn empty_algebra() -> AInftyData<Rat> {
        AInftyData::new(vec![], 3, rat(8, 1))
    }

    /// Only n₀₀, squaring to zero: x → y → 0.
    fn differential_only() -> BimoduleData<Rat> {
        let center = vec![gen("x", 0, rat(0, 1)), gen("y", 1, rat(0, 1))];
        let mut bm = BimoduleData::new(empty_algebra(), empty_algebra(), center, rat(8, 1));
        bm.add_entry(vec![], 0, vec![], 1, Nov::from_int(1)).unwrap();
        bm
    }

    #[test]
    fn differential_only_passes() {
        let bm = differential_only();
        assert!(bimodule_check(&bm, 2).passed());
        let b = BoundingCochain { coords: vec![] };
        let delta = deformed_differential(&bm, &b, &b).unwrap();
        assert_eq!(delta.entry(0, 1).unwrap(), &Nov::from_int(1).truncate(rat(8, 1)));
    }

    #[test]
    fn square_nonzero_detected() {
        let center =
            vec![gen("x", 0, rat(0, 1)), gen("y", 1, rat(0, 1)), gen("z", 2, rat(0, 1))];
        let mut bm = BimoduleData::new(empty_algebra(), empty_algebra(), center, rat(8, 1));
        bm.add_entry(vec![], 0, vec![], 1, Nov::from_int(1)).unwrap();
        bm.add_entry(vec![], 1, vec![], 2, Nov::from_int(1)).unwrap();
        assert!(!bimodule_check(&bm, 1).passed());
        let b = BoundingCochain { coords: vec![] };
        assert!(matches!(
            deformed_differential(&bm, &b, &b),
            Err(BimoduleError::SquareNonzero { .. })
        ));
    }

    /// Left module over ℚ[α]/α² (α in degree 0): relation reduces to
    /// associativity of the action with even-degree signs.
    fn left_module() -> BimoduleData<Rat> {
        let gens = vec![gen("one", 0, rat(0, 1)), gen("al", 0, rat(0, 1))];
        let mut left = AInftyData::new(gens, 3, rat(8, 1));
        for (a, b, c) in [(0usize, 0usize, 0usize), (0, 1, 1), (1, 0, 1)] {
            left.add_entry(2, vec![a, b], c, Nov::from_int(1)).unwrap();
        }
        // α² = 0: no entry.
        let center = vec![gen("u", 0, rat(0, 1)), gen("v", 0, rat(0, 1))];
        let mut bm = BimoduleData::new(left, empty_algebra(), center, rat(8, 1));
        // n_{1,0}(one; u) = u, n_{1,0}(one; v) = v, n_{1,0}(α; u) = v.
        bm.add_entry(vec![0], 0, vec![], 0, Nov::from_int(1)).unwrap();
        bm.add_entry(vec![0], 1, vec![], 1, Nov::from_int(1)).unwrap();
        bm.add_entry(vec![1], 0, vec![], 1, Nov::from_int(1)).unwrap();
        bm
    }

    #[test]
    fn module_action_satisfies_relation() {
        let bm = left_module();
        let report = bimodule_check(&bm, 3);
        assert!(report.passed(), "{} witnesses", report.witnesses.len());
    }

    #[test]
    fn broken_module_action_caught() {
        let mut bm = left_module();
        // n(α; v) = u breaks associativity against α² = 0.
        bm.add_entry(vec![1], 1, vec![], 0, Nov::from_int(1)).unwrap();
        assert!(!bimodule_check(&bm, 3).passed());
    }

    /// Deformation toy: the left algebra is the solvable one (m₀ = T e₁,
    /// m₁(x) = e₁, solution b₁ = −T x); n_{1,0}(x; ·) maps u to v at
    /// valuation zero and n₀₀ = T v-component killer arranged so that
    /// δ_{b₁,0} = n₀₀ + n₁₀(b₁; ·) squares to zero.
    #[test]
    fn deformed_differential_squares_to_zero_with_insertions() {
        let lgens = vec![gen("x", 1, rat(0, 1)), gen("e1", 2, rat(0, 1))];
        let mut left = AInftyData::new(lgens, 3, rat(8, 1));
        left.add_entry(0, vec![], 1, Nov::monomial(rat(1, 1), rat(1, 1), 0)).unwrap();
        left.add_entry(1, vec![0], 1, Nov::from_int(1)).unwrap();
        let McOutcome::Solved(b1) = mc_solve(&left).unwrap() else { panic!("solvable") };

        let center = vec![gen("u", 0, rat(0, 1)), gen("v", 1, rat(0, 1)), gen("w", 2, rat(0, 1))];
        let mut bm = BimoduleData::new(left, empty_algebra(), center, rat(8, 1));
        // n₀₀(u) = v; n₀₀(v) = T w; n_{1,0}(x; u) = ... arrange δ² = 0:
        // δ(u) = v + n₁₀(b₁; u), δ(v) = T w + n₁₀(b₁; v).
        // With n₁₀(x; v) = w: δ(v) = T w − T w = 0 once b₁ = −T x.
        bm.add_entry(vec![], 0, vec![], 1, Nov::from_int(1)).unwrap();
        bm.add_entry(vec![], 1, vec![], 2, Nov::monomial(rat(1, 1), rat(1, 1), 0)).unwrap();
        bm.add_entry(vec![0], 1, vec![], 2, Nov::from_int(1)).unwrap();
        let b0 = BoundingCochain { coords: vec![] };
        let delta = deformed_differential(&bm, &b1, &b0).unwrap();
        // δ(v) = T w + (−T) w = 0; δ(u) = v.
        assert!(delta.entry(1, 2).is_none());
        assert_eq!(delta.entry(0, 1).unwrap(), &Nov::from_int(1).truncate(rat(8, 1)));

        // HF = ker/im of the deformed differential via the center complex.
        let complex = bm.center_complex(Some(&delta));
        assert!(complex.check().passed());
        let h = homology(&complex);
        assert_eq!(h.field_dim(0), 0);
        assert_eq!(h.field_dim(1), 0);
        assert_eq!(h.field_dim(2), 1);
    }
}
