//! Exact linear algebra: rational matrices, corner-rank tables, and
//! valuation-aware reduction over the truncated Novikov field.
//!
//! The corner-rank table answers, for a matrix whose rows and columns carry
//! energies, the rank of every submatrix `M[rows with energy < b][cols with
//! energy ≥ a]` from a single column reduction; the spectral engine reads
//! all its page dimensions from these numbers.
//!
//! The Novikov-side reduction is a Smith-style elimination over the
//! valuation ring: pivots are chosen with minimal effective order, which
//! keeps every basis change filtration-compatible, so the resulting
//! pairing describes the homology of a filtered complex as interval bars
//! `[birth, death)` plus free classes, exact below the certified cap.

use std::collections::BTreeMap;

use crate::filtered::FilteredComplex;
use crate::novikov::NovikovScalar;
use crate::scalar::Exact;

// --- rational matrices -------------------------------------------------------

/// Dense matrix over an exact field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix<R> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<R>,
}

impl<R: Exact> QMatrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn get(&self, r: usize, c: usize) -> &R {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: R) {
        self.data[r * self.cols + c] = v;
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let pivot = (rank..m.rows).find(|&r| !m.get(r, col).is_zero());
            let Some(p) = pivot else { continue };
            m.swap_rows(rank, p);
            let inv = R::one() / m.get(rank, col).clone();
            for c in col..m.cols {
                let v = m.get(rank, c).clone() * inv.clone();
                m.set(rank, c, v);
            }
            for r in 0..m.rows {
                if r != rank && !m.get(r, col).is_zero() {
                    let f = m.get(r, col).clone();
                    for c in col..m.cols {
                        let v = m.get(r, c).clone() - f.clone() * m.get(rank, c).clone();
                        m.set(r, c, v);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

// --- corner-rank tables -------------------------------------------------------

/// Sparse rational matrix with energy keys on rows and columns, preprocessed
/// so that the rank of every corner `[rows with energy < b] × [cols with
/// energy ≥ a]` is a counting query over a pairing.
///
/// Row and column keys must be supplied in ascending order.
pub struct CornerRanks<R> {
    row_keys: Vec<R>,
    col_keys: Vec<R>,
    /// Pivot pairs (row, col) in original indices.
    pairs: Vec<(usize, usize)>,
}

impl<R: Exact> CornerRanks<R> {
    /// Builds the table from triplets `(row, col, coeff)`.
    pub fn new(row_keys: Vec<R>, col_keys: Vec<R>, triplets: &[(usize, usize, R)]) -> Self {
        debug_assert!(row_keys.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!(col_keys.windows(2).all(|w| w[0] <= w[1]));
        let nr = row_keys.len();
        let nc = col_keys.len();
        // Reverse rows and columns: prefix-row × suffix-col corners become
        // lower-left corners, which the reduction pairing counts.
        let mut cols: Vec<BTreeMap<usize, R>> = vec![BTreeMap::new(); nc];
        for &(r, c, ref v) in triplets {
            if v.is_zero() {
                continue;
            }
            let e = cols[nc - 1 - c].entry(nr - 1 - r).or_insert_with(R::zero);
            *e = e.clone() + v.clone();
        }
        for col in cols.iter_mut() {
            col.retain(|_, v| !v.is_zero());
        }
        // Column reduction with bottom-most pivots, left to right.
        let mut low_owner: BTreeMap<usize, usize> = BTreeMap::new();
        let mut pairs = Vec::new();
        for j in 0..nc {
            loop {
                let Some((&low, _)) = cols[j].iter().next_back() else { break };
                match low_owner.get(&low) {
                    None => {
                        low_owner.insert(low, j);
                        pairs.push((nr - 1 - low, nc - 1 - j));
                        break;
                    }
                    Some(&owner) => {
                        let factor = {
                            let pivot = cols[owner].get(&low).expect("pivot entry").clone();
                            cols[j].get(&low).expect("low entry").clone() / pivot
                        };
                        let owner_col = cols[owner].clone();
                        let col = &mut cols[j];
                        for (r, v) in owner_col {
                            let e = col.entry(r).or_insert_with(R::zero);
                            *e = e.clone() - factor.clone() * v;
                        }
                        col.retain(|_, v| !v.is_zero());
                    }
                }
            }
        }
        CornerRanks { row_keys, col_keys, pairs }
    }

    /// Rank of `M[rows with key < b][cols with key ≥ a]`.
    pub fn rank(&self, b: &R, a: &R) -> usize {
        let row_cut = self.row_keys.partition_point(|k| k < b);
        let col_from = self.col_keys.partition_point(|k| k < a);
        self.pairs.iter().filter(|&&(r, c)| r < row_cut && c >= col_from).count()
    }

    /// Number of columns with key `≥ a`.
    pub fn cols_from(&self, a: &R) -> usize {
        self.col_keys.len() - self.col_keys.partition_point(|k| k < a)
    }

    /// Rank of the full column range `[cols with key ≥ a]` over all rows.
    pub fn rank_full_rows(&self, a: &R) -> usize {
        let col_from = self.col_keys.partition_point(|k| k < a);
        self.pairs.iter().filter(|&&(_, c)| c >= col_from).count()
    }
}

// --- Novikov-side reduction ---------------------------------------------------

/// A homology interval in one degree: the class is born at `birth` and
/// becomes a boundary at `death`; `None` means it survives below the cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bar<R> {
    pub degree: i64,
    pub birth: R,
    pub death: Option<R>,
}

impl<R: Exact> Bar<R> {
    pub fn is_trivial(&self) -> bool {
        match &self.death {
            Some(d) => d <= &self.birth,
            None => false,
        }
    }

    /// True if the bar is alive at energy `e`.
    pub fn alive_at(&self, e: &R) -> bool {
        if e < &self.birth {
            return false;
        }
        match &self.death {
            Some(d) => e < d,
            None => true,
        }
    }
}

/// A vector with Novikov scalar coordinates.
pub type NovVector<R> = Vec<NovikovScalar<R>>;

pub fn vec_is_zero<R: Exact>(v: &NovVector<R>) -> bool {
    v.iter().all(|s| s.is_zero())
}

fn vec_sub_scaled<R: Exact>(v: &mut NovVector<R>, w: &NovVector<R>, f: &NovikovScalar<R>) {
    for (a, b) in v.iter_mut().zip(w.iter()) {
        *a = a.sub(&b.mul(f));
    }
}

/// Outcome of one matrix reduction over the Novikov field.
pub struct Reduction<R: Exact> {
    /// For each pairing: (source column, target row, pivot valuation).
    pub pairs: Vec<(usize, usize, R)>,
    /// Kernel basis vectors in source coordinates; each keeps coordinate one
    /// on its seed column, so its level equals the seed's level.
    pub kernel: Vec<(usize, NovVector<R>)>,
}

/// Pivot selection rule for [`reduce`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotRule {
    /// Minimize the effective order `tgt_level + 𝔳 − src_level`: keeps all
    /// basis changes filtration compatible on both sides, so kernel
    /// vectors keep their seed levels. Used for kernel extraction.
    MinOrder,
    /// Minimize the realized death `tgt_level + 𝔳`: the pivot kills the
    /// row class at the earliest possible energy, giving the interval
    /// decomposition of a quotient by the column span (column operations
    /// on a spanning set are unrestricted). Used for quotient bars.
    MinDeath,
}

/// Reduces the sparse matrix given as columns over target coordinates
/// under the chosen pivot rule (ties broken by position).
pub fn reduce<R: Exact>(
    columns: &[NovVector<R>],
    src_levels: &[R],
    tgt_levels: &[R],
    cap: &R,
    rule: PivotRule,
) -> Reduction<R> {
    let ncols = columns.len();
    let nrows = tgt_levels.len();
    let mut cols: Vec<NovVector<R>> = columns.to_vec();
    // Running change of basis on the source side.
    let mut basis: Vec<NovVector<R>> = (0..ncols)
        .map(|j| {
            let mut v = vec![NovikovScalar::zero().truncate(cap.clone()); ncols];
            v[j] = NovikovScalar::one().truncate(cap.clone());
            v
        })
        .collect();
    let mut col_active = vec![true; ncols];
    let mut row_active = vec![true; nrows];
    let mut pairs = Vec::new();

    loop {
        let mut best: Option<(R, usize, usize, R)> = None; // (order, row, col, valuation)
        for (j, col) in cols.iter().enumerate() {
            if !col_active[j] {
                continue;
            }
            for (i, s) in col.iter().enumerate() {
                if !row_active[i] {
                    continue;
                }
                if let Some(v) = s.valuation() {
                    let key = match rule {
                        PivotRule::MinOrder => {
                            tgt_levels[i].clone() + v.clone() - src_levels[j].clone()
                        }
                        PivotRule::MinDeath => tgt_levels[i].clone() + v.clone(),
                    };
                    let better = match &best {
                        None => true,
                        Some((bo, bi, bj, _)) => key < *bo || (key == *bo && (i, j) < (*bi, *bj)),
                    };
                    if better {
                        best = Some((key, i, j, v));
                    }
                }
            }
        }
        let Some((_, pi, pj, pv)) = best else { break };
        let pivot = cols[pj][pi].clone();
        for j in 0..ncols {
            if j == pj || !col_active[j] || cols[j][pi].is_zero() {
                continue;
            }
            let factor = cols[j][pi].div(&pivot, cap).expect("pivot is invertible");
            let (pcol, pbasis) = (cols[pj].clone(), basis[pj].clone());
            vec_sub_scaled(&mut cols[j], &pcol, &factor);
            vec_sub_scaled(&mut basis[j], &pbasis, &factor);
        }
        pairs.push((pj, pi, pv));
        col_active[pj] = false;
        row_active[pi] = false;
    }

    let kernel = (0..ncols)
        .filter(|&j| col_active[j] && vec_is_zero(&cols[j]))
        .map(|j| (j, basis[j].clone()))
        .collect();
    Reduction { pairs, kernel }
}

/// Kernel-oriented reduction with the order-minimal pivot rule.
pub fn reduce_min_order<R: Exact>(
    columns: &[NovVector<R>],
    src_levels: &[R],
    tgt_levels: &[R],
    cap: &R,
) -> Reduction<R> {
    reduce(columns, src_levels, tgt_levels, cap, PivotRule::MinOrder)
}

/// Solves `Σ xⱼ colⱼ = target` over the truncated Novikov field by Gaussian
/// elimination with minimal-valuation pivoting. Returns the coefficient
/// vector, or `None` if the target is not in the span below the cap.
pub fn solve_in_span<R: Exact>(
    columns: &[NovVector<R>],
    target: &NovVector<R>,
    cap: &R,
) -> Option<Vec<NovikovScalar<R>>> {
    let ncols = columns.len();
    let nrows = target.len();
    let mut cols: Vec<NovVector<R>> = columns.to_vec();
    let mut rhs = target.clone();
    let mut expr: Vec<Vec<NovikovScalar<R>>> = (0..ncols)
        .map(|j| {
            let mut v = vec![NovikovScalar::zero().truncate(cap.clone()); ncols];
            v[j] = NovikovScalar::one().truncate(cap.clone());
            v
        })
        .collect();
    let mut rhs_expr = vec![NovikovScalar::zero().truncate(cap.clone()); ncols];
    let mut row_used = vec![false; nrows];
    let mut col_used = vec![false; ncols];
    loop {
        let mut best: Option<(R, usize, usize)> = None;
        for (j, col) in cols.iter().enumerate() {
            if col_used[j] {
                continue;
            }
            for (i, s) in col.iter().enumerate() {
                if row_used[i] {
                    continue;
                }
                if let Some(v) = s.valuation() {
                    let better = match &best {
                        None => true,
                        Some((bv, bi, bj)) => v < *bv || (v == *bv && (i, j) < (*bi, *bj)),
                    };
                    if better {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        let pivot = cols[pj][pi].clone();
        for j in 0..ncols {
            if j == pj || col_used[j] || cols[j][pi].is_zero() {
                continue;
            }
            let f = cols[j][pi].div(&pivot, cap).expect("invertible pivot");
            let (pc, pe) = (cols[pj].clone(), expr[pj].clone());
            vec_sub_scaled(&mut cols[j], &pc, &f);
            vec_sub_scaled(&mut expr[j], &pe, &f);
        }
        if !rhs[pi].is_zero() {
            let f = rhs[pi].div(&pivot, cap).expect("invertible pivot");
            let pc = cols[pj].clone();
            let pe = expr[pj].clone();
            vec_sub_scaled(&mut rhs, &pc, &f);
            for (a, b) in rhs_expr.iter_mut().zip(pe.iter()) {
                *a = a.add(&b.mul(&f));
            }
        }
        row_used[pi] = true;
        col_used[pj] = true;
    }
    if vec_is_zero(&rhs) {
        Some(rhs_expr)
    } else {
        None
    }
}

/// Homology of a filtered complex over the truncated Novikov field,
/// organized per degree.
pub struct HomologyData<R: Exact> {
    pub bars: Vec<Bar<R>>,
    /// Per degree: representative cocycles of the surviving classes, as
    /// coordinate vectors over that degree's generator slice.
    pub basis: BTreeMap<i64, Vec<NovVector<R>>>,
    /// Per degree: birth levels of the surviving classes.
    pub basis_levels: BTreeMap<i64, Vec<R>>,
    /// Per degree: generator indices (into the complex) of the slice.
    pub slices: BTreeMap<i64, Vec<usize>>,
    /// Per degree: boundary vectors spanning the image of the incoming
    /// differential, in slice coordinates.
    image_vectors: BTreeMap<i64, Vec<NovVector<R>>>,
    cap: R,
}

impl<R: Exact> HomologyData<R> {
    /// Field dimension (classes alive below the cap) per degree.
    pub fn field_dim(&self, degree: i64) -> usize {
        self.basis.get(&degree).map(|b| b.len()).unwrap_or(0)
    }

    /// Number of bars (free or torsion) alive at energy `e` in `degree`.
    pub fn rank_alive_at(&self, degree: i64, e: &R) -> usize {
        self.bars.iter().filter(|b| b.degree == degree && b.alive_at(e)).count()
    }

    /// True when the homology vanishes identically below the cap.
    pub fn is_zero(&self) -> bool {
        self.bars.iter().all(|b| b.is_trivial())
    }

    /// Expresses a cocycle (coordinates over the degree slice) in the
    /// homology basis of its degree. Returns `None` if the vector cannot be
    /// written as a basis combination plus a boundary below the cap.
    pub fn class_of(&self, degree: i64, cocycle_slice: &NovVector<R>) -> Option<Vec<NovikovScalar<R>>> {
        let Some(basis) = self.basis.get(&degree) else {
            return if vec_is_zero(cocycle_slice) { Some(Vec::new()) } else { None };
        };
        let image = self.image_vectors.get(&degree).cloned().unwrap_or_default();
        let mut columns: Vec<NovVector<R>> = basis.clone();
        columns.extend(image);
        if columns.is_empty() {
            return if vec_is_zero(cocycle_slice) { Some(Vec::new()) } else { None };
        }
        solve_in_span(&columns, cocycle_slice, &self.cap).map(|x| x[..basis.len()].to_vec())
    }

    /// Restricts a full-coordinate vector to the slice of `degree`.
    pub fn restrict(&self, degree: i64, full: &NovVector<R>) -> NovVector<R> {
        match self.slices.get(&degree) {
            Some(slice) => slice.iter().map(|&g| full[g].clone()).collect(),
            None => Vec::new(),
        }
    }
}

/// Computes homology bars of a validated filtered complex over the
/// truncated Novikov field, degree by degree. The `e`-grading of scalar
/// entries is stripped first (it is forced by the endpoint degrees).
pub fn homology<R: Exact>(complex: &FilteredComplex<R>) -> HomologyData<R> {
    let cap = complex.cap().clone();
    let gens = complex.generators();
    let mut slices: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, g) in gens.iter().enumerate() {
        slices.entry(g.degree).or_default().push(i);
    }
    let degrees: Vec<i64> = slices.keys().cloned().collect();

    let matrix_of = |q: i64| -> Vec<NovVector<R>> {
        let src = slices.get(&q).cloned().unwrap_or_default();
        let tgt = slices.get(&(q + 1)).cloned().unwrap_or_default();
        src.iter()
            .map(|&i| {
                tgt.iter()
                    .map(|&j| match complex.entry(i, j) {
                        Some(s) => s.strip_index().truncate(cap.clone()),
                        None => NovikovScalar::zero().truncate(cap.clone()),
                    })
                    .collect()
            })
            .collect()
    };

    let mut bars = Vec::new();
    let mut basis = BTreeMap::new();
    let mut basis_levels = BTreeMap::new();
    let mut image_vectors = BTreeMap::new();

    for &q in &degrees {
        let src_idx = slices.get(&q).cloned().unwrap_or_default();
        let src_levels: Vec<R> = src_idx.iter().map(|&i| gens[i].level.clone()).collect();
        let tgt_idx = slices.get(&(q + 1)).cloned().unwrap_or_default();
        let tgt_levels: Vec<R> = tgt_idx.iter().map(|&i| gens[i].level.clone()).collect();

        // Kernel of the outgoing differential.
        let out = matrix_of(q);
        let red = reduce_min_order(&out, &src_levels, &tgt_levels, &cap);
        let kernel_vectors: Vec<NovVector<R>> = red.kernel.iter().map(|(_, v)| v.clone()).collect();
        let kernel_levels: Vec<R> =
            red.kernel.iter().map(|(seed, _)| src_levels[*seed].clone()).collect();

        // Image of the incoming differential, in kernel coordinates.
        let inc = matrix_of(q - 1);
        let mut image_in_kernel: Vec<NovVector<R>> = Vec::new();
        let mut image_raw: Vec<NovVector<R>> = Vec::new();
        for col in &inc {
            if vec_is_zero(col) {
                continue;
            }
            image_raw.push(col.clone());
            let coords = solve_in_span(&kernel_vectors, col, &cap)
                .expect("boundary is a cycle below the cap");
            image_in_kernel.push(coords);
        }

        // Quotient bars: reduce the image inside the kernel.
        let img_levels: Vec<R> = image_in_kernel
            .iter()
            .map(|col| {
                col.iter()
                    .zip(kernel_levels.iter())
                    .filter_map(|(s, l)| s.valuation().map(|v| v + l.clone()))
                    .min()
                    .unwrap_or_else(R::zero)
            })
            .collect();
        let qred = reduce(&image_in_kernel, &img_levels, &kernel_levels, &cap, PivotRule::MinDeath);
        let mut paired_kernel: Vec<Option<R>> = vec![None; kernel_vectors.len()];
        for (_, row, v) in &qred.pairs {
            paired_kernel[*row] = Some(v.clone());
        }
        let mut deg_basis = Vec::new();
        let mut deg_levels = Vec::new();
        for (k, vec) in kernel_vectors.iter().enumerate() {
            let birth = kernel_levels[k].clone();
            match &paired_kernel[k] {
                Some(v) => {
                    bars.push(Bar { degree: q, birth: birth.clone(), death: Some(birth + v.clone()) });
                }
                None => {
                    bars.push(Bar { degree: q, birth: birth.clone(), death: None });
                    deg_basis.push(vec.clone());
                    deg_levels.push(birth);
                }
            }
        }
        basis.insert(q, deg_basis);
        basis_levels.insert(q, deg_levels);
        image_vectors.insert(q, image_raw);
    }

    bars.retain(|b| !b.is_trivial());
    HomologyData { bars, basis, basis_levels, slices, image_vectors, cap }
}

/// Dimension of the homology of the reduced complex `C̄ = C/Λ⁺C` over the
/// residue field, per degree: the independent rational-elimination route.
pub fn residue_homology<R: Exact>(complex: &FilteredComplex<R>) -> BTreeMap<i64, usize> {
    let gens = complex.generators();
    let mut slices: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, g) in gens.iter().enumerate() {
        slices.entry(g.degree).or_default().push(i);
    }
    let rank_of = |q: i64| -> usize {
        let src = slices.get(&q).cloned().unwrap_or_default();
        let tgt = slices.get(&(q + 1)).cloned().unwrap_or_default();
        if src.is_empty() || tgt.is_empty() {
            return 0;
        }
        let mut m = QMatrix::zeros(tgt.len(), src.len());
        for (cj, &j) in src.iter().enumerate() {
            for (ri, &i) in tgt.iter().enumerate() {
                m.set(ri, cj, complex.residue_entry(j, i));
            }
        }
        m.rank()
    };
    let mut out = BTreeMap::new();
    for (&q, slice) in &slices {
        let dim = slice.len();
        let r_out = rank_of(q);
        let r_in = rank_of(q - 1);
        out.insert(q, dim - r_out - r_in);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtered::Generator;
    use crate::rat;
    use crate::{Complex, Nov, Rat};

    fn gen(name: &str, degree: i64, level: Rat) -> Generator<Rat> {
        Generator { name: name.into(), degree, level }
    }

    #[test]
    fn qmatrix_rank() {
        let mut m = QMatrix::<Rat>::zeros(2, 3);
        m.set(0, 0, rat(1, 1));
        m.set(0, 1, rat(2, 1));
        m.set(1, 0, rat(2, 1));
        m.set(1, 1, rat(4, 1));
        assert_eq!(m.rank(), 1);
        m.set(1, 2, rat(1, 1));
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn corner_ranks_match_direct_ranks() {
        let keys: Vec<Rat> = (0..3).map(|i| rat(i, 1)).collect();
        let triplets = vec![
            (0usize, 0usize, rat(1, 1)),
            (1, 0, rat(2, 1)),
            (1, 1, rat(1, 1)),
            (2, 2, rat(5, 1)),
        ];
        let table = CornerRanks::new(keys.clone(), keys.clone(), &triplets);
        for b in 0..4i64 {
            for a in 0..4i64 {
                let rows: Vec<usize> = (0..3).filter(|&r| (r as i64) < b).collect();
                let cols: Vec<usize> = (0..3).filter(|&c| (c as i64) >= a).collect();
                let mut m = QMatrix::<Rat>::zeros(rows.len(), cols.len());
                for &(r, c, ref v) in &triplets {
                    if let (Some(ri), Some(ci)) =
                        (rows.iter().position(|&x| x == r), cols.iter().position(|&x| x == c))
                    {
                        m.set(ri, ci, v.clone());
                    }
                }
                assert_eq!(table.rank(&rat(b, 1), &rat(a, 1)), m.rank(), "corner b={b} a={a}");
            }
        }
    }

    fn pair_complex(valuation: Rat) -> Complex {
        let mut c =
            Complex::new(vec![gen("x", 0, rat(0, 1)), gen("y", 1, rat(0, 1))], rat(10, 1)).unwrap();
        c.set_entry("x", "y", Nov::monomial(rat(1, 1), valuation, 0)).unwrap();
        c
    }

    #[test]
    fn torsion_bar_from_positive_valuation_pivot() {
        let c = pair_complex(rat(1, 2));
        let h = homology(&c);
        assert_eq!(h.field_dim(0), 0);
        assert_eq!(h.field_dim(1), 0);
        assert_eq!(h.bars.len(), 1);
        assert_eq!(h.bars[0].degree, 1);
        assert_eq!(h.bars[0].birth, rat(0, 1));
        assert_eq!(h.bars[0].death, Some(rat(1, 2)));
        assert!(!h.is_zero());
    }

    #[test]
    fn unit_pivot_gives_no_homology() {
        let c = pair_complex(rat(0, 1));
        let h = homology(&c);
        assert!(h.is_zero());
    }

    #[test]
    fn free_classes_survive() {
        let c =
            Complex::new(vec![gen("a", 0, rat(1, 2)), gen("b", 3, rat(0, 1))], rat(10, 1)).unwrap();
        let h = homology(&c);
        assert_eq!(h.field_dim(0), 1);
        assert_eq!(h.field_dim(3), 1);
        assert_eq!(h.rank_alive_at(0, &rat(1, 2)), 1);
        assert_eq!(h.rank_alive_at(0, &rat(0, 1)), 0);
    }

    #[test]
    fn residue_homology_counts() {
        let c = pair_complex(rat(0, 1));
        let h = residue_homology(&c);
        assert_eq!(h.get(&0), Some(&0));
        assert_eq!(h.get(&1), Some(&0));
        let c2 = pair_complex(rat(1, 1));
        let h2 = residue_homology(&c2);
        assert_eq!(h2.get(&0), Some(&1));
        assert_eq!(h2.get(&1), Some(&1));
    }

    #[test]
    fn class_projection_identifies_boundary() {
        let mut c = Complex::new(
            vec![gen("x", 0, rat(0, 1)), gen("y", 1, rat(0, 1)), gen("z", 1, rat(0, 1))],
            rat(10, 1),
        )
        .unwrap();
        c.set_entry("x", "y", Nov::from_int(1)).unwrap();
        let h = homology(&c);
        assert_eq!(h.field_dim(1), 1);
        let cocycle_y = vec![Nov::from_int(1), Nov::zero()];
        let class = h.class_of(1, &cocycle_y).unwrap();
        assert!(class.iter().all(|s| s.is_zero()));
        let cocycle_z = vec![Nov::zero(), Nov::from_int(1)];
        let class_z = h.class_of(1, &cocycle_z).unwrap();
        assert!(!class_z[0].is_zero());
    }

    #[test]
    fn solve_in_span_handles_units() {
        let cap = rat(5, 1);
        let col = vec![Nov::one().add(&Nov::monomial(rat(1, 1), rat(1, 1), 0))];
        let target = vec![Nov::monomial(rat(2, 1), rat(1, 2), 0)];
        let x = solve_in_span(&[col.clone()], &target, &cap).unwrap();
        let back = col[0].mul(&x[0]);
        assert!(back.sub(&target[0]).is_zero());
    }
}
