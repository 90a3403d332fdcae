//! Seeded, reproducible fixture generators.
//!
//! Random gapped complexes are built by conjugating an order-zero partial
//! matching with a filtration-raising automorphism `g = 1 + n`: the
//! conjugated differential squares to zero exactly below the cap, its
//! reduced part equals the matching, and all realized energies stay on a
//! fixed lattice. Triangles are built the same way inside a cone template
//! whose low-order part is a split short exact sequence; the blocks of the
//! conjugated cone are then read back as the triangle data. The algebra
//! toys plant their Maurer-Cartan solutions and obstructions explicitly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ainfty::{AInftyData, BoundingCochain, McOutcome};
use crate::filtered::{FilteredMap, Generator};
use crate::triangle::TriangleData;
use crate::{rat, Complex, Map, Nov, Rat};

fn nonzero_coeff(rng: &mut ChaCha8Rng) -> Rat {
    loop {
        let n = rng.gen_range(-4i64..=4);
        if n != 0 {
            return rat(n, 1);
        }
    }
}

/// Composes `g ∘ f ∘ g⁻¹` for `g = 1 + n` with `order(n) > 0`, expanding
/// the inverse as a geometric series below the cap.
fn conjugate(f: &Map, n: &Map) -> Map {
    let identity = {
        let mut m = n.clone();
        let entries: Vec<(usize, usize)> = m.entries().map(|(i, j, _)| (i, j)).collect();
        for (i, j) in entries {
            m.set_entry(i, j, Nov::zero());
        }
        for i in 0..m.source().len() {
            m.set_entry(i, i, Nov::one());
        }
        m
    };
    let g = identity.add(n).expect("same shape");
    // g⁻¹ = 1 − n + n² − …; terminates since n raises the filtration.
    let mut g_inv = identity.clone();
    let mut power = n.clone();
    let mut sign = -1i64;
    for _ in 0..64 {
        if power.is_zero() {
            break;
        }
        let signed = if sign > 0 { power.clone() } else { power.negate() };
        g_inv = g_inv.add(&signed).expect("same shape");
        power = power.compose(n).expect("same shape");
        sign = -sign;
    }
    g_inv.compose(f).expect("shape").compose(&g).expect("shape")
}

/// Random gapped complex on a `step`-lattice: `n_gens` generators in
/// degrees `0..=2`, levels zero, reduced differential a partial matching,
/// higher-order terms of order `2·step` and `4·step` from conjugation.
///
/// With `perfect_matching` the reduced complex is acyclic, which makes the
/// full homology vanish.
pub fn gapped_complex(seed: u64, n_gens: usize, perfect_matching: bool) -> Complex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = rat(1, 1);
    let cap = rat(16, 1);
    let mut gens = Vec::new();
    if perfect_matching {
        // Pairs (x_i, y_i) in consecutive degrees.
        for i in 0..n_gens / 2 {
            let d = rng.gen_range(0..2) as i64;
            gens.push(Generator { name: format!("x{i}"), degree: d, level: rat(0, 1) });
            gens.push(Generator { name: format!("y{i}"), degree: d + 1, level: rat(0, 1) });
        }
    } else {
        for i in 0..n_gens {
            let d = rng.gen_range(0..3) as i64;
            gens.push(Generator { name: format!("g{i}"), degree: d, level: rat(0, 1) });
        }
    }
    let mut complex = Complex::new(gens, cap.clone()).unwrap();

    // Order-zero partial matching.
    let n = complex.generators().len();
    let mut used_src = vec![false; n];
    let mut used_tgt = vec![false; n];
    if perfect_matching {
        for i in (0..n).step_by(2) {
            complex.set_entry_idx(i, i + 1, Nov::from_rational(nonzero_coeff(&mut rng)));
            used_src[i] = true;
            used_tgt[i + 1] = true;
        }
    } else {
        let tries = n;
        for _ in 0..tries {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i == j || used_src[i] || used_tgt[j] || used_tgt[i] || used_src[j] {
                continue;
            }
            let (di, dj) =
                (complex.generators()[i].degree, complex.generators()[j].degree);
            if dj != di + 1 {
                continue;
            }
            complex.set_entry_idx(i, j, Nov::from_rational(nonzero_coeff(&mut rng)));
            used_src[i] = true;
            used_tgt[j] = true;
        }
    }

    // Conjugating automorphism: degree-zero entries of order 2·step or
    // 4·step between distinct generators.
    let mut nmap = Map::zero(&complex, &complex, 0);
    for _ in 0..n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j || complex.generators()[i].degree != complex.generators()[j].degree {
            continue;
        }
        let order = if rng.gen_bool(0.5) { rat(2, 1) } else { rat(4, 1) };
        let energy = order * step.clone();
        nmap.set_entry(i, j, Nov::monomial(nonzero_coeff(&mut rng), energy, 0));
    }
    let d = conjugate(&complex.differential(), &nmap);
    let mut out = Complex::new(complex.generators().to_vec(), cap).unwrap();
    for (i, j, s) in d.entries() {
        out.set_entry_idx(i, j, s.clone());
    }
    debug_assert!(out.check().passed());
    out
}

/// Triangle fixture with `ε = 1`: supports of `C'` in `4 + 8ℤ`, of `C''`
/// in `8ℤ`, so every cross distance lies in `4 + 8ℤ` and is at least `4ε`.
/// Low parts form a split short exact sequence; internal differentials are
/// random matchings; everything is twisted by a cone automorphism with
/// orders in `{8, 16}`, which keeps all realized supports in their residue
/// classes.
pub fn triangle_fixture(seed: u64, pairs: usize) -> TriangleData<Rat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = rat(64, 1);
    let eps = rat(1, 1);

    // C' generators in degrees 0..=3 at level 4; pair degrees cycle so
    // the homology of the fixture spans at least three degrees.
    let mut prime_gens = Vec::new();
    for i in 0..pairs {
        let d = (i % 3) as i64;
        prime_gens.push(Generator { name: format!("u{i}"), degree: d, level: rat(4, 1) });
        prime_gens.push(Generator { name: format!("u{i}'"), degree: d + 1, level: rat(4, 1) });
    }
    // C'' generators at levels 0 or 8.
    let mut double_gens = Vec::new();
    for i in 0..pairs {
        let d = (i % 3) as i64;
        let lvl = if rng.gen_bool(0.5) { rat(0, 1) } else { rat(8, 1) };
        double_gens.push(Generator { name: format!("w{i}"), degree: d, level: lvl.clone() });
        double_gens.push(Generator { name: format!("w{i}'"), degree: d + 1, level: lvl });
    }
    // C = β(C') ⊕ γ-preimages(C'').
    let mut mid_gens = Vec::new();
    for g in &prime_gens {
        mid_gens.push(Generator { name: format!("b.{}", g.name), degree: g.degree, level: g.level.clone() });
    }
    for g in &double_gens {
        mid_gens.push(Generator { name: format!("s.{}", g.name), degree: g.degree, level: g.level.clone() });
    }

    let np = prime_gens.len();
    let nd = double_gens.len();

    // Cone template: C'-part shifted by −2, C-part by −1, C''-part as is,
    // with the sign table of the cone assembly.
    let mut cone_gens = Vec::new();
    for g in &prime_gens {
        cone_gens.push(Generator { name: format!("p.{}", g.name), degree: g.degree - 2, level: g.level.clone() });
    }
    for g in &mid_gens {
        cone_gens.push(Generator { name: format!("m.{}", g.name), degree: g.degree - 1, level: g.level.clone() });
    }
    for g in &double_gens {
        cone_gens.push(Generator { name: format!("d.{}", g.name), degree: g.degree, level: g.level.clone() });
    }
    let mut cone = Complex::new(cone_gens, cap.clone()).unwrap();
    let off_mid = np;
    let off_double = np + mid_gens.len();

    // Internal matchings: d' on C' pairs; d'' on C'' pairs (sparse).
    // Odd pairs are matched (acyclic), even pairs survive to homology;
    // conjugation below is an isomorphism, so the homology of each complex
    // is pinned by this template.
    let mut d_prime_entries = Vec::new();
    for i in 0..pairs {
        if i % 2 == 1 {
            let c = nonzero_coeff(&mut rng);
            d_prime_entries.push((2 * i, 2 * i + 1, c));
        }
    }
    let mut d_double_entries = Vec::new();
    for i in 0..pairs {
        if i % 2 == 1 {
            let c = nonzero_coeff(&mut rng);
            d_double_entries.push((2 * i, 2 * i + 1, c));
        }
    }

    for &(i, j, ref c) in &d_prime_entries {
        // d' block, and −d on the β-image block of C.
        cone.set_entry_idx(i, j, Nov::from_rational(c.clone()));
        cone.set_entry_idx(off_mid + i, off_mid + j, Nov::from_rational(-c.clone()));
    }
    for &(i, j, ref c) in &d_double_entries {
        cone.set_entry_idx(off_double + i, off_double + j, Nov::from_rational(c.clone()));
        cone.set_entry_idx(off_mid + np + i, off_mid + np + j, Nov::from_rational(-c.clone()));
    }
    // −β: inclusion of C' into the first block of C.
    for i in 0..np {
        cone.set_entry_idx(i, off_mid + i, Nov::from_int(-1));
    }
    // +γ: projection of the second block of C onto C''.
    for i in 0..nd {
        cone.set_entry_idx(off_mid + np + i, off_double + i, Nov::from_int(1));
    }
    debug_assert!(cone.check().passed(), "cone template must be a complex");

    // Block-lower-triangular, degree-zero automorphism with orders 4 or 8.
    let total = cone.generators().len();
    let block_of = |idx: usize| -> usize {
        if idx < off_mid {
            0
        } else if idx < off_double {
            1
        } else {
            2
        }
    };
    let mut nmap = Map::zero(&cone, &cone, 0);
    for _ in 0..2 * total {
        let i = rng.gen_range(0..total);
        let j = rng.gen_range(0..total);
        if i == j || block_of(j) < block_of(i) {
            continue;
        }
        let gi = &cone.generators()[i];
        let gj = &cone.generators()[j];
        if gi.degree != gj.degree {
            continue;
        }
        let order = if rng.gen_bool(0.7) { rat(8, 1) } else { rat(16, 1) };
        let energy = order + gi.level.clone() - gj.level.clone();
        if energy < rat(0, 1) {
            continue;
        }
        nmap.set_entry(i, j, Nov::monomial(nonzero_coeff(&mut rng), energy, 0));
    }
    let d_cone = conjugate(&cone.differential(), &nmap);

    // Read the blocks back, undoing the cone signs.
    let c_prime = {
        let mut c = Complex::new(prime_gens.clone(), cap.clone()).unwrap();
        for (i, j, s) in d_cone.entries() {
            if i < np && j < np {
                c.set_entry_idx(i, j, s.clone());
            }
        }
        c
    };
    let c_mid = {
        let mut c = Complex::new(mid_gens.clone(), cap.clone()).unwrap();
        for (i, j, s) in d_cone.entries() {
            if (off_mid..off_double).contains(&i) && (off_mid..off_double).contains(&j) {
                c.set_entry_idx(i - off_mid, j - off_mid, s.neg());
            }
        }
        c
    };
    let c_double = {
        let mut c = Complex::new(double_gens.clone(), cap.clone()).unwrap();
        for (i, j, s) in d_cone.entries() {
            if i >= off_double && j >= off_double {
                c.set_entry_idx(i - off_double, j - off_double, s.clone());
            }
        }
        c
    };
    let mut map_b = FilteredMap::zero(&c_prime, &c_mid, 0);
    let mut map_c = FilteredMap::zero(&c_mid, &c_double, 0);
    let mut map_h = FilteredMap::zero(&c_prime, &c_double, -1);
    for (i, j, s) in d_cone.entries() {
        if i < np && (off_mid..off_double).contains(&j) {
            map_b.set_entry(i, j - off_mid, s.neg());
        } else if (off_mid..off_double).contains(&i) && j >= off_double {
            map_c.set_entry(i - off_mid, j - off_double, s.clone());
        } else if i < np && j >= off_double {
            map_h.set_entry(i, j - off_double, s.clone());
        }
    }

    let t = TriangleData { c_prime, c_mid, c_double, map_b, map_c, map_h, epsilon: eps };
    debug_assert!(t.chain_identities_hold());
    t
}

/// Random associative algebra: a scaled truncated polynomial algebra,
/// associative by construction, in degree zero.
pub fn ainfty_assoc(seed: u64, dim: usize) -> AInftyData<Rat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scales: Vec<Rat> = (0..dim).map(|_| nonzero_coeff(&mut rng)).collect();
    let gens: Vec<Generator<Rat>> = (0..dim)
        .map(|i| Generator { name: format!("t{i}"), degree: 0, level: rat(0, 1) })
        .collect();
    let mut a = AInftyData::new(gens, 4, rat(8, 1));
    for i in 0..dim {
        for j in 0..dim {
            if i + j < dim {
                let c = scales[i].clone() * scales[j].clone() / scales[i + j].clone();
                a.add_entry(2, vec![i, j], i + j, Nov::from_rational(c)).unwrap();
            }
        }
    }
    a
}

/// Solvable Maurer-Cartan toy with a planted unique solution: injective
/// order-zero linearization `m₁(xᵢ) = yᵢ`, random quadratic terms, and
/// `m₀ := −Σ_k m_k(b*, …, b*)` for the planted `b*`.
pub fn ainfty_solvable(seed: u64, width: usize) -> (AInftyData<Rat>, BoundingCochain<Rat>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens = Vec::new();
    for i in 0..width {
        gens.push(Generator { name: format!("x{i}"), degree: 1, level: rat(0, 1) });
    }
    for i in 0..width {
        gens.push(Generator { name: format!("y{i}"), degree: 2, level: rat(0, 1) });
    }
    let mut a = AInftyData::new(gens, 4, rat(8, 1));
    for i in 0..width {
        a.add_entry(1, vec![i], width + i, Nov::from_int(1)).unwrap();
    }
    for _ in 0..width {
        let i = rng.gen_range(0..width);
        let j = rng.gen_range(0..width);
        let l = rng.gen_range(0..width);
        a.add_entry(2, vec![i, j], width + l, Nov::from_rational(nonzero_coeff(&mut rng)))
            .unwrap();
    }
    let planted = BoundingCochain {
        coords: (0..2 * width)
            .map(|g| {
                if g < width {
                    let e = rat(rng.gen_range(1..=3), 2);
                    Nov::monomial(nonzero_coeff(&mut rng), e, 0).truncate(rat(8, 1))
                } else {
                    Nov::zero().truncate(rat(8, 1))
                }
            })
            .collect(),
    };
    // m₀ := −(m₁(b*) + m₂(b*, b*)).
    let m1 = a.apply(1, &[planted.coords.clone()]);
    let m2 = a.apply(2, &[planted.coords.clone(), planted.coords.clone()]);
    for (g, s) in m1.iter().zip(m2.iter()).map(|(p, q)| p.add(q)).enumerate() {
        if !s.is_zero() {
            a.add_entry(0, vec![], g, s.neg()).unwrap();
        }
    }
    (a, planted)
}

/// Obstructed toy: the solvable construction plus a residual term at the
/// planted level hitting a generator outside the linearization image.
pub fn ainfty_obstructed(seed: u64, width: usize) -> (AInftyData<Rat>, Rat) {
    let (base, _planted) = ainfty_solvable(seed, width);
    let mut gens = base.generators().to_vec();
    gens.push(Generator { name: "obs".into(), degree: 2, level: rat(0, 1) });
    let obs = gens.len() - 1;
    let mut a = AInftyData::new(gens, 4, base.cap().clone());
    for k in 0..=base.k_max {
        for e in base.entries(k) {
            a.add_entry(k, e.inputs.clone(), e.output, e.scalar.clone()).unwrap();
        }
    }
    // Obstruction above any planted energy (those live at or below 3/2 plus
    // one interaction step, bounded by 3): first unkillable level 4.
    let level = rat(4, 1);
    a.add_entry(0, vec![], obs, Nov::monomial(rat(1, 1), level.clone(), 0)).unwrap();
    (a, level)
}

/// Convenience: asserts the solvable fixture round-trips through the
/// solver (used by tests and the acceptance suite).
pub fn solve_matches_planted(a: &AInftyData<Rat>, planted: &BoundingCochain<Rat>) -> bool {
    match crate::ainfty::mc_solve(a) {
        Ok(McOutcome::Solved(b)) => b.coords == planted.coords,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::{deform, relation_check};
    use crate::elimination::{homology, residue_homology};
    use crate::spectral::{compute_pages, stabilization, vanishing_criterion, FiltrationScheme};
    use crate::triangle::{check_hypotheses, extract_les};

    #[test]
    fn gapped_complexes_validate() {
        for seed in 0..10 {
            let c = gapped_complex(seed, 10, false);
            assert!(c.check().passed(), "seed {seed}");
            let lead = c.leading_part();
            let sq = lead.differential().compose(&lead.differential()).unwrap();
            assert!(sq.is_zero(), "reduced differential squares to zero");
        }
    }

    #[test]
    fn pages_match_reduced_homology_on_fixtures() {
        for seed in 0..6 {
            let c = gapped_complex(seed, 9, false);
            let scheme = FiltrationScheme::default_for(&c).unwrap();
            let pages = compute_pages(&c, &scheme, 6).unwrap();
            let reduced = residue_homology(&c);
            let e2 = pages.page(2).unwrap();
            for q in 0..pages.safe_layers() {
                for (&p, &dim) in &reduced {
                    assert_eq!(e2.rank(p, q), dim, "seed {seed} p {p} q {q}");
                }
            }
            let stab = stabilization(&c, &pages);
            assert_eq!(stab.matches_homology, Some(true), "seed {seed}");
        }
    }

    #[test]
    fn acyclic_fixtures_vanish() {
        for seed in 0..10 {
            let c = gapped_complex(seed, 10, true);
            assert!(c.check().passed());
            let rep = vanishing_criterion(&c);
            assert!(rep.criterion, "seed {seed}");
            assert_eq!(rep.elimination_confirms, Some(true), "seed {seed}");
            assert!(homology(&c).is_zero());
        }
    }

    #[test]
    fn triangle_fixtures_pass_and_are_exact() {
        for seed in 0..4 {
            let t = triangle_fixture(seed, 3);
            let hyp = check_hypotheses(&t);
            assert!(hyp.all_pass(), "seed {seed}: {:?}", hyp.failures);
            let les = extract_les(&t).unwrap();
            assert!(les.exact_everywhere(), "seed {seed}");
        }
    }

    #[test]
    fn assoc_fixtures_pass_relation() {
        for seed in 0..5 {
            let a = ainfty_assoc(seed, 4);
            assert!(relation_check(&a).passed(), "seed {seed}");
        }
    }

    #[test]
    fn solvable_fixtures_round_trip() {
        for seed in 0..5 {
            let (a, planted) = ainfty_solvable(seed, 3);
            assert!(solve_matches_planted(&a, &planted), "seed {seed}");
            let d = deform(&a, &planted).unwrap();
            assert!(d.mc_solved);
            assert!(d.algebra.entries(0).is_empty());
        }
    }

    #[test]
    fn obstructed_fixtures_report_planted_level() {
        use crate::ainfty::{mc_solve, McOutcome};
        for seed in 0..5 {
            let (a, level) = ainfty_obstructed(seed, 3);
            match mc_solve(&a).unwrap() {
                McOutcome::Obstructed { level: l, class } => {
                    assert_eq!(l, level, "seed {seed}");
                    assert!(class.iter().any(|c| c != &rat(0, 1)));
                }
                McOutcome::Solved(_) => panic!("seed {seed}: expected obstruction"),
            }
        }
    }
}
