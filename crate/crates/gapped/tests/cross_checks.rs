//! Cross-module integration: anchored data feeding complexes, shifted
//! levels against both homology routes, order bookkeeping on random maps.

use gapped::anchored::{normalize_anchored, AnchoredGeneratorSet, Decoration};
use gapped::elimination::homology;
use gapped::filtered::{FilteredMap, Generator, Interval};
use gapped::fixtures::gapped_complex;
use gapped::novikov::{PiGroup, PiGroupElement};
use gapped::spectral::{compute_pages, stabilization, FiltrationScheme};
use gapped::{rat, Complex, Nov, Rat};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// An anchored pair normalized into a complex whose differential respects
/// the embedded action levels, then checked through both homology routes.
#[test]
fn anchored_to_complex_round_trip() {
    let set = AnchoredGeneratorSet {
        decorations: vec![
            Decoration { point: "p".into(), action: rat(0, 1), maslov: 0 },
            Decoration { point: "q".into(), action: rat(0, 1), maslov: 1 },
            Decoration { point: "q".into(), action: rat(2, 1), maslov: 3 },
        ],
        pi: PiGroup::new(vec![PiGroupElement::new(rat(2, 1), 2)]),
    };
    let normalized = normalize_anchored(&set, rat(12, 1)).unwrap();
    assert_eq!(normalized.basis.generators().len(), 2);
    // The two decorations of q differ by the group element (2, 2), whose
    // embedding is exactly the ratio of their embedding scalars.
    let g = PiGroupElement::new(rat(2, 1), 2);
    let ratio = normalized.embeddings[2].2.clone();
    assert_eq!(ratio, g.embed());
    assert!(set.pi.contains(&g));

    // Give the normalized basis a differential d(<p>) = T^2 <q> and check
    // both homology routes see the torsion bar [0, 2).
    let mut complex = Complex::new(normalized.basis.generators().to_vec(), rat(12, 1)).unwrap();
    complex.set_entry("<p>", "<q>", Nov::monomial(rat(1, 1), rat(2, 1), 0)).unwrap();
    assert!(complex.check().passed());
    let h = homology(&complex);
    assert_eq!(h.bars.len(), 1);
    assert_eq!(h.bars[0].death, Some(rat(2, 1)));

    let scheme = FiltrationScheme::new(&complex, rat(1, 1)).unwrap();
    let pages = compute_pages(&complex, &scheme, 6).unwrap();
    let stab = stabilization(&complex, &pages);
    assert_eq!(stab.matches_homology, Some(true));
}

/// Shifted generator levels: the pages and the bars must stay consistent
/// when a generator is born at a positive lattice level.
#[test]
fn shifted_levels_agree_between_routes() {
    let mut c = Complex::new(
        vec![
            Generator { name: "a".into(), degree: 0, level: rat(2, 1) },
            Generator { name: "b".into(), degree: 1, level: rat(0, 1) },
        ],
        rat(12, 1),
    )
    .unwrap();
    // Order zero entry across a level difference of two.
    c.set_entry("a", "b", Nov::monomial(rat(1, 1), rat(2, 1), 0)).unwrap();
    assert!(c.check().passed());
    let h = homology(&c);
    // The class of b dies when T²·b becomes a boundary of the shifted a.
    assert_eq!(h.bars.len(), 1);
    assert_eq!(h.bars[0].degree, 1);
    assert_eq!(h.bars[0].birth, rat(0, 1));
    assert_eq!(h.bars[0].death, Some(rat(2, 1)));
    let scheme = FiltrationScheme::new(&c, rat(1, 1)).unwrap();
    let pages = compute_pages(&c, &scheme, 6).unwrap();
    let stab = stabilization(&c, &pages);
    assert_eq!(stab.matches_homology, Some(true));
}

/// The recombination identity low + high = f on randomized maps, plus the
/// composite-order bound, as a seeded batch.
#[test]
fn split_and_order_on_random_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..50 {
        let c = gapped_complex(rng.gen_range(0..1 << 20), 8, false);
        let mut f = FilteredMap::zero(&c, &c, 0);
        let n = c.generators().len();
        for _ in 0..6 {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if c.generators()[i].degree != c.generators()[j].degree {
                continue;
            }
            let lam = rat(rng.gen_range(0..6), 1);
            f.set_entry(i, j, Nov::monomial(rat(rng.gen_range(1..5), 1), lam, 0));
        }
        let eps = rat(rng.gen_range(1..4), 1);
        let (low, high) = f.split_by_threshold(&eps);
        assert_eq!(low.add(&high).unwrap(), f);
        if let Some(o) = low.order() {
            assert!(o < eps);
        }
        if let Some(o) = high.order() {
            assert!(o >= eps);
        }
        let ff = f.compose(&f).unwrap();
        if let (Some(o1), Some(o2)) = (f.order(), ff.order()) {
            assert!(o2 >= o1.clone() + o1);
        }
    }
}

/// Gap intervals respect endpoint conventions on the realized spectrum.
#[test]
fn gap_interval_endpoints() {
    let mut c = Complex::new(
        vec![
            Generator { name: "x".into(), degree: 0, level: rat(0, 1) },
            Generator { name: "y".into(), degree: 1, level: rat(0, 1) },
        ],
        rat(12, 1),
    )
    .unwrap();
    c.set_entry("x", "y", Nov::monomial(rat(1, 1), rat(2, 1), 0)).unwrap();
    // Realized difference set {0, 2}: the half-open [2; 3) contains 2,
    // the open (0; 2) does not.
    assert!(!c.gap_check(&Interval::half_open(rat(2, 1), rat(3, 1))));
    assert!(c.gap_check(&Interval::open(rat(0, 1), rat(2, 1))));
    assert!(c.gap_check(&Interval::ray(rat(5, 2))));
}

proptest! {
    /// Wire round trip is the identity on randomly built complexes.
    #[test]
    fn complex_wire_round_trip(seed in 0u64..4096) {
        let c = gapped_complex(seed, 7, false);
        let wire = c.to_wire();
        let json = serde_json::to_string(&wire).unwrap();
        let back: gapped::filtered::WireComplex = serde_json::from_str(&json).unwrap();
        let c2 = Complex::from_wire(&back).unwrap();
        prop_assert_eq!(c, c2);
    }

    /// Scalar wire round trip is the identity and keeps terms sorted.
    #[test]
    fn scalar_wire_round_trip(coeffs in prop::collection::vec((-6i64..7, 0i64..10, -3i64..4), 0..6)) {
        let mut s = Nov::zero();
        for (c, l, m) in coeffs {
            if c != 0 {
                s = s.add(&Nov::whole(rat(c, 1), rat(l, 3), m));
            }
        }
        let json = serde_json::to_string(&s).unwrap();
        let back: Nov = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(s, back);
    }
}

/// Reference example shape: a residue-acyclic two-generator complex
/// stabilizes at page two with everything killed by the first-page
/// differential.
#[test]
fn residue_acyclic_pair_stabilizes_at_two() {
    let mut c = Complex::new(
        vec![
            Generator { name: "x".into(), degree: 0, level: rat(0, 1) },
            Generator { name: "y".into(), degree: 1, level: rat(0, 1) },
        ],
        rat(8, 1),
    )
    .unwrap();
    c.set_entry("x", "y", Nov::from_int(1)).unwrap();
    let scheme = FiltrationScheme::new(&c, rat(1, 1)).unwrap();
    let pages = compute_pages(&c, &scheme, 5).unwrap();
    let e1 = pages.page(1).unwrap();
    let e2 = pages.page(2).unwrap();
    for q in 0..pages.safe_layers() {
        assert_eq!(e1.rank(0, q), 1);
        assert_eq!(e1.rank(1, q), 1);
        assert_eq!(e2.rank(0, q), 0);
        assert_eq!(e2.rank(1, q), 0);
    }
    let stab = stabilization(&c, &pages);
    assert_eq!(stab.stabilized_at, Some(2));
    assert_eq!(stab.matches_homology, Some(true));
}

/// Degenerate generators with no differential entries contribute classes.
#[test]
fn isolated_generator_contributes_homology() {
    let c = Complex::new(
        vec![Generator::<Rat> { name: "lone".into(), degree: 5, level: rat(3, 1) }],
        rat(10, 1),
    )
    .unwrap();
    assert!(c.check().passed());
    let h = homology(&c);
    assert_eq!(h.field_dim(5), 1);
    assert_eq!(h.bars[0].birth, rat(3, 1));
    assert_eq!(h.bars[0].death, None);
}
