//! Normalization of anchored generator sets.
//!
//! A decorated intersection point carries a reference action `𝒜([p,w])`
//! and a Maslov–Morse index `μ([p,w])`. Two decorations of the same point
//! denote the same tower element exactly when their action and index data
//! agree; decorations of one point must at least share the index parity,
//! since the normalized generator `⟨p⟩` absorbs only whole powers of the
//! degree-two unit.
//!
//! Normalization produces one energy-zero generator `⟨p⟩` per point, of
//! degree 0 or 1 by the parity of the index, and records the embedding
//!
//! ```text
//!   [p, w]  ↦  e^{(μ − μ⟨p⟩)/2} · T^{𝒜([p,w])} · ⟨p⟩
//! ```
//!
//! whose image has level exactly `𝒜([p,w])`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::filtered::{FilteredComplex, Generator};
use crate::novikov::{NovikovScalar, PiGroup};
use crate::scalar::Exact;

/// One decoration `[p, w]` of an intersection point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoration<R> {
    pub point: String,
    /// Reference action `𝒜([p,w])`.
    pub action: R,
    /// Maslov–Morse index `μ([p,w])`.
    pub maslov: i64,
}

/// A set of decorated points with the covering group of the pair.
#[derive(Clone, Debug)]
pub struct AnchoredGeneratorSet<R> {
    pub decorations: Vec<Decoration<R>>,
    pub pi: PiGroup<R>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnchoredError {
    #[error("decorations of point {point:?} disagree: indices {a} and {b} have different parity")]
    InconsistentEquivalence { point: String, a: i64, b: i64 },
    #[error("no decorations supplied")]
    Empty,
}

/// Result of normalization: the energy-zero basis and the embedding of
/// each supplied decoration into it.
#[derive(Clone, Debug)]
pub struct NormalizedBasis<R: Exact> {
    /// Complex with one level-zero generator `⟨p⟩` per point and no
    /// differential.
    pub basis: FilteredComplex<R>,
    /// For each input decoration (deduplicated, in first-seen order): the
    /// generator index of its `⟨p⟩` and the embedding scalar.
    pub embeddings: Vec<(Decoration<R>, usize, NovikovScalar<R>)>,
}

/// Builds the normalized basis. Decorations that agree in point, action
/// and index are identified; decorations of one point with indices of
/// different parity are rejected.
pub fn normalize_anchored<R: Exact>(
    set: &AnchoredGeneratorSet<R>,
    cap: R,
) -> Result<NormalizedBasis<R>, AnchoredError> {
    if set.decorations.is_empty() {
        return Err(AnchoredError::Empty);
    }
    // Reference parity per point, from the first decoration seen.
    let mut parity: BTreeMap<String, i64> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    for d in &set.decorations {
        match parity.get(&d.point) {
            None => {
                parity.insert(d.point.clone(), d.maslov.rem_euclid(2));
                order.push(d.point.clone());
            }
            Some(&p) => {
                if d.maslov.rem_euclid(2) != p {
                    return Err(AnchoredError::InconsistentEquivalence {
                        point: d.point.clone(),
                        a: p,
                        b: d.maslov,
                    });
                }
            }
        }
    }

    let gens: Vec<Generator<R>> = order
        .iter()
        .map(|p| Generator {
            name: format!("<{p}>"),
            degree: parity[p],
            level: R::zero(),
        })
        .collect();
    let basis = FilteredComplex::new(gens, cap).expect("point names are unique");

    let mut embeddings: Vec<(Decoration<R>, usize, NovikovScalar<R>)> = Vec::new();
    for d in &set.decorations {
        if embeddings.iter().any(|(seen, _, _)| seen == d) {
            continue;
        }
        let idx = order.iter().position(|p| p == &d.point).expect("point registered");
        let scalar =
            NovikovScalar::monomial(R::one(), d.action.clone(), d.maslov - parity[&d.point]);
        embeddings.push((d.clone(), idx, scalar));
    }
    Ok(NormalizedBasis { basis, embeddings })
}
