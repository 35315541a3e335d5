//! Pushing Schur powers of tautological bundles down the tower of
//! Grassmann bundles: global sections, Hom dimensions and the tilting
//! bundle built from Young boxes.
//!
//! On vertex `i` the bundle `W_i` is the tautological quotient of
//! `F_i = ⊕_{h(a)=i} W_{t(a)}` on a Grassmann bundle. For a weight `λ`
//! with every entry `>= -(s_i - r_i)`, the direct images of `S^λ W_i`
//! are `S^λ F_i` in degree zero when `λ` is a partition and vanish
//! otherwise. Weights below that range are refused.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{
    enumerate_young, gl_dimension, sum_decompose, tensor_weights, DominantWeight, Partition,
};
use crate::quiver::QuiverFlagSpec;

/// `S^{λ_1} W_1 ⊗ ... ⊗ S^{λ_ρ} W_ρ`, one weight of length `r_i` per
/// non-source vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BundleTerm {
    weights: Vec<DominantWeight>,
}

impl BundleTerm {
    /// `weights[i - 1]` is the weight at vertex `i`.
    pub fn new(spec: &QuiverFlagSpec, weights: Vec<DominantWeight>) -> Result<Self> {
        if weights.len() != spec.rho() {
            return Err(Error::ShapeMismatch(format!(
                "{} weights for {} non-source vertices",
                weights.len(),
                spec.rho()
            )));
        }
        for (k, w) in weights.iter().enumerate() {
            let expected = spec.rank(k + 1) as usize;
            if w.len() != expected {
                return Err(Error::WeightLength {
                    vertex: k + 1,
                    expected,
                    got: w.len(),
                });
            }
        }
        Ok(BundleTerm { weights })
    }

    /// The structure sheaf.
    pub fn trivial(spec: &QuiverFlagSpec) -> Self {
        BundleTerm {
            weights: (1..=spec.rho())
                .map(|i| DominantWeight::zero(spec.rank(i) as usize))
                .collect(),
        }
    }

    /// `W_i` itself; the structure sheaf for `i = 0`.
    pub fn unit(spec: &QuiverFlagSpec, vertex: usize) -> Self {
        let mut t = Self::trivial(spec);
        if vertex > 0 {
            t.weights[vertex - 1] = DominantWeight::unit(spec.rank(vertex) as usize);
        }
        t
    }

    /// `det W_i`; the structure sheaf for `i = 0`.
    pub fn det(spec: &QuiverFlagSpec, vertex: usize) -> Self {
        let mut t = Self::trivial(spec);
        if vertex > 0 {
            t.weights[vertex - 1] = DominantWeight::det(spec.rank(vertex) as usize);
        }
        t
    }

    /// `det(W_1)^{θ_1} ⊗ ... ⊗ det(W_ρ)^{θ_ρ}`.
    pub fn line(spec: &QuiverFlagSpec, exponents: &[i64]) -> Result<Self> {
        if exponents.len() != spec.rho() {
            return Err(Error::ShapeMismatch(format!(
                "{} exponents for {} non-source vertices",
                exponents.len(),
                spec.rho()
            )));
        }
        Ok(BundleTerm {
            weights: exponents
                .iter()
                .enumerate()
                .map(|(k, e)| DominantWeight::det(spec.rank(k + 1) as usize).twist(e - 1))
                .collect(),
        })
    }

    pub fn weight(&self, vertex: usize) -> &DominantWeight {
        &self.weights[vertex - 1]
    }

    pub fn weights(&self) -> &[DominantWeight] {
        &self.weights
    }

    pub fn is_trivial(&self) -> bool {
        self.weights.iter().all(DominantWeight::is_zero)
    }
}

/// A direct sum of bundle terms with multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BundleSymbol {
    terms: BTreeMap<BundleTerm, BigUint>,
}

impl BundleSymbol {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_term(term: BundleTerm) -> Self {
        let mut s = Self::new();
        s.add(term, BigUint::one());
        s
    }

    pub fn add(&mut self, term: BundleTerm, multiplicity: BigUint) {
        if multiplicity.is_zero() {
            return;
        }
        *self.terms.entry(term).or_default() += multiplicity;
    }

    pub fn terms(&self) -> &BTreeMap<BundleTerm, BigUint> {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_multiplicity(&self) -> BigUint {
        self.terms.values().sum()
    }
}

/// Lowest allowed entry at vertex `i`: `-(s_i - r_i)`.
fn bott_bound(spec: &QuiverFlagSpec, vertex: usize) -> i64 {
    -(spec.s(vertex) as i64 - spec.rank(vertex) as i64)
}

/// Eliminates vertex `level` from every term of `symbol`. Weights at
/// vertices above `level` must already be trivial.
pub fn pushforward_step(
    spec: &QuiverFlagSpec,
    symbol: &BundleSymbol,
    level: usize,
) -> Result<BundleSymbol> {
    let tails: Vec<usize> = spec
        .quiver()
        .arrows_into(level)
        .map(|(_, a)| a.tail)
        .collect();
    let bound = bott_bound(spec, level);
    let mut out = BundleSymbol::new();
    for (term, mult) in symbol.terms() {
        if let Some(v) = (level + 1..=spec.rho()).find(|v| !term.weight(*v).is_zero()) {
            return Err(Error::ShapeMismatch(format!(
                "vertex {v} must be eliminated before vertex {level}"
            )));
        }
        let lambda = term.weight(level);
        if lambda.min_entry() < bound {
            return Err(Error::OutOfBottRange {
                vertex: level,
                entry: lambda.min_entry(),
                bound,
            });
        }
        let Some(partition) = lambda.to_partition() else {
            continue;
        };
        let mut base = term.clone();
        base.weights[level - 1] = DominantWeight::zero(lambda.len());
        let remaining_rank: u64 = tails.iter().map(|t| spec.rank(*t)).sum();
        split_over_tails(
            spec,
            &tails,
            &partition,
            remaining_rank,
            base,
            mult.clone(),
            &mut out,
        );
    }
    Ok(out)
}

/// Expands `S^ν(W_{t_1} ⊕ ... ⊕ W_{t_m})` one summand at a time and
/// merges each factor into the term's weight at its tail.
fn split_over_tails(
    spec: &QuiverFlagSpec,
    tails: &[usize],
    nu: &Partition,
    rank: u64,
    term: BundleTerm,
    mult: BigUint,
    out: &mut BundleSymbol,
) {
    let Some((&tail, rest)) = tails.split_first() else {
        if nu.length() == 0 {
            out.add(term, mult);
        }
        return;
    };
    let r = spec.rank(tail);
    let pieces: Vec<((Partition, Partition), u64)> = if rest.is_empty() {
        if nu.length() as u64 > r {
            return;
        }
        vec![((nu.clone(), Partition::empty()), 1)]
    } else {
        sum_decompose(nu, r as usize, (rank - r) as usize)
            .into_iter()
            .collect()
    };
    for ((mu, remainder), c) in pieces {
        let c = &mult * BigUint::from(c);
        if tail == 0 {
            // S^μ of the trivial line bundle is trivial of rank one
            split_over_tails(spec, rest, &remainder, rank - r, term.clone(), c, out);
            continue;
        }
        let factor = mu.to_weight(r as usize).expect("length bounded by rank");
        for (w, d) in tensor_weights(term.weight(tail), &factor) {
            let mut next = term.clone();
            next.weights[tail - 1] = w;
            split_over_tails(
                spec,
                rest,
                &remainder,
                rank - r,
                next,
                &c * BigUint::from(d),
                out,
            );
        }
    }
}

/// `dim H^0` of a direct sum of terms; all higher cohomology vanishes.
pub fn h0_symbol(spec: &QuiverFlagSpec, symbol: &BundleSymbol) -> Result<BigUint> {
    let mut current = symbol.clone();
    for level in (1..=spec.rho()).rev() {
        current = pushforward_step(spec, &current, level)?;
    }
    Ok(current.total_multiplicity())
}

pub fn h0_dim(spec: &QuiverFlagSpec, term: &BundleTerm) -> Result<BigUint> {
    h0_symbol(spec, &BundleSymbol::from_term(term.clone()))
}

/// True when every entry at vertex `i` is at least `-(s_i - r_i)`, so all
/// higher cohomology of the term vanishes.
pub fn vanishing_certificate(spec: &QuiverFlagSpec, term: &BundleTerm) -> bool {
    (1..=spec.rho()).all(|i| term.weight(i).min_entry() >= bott_bound(spec, i))
}

/// `(dual A) ⊗ B` expanded vertex by vertex.
pub fn hom_symbol(spec: &QuiverFlagSpec, a: &BundleTerm, b: &BundleTerm) -> BundleSymbol {
    let mut partial: Vec<(Vec<DominantWeight>, BigUint)> = vec![(Vec::new(), BigUint::one())];
    for i in 1..=spec.rho() {
        let expansion = tensor_weights(&a.weight(i).dual(), b.weight(i));
        let mut next = Vec::with_capacity(partial.len() * expansion.len());
        for (prefix, m) in &partial {
            for (w, c) in &expansion {
                let mut weights = prefix.clone();
                weights.push(w.clone());
                next.push((weights, m * BigUint::from(*c)));
            }
        }
        partial = next;
    }
    let mut symbol = BundleSymbol::new();
    for (weights, m) in partial {
        symbol.add(BundleTerm { weights }, m);
    }
    symbol
}

pub fn hom_dim(spec: &QuiverFlagSpec, a: &BundleTerm, b: &BundleTerm) -> Result<BigUint> {
    h0_symbol(spec, &hom_symbol(spec, a, b))
}

/// Terms with `λ_i ∈ Young(s_i - r_i, r_i)` for every vertex, in
/// lexicographic order with vertex 1 outermost.
pub fn tilting_summands(spec: &QuiverFlagSpec) -> Result<Vec<BundleTerm>> {
    spec.require_strict()?;
    let mut terms: Vec<Vec<DominantWeight>> = vec![Vec::new()];
    for i in 1..=spec.rho() {
        let r = spec.rank(i) as usize;
        let box_weights: Vec<DominantWeight> =
            enumerate_young((spec.s(i) - spec.rank(i)) as u32, r)
                .iter()
                .map(|p| p.to_weight(r).expect("fits the box"))
                .collect();
        terms = terms
            .into_iter()
            .flat_map(|prefix| {
                box_weights.iter().map(move |w| {
                    let mut next = prefix.clone();
                    next.push(w.clone());
                    next
                })
            })
            .collect();
    }
    Ok(terms
        .into_iter()
        .map(|weights| BundleTerm { weights })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionalityCertificate {
    pub pairs_checked: u64,
    pub all_in_range: bool,
    /// First ordered pair of summand indices that leaves the range.
    pub first_violation: Option<(usize, usize)>,
}

/// Checks that every LR summand of `(dual A_i) ⊗ B_i` stays within the
/// vanishing range, for every ordered pair of tilting summands.
pub fn strong_exceptionality_check(spec: &QuiverFlagSpec) -> Result<ExceptionalityCertificate> {
    let summands = tilting_summands(spec)?;
    let mut first_violation = None;
    let mut pairs_checked = 0u64;
    for (ia, a) in summands.iter().enumerate() {
        for (ib, b) in summands.iter().enumerate() {
            pairs_checked += 1;
            let ok = (1..=spec.rho()).all(|i| {
                tensor_weights(&a.weight(i).dual(), b.weight(i))
                    .keys()
                    .all(|w| w.min_entry() >= bott_bound(spec, i))
            });
            if !ok && first_violation.is_none() {
                first_violation = Some((ia, ib));
            }
        }
    }
    Ok(ExceptionalityCertificate {
        pairs_checked,
        all_in_range: first_violation.is_none(),
        first_violation,
    })
}

/// `dim End(T)` for the tilting bundle `T`.
pub fn endomorphism_dim(spec: &QuiverFlagSpec) -> Result<BigUint> {
    let summands = tilting_summands(spec)?;
    let pairs: Vec<(usize, usize)> = (0..summands.len())
        .flat_map(|a| (0..summands.len()).map(move |b| (a, b)))
        .collect();
    pairs
        .par_iter()
        .map(|(a, b)| hom_dim(spec, &summands[*a], &summands[*b]))
        .try_reduce(BigUint::zero, |x, y| Ok(x + y))
}

/// Rank of the tilting bundle.
pub fn tilting_rank(spec: &QuiverFlagSpec) -> Result<BigUint> {
    Ok(tilting_summands(spec)?
        .iter()
        .map(|t| {
            (1..=spec.rho())
                .map(|i| gl_dimension(t.weight(i), spec.rank(i) as usize))
                .product::<BigUint>()
        })
        .sum())
}
