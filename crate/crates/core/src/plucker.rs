//! The quiver of sections of `(O, det W_1, ..., det W_ρ)`, the toric
//! ambient space it defines, and a degree-bounded probe of the induced map
//! between Cox rings.
//!
//! For toric specs everything is exact. Otherwise the number of arrows
//! `i -> j` is estimated: `dim Hom(det W_i, det W_j)` is exact, but the
//! dimension of the subspace factoring through intermediate determinants
//! is bounded above by `min(dim Hom, Σ_k n'_{i,k} · dim Hom(det W_k, det W_j))`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::{Quiver, QuiverFlagSpec};
use crate::schur::{h0_dim, hom_dim, BundleTerm};
use crate::toric::{
    cox_data_of, monomial_count, monomials_of_degree, quiver_of_sections, unit_degrees,
    GradedCoxData, SectionQuiver,
};

/// `h^0(det W_i)`.
pub fn det_h0(spec: &QuiverFlagSpec, vertex: usize) -> Result<BigUint> {
    spec.require_strict()?;
    h0_dim(spec, &BundleTerm::det(spec, vertex))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PluckerMode {
    ToricExact,
    GenericRank,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PluckerPair {
    pub i: usize,
    pub j: usize,
    pub dim_hom: BigUint,
    /// Dimension of the maps factoring through some `det W_k`, `i < k < j`
    /// (an upper bound in generic-rank mode).
    pub factoring: BigUint,
    pub n_prime: BigUint,
    pub mode: PluckerMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PluckerQuiver {
    pub vertex_count: usize,
    pub mode: PluckerMode,
    /// Every pair `i < j`, ordered by `(i, j)`.
    pub pairs: Vec<PluckerPair>,
}

impl PluckerQuiver {
    /// Arrow counts `n'_{i,j}`, omitting zeros.
    pub fn counts(&self) -> BTreeMap<(usize, usize), BigUint> {
        self.pairs
            .iter()
            .filter(|p| !p.n_prime.is_zero())
            .map(|p| ((p.i, p.j), p.n_prime.clone()))
            .collect()
    }

    pub fn n_prime(&self, i: usize, j: usize) -> BigUint {
        self.pairs
            .iter()
            .find(|p| p.i == i && p.j == j)
            .map(|p| p.n_prime.clone())
            .unwrap_or_default()
    }
}

pub fn plucker_quiver(spec: &QuiverFlagSpec, mode: PluckerMode) -> Result<PluckerQuiver> {
    spec.require_strict()?;
    match mode {
        PluckerMode::ToricExact => toric_exact(spec),
        PluckerMode::GenericRank => generic_rank(spec),
    }
}

/// Exact for toric specs, the generic-rank estimate otherwise.
pub fn plucker_quiver_auto(spec: &QuiverFlagSpec) -> Result<PluckerQuiver> {
    if spec.is_toric() {
        plucker_quiver(spec, PluckerMode::ToricExact)
    } else {
        plucker_quiver(spec, PluckerMode::GenericRank)
    }
}

/// The section quiver of the unit degrees in the Cox ring of a toric spec.
pub fn toric_section_quiver(spec: &QuiverFlagSpec) -> Result<(GradedCoxData, SectionQuiver)> {
    let data = cox_data_of(spec)?;
    let sq = quiver_of_sections(&data, &unit_degrees(spec.rho()))?;
    Ok((data, sq))
}

fn toric_exact(spec: &QuiverFlagSpec) -> Result<PluckerQuiver> {
    let (data, sq) = toric_section_quiver(spec)?;
    let counts = sq.arrow_counts();
    let n = spec.rho() + 1;
    let degrees = unit_degrees(spec.rho());
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let delta: Vec<i64> = degrees[j]
                .iter()
                .zip(&degrees[i])
                .map(|(a, b)| a - b)
                .collect();
            let dim_hom = monomial_count(&data, &delta)?;
            let n_prime = BigUint::from(counts.get(&(i, j)).copied().unwrap_or(0));
            pairs.push(PluckerPair {
                i,
                j,
                factoring: &dim_hom - &n_prime,
                dim_hom,
                n_prime,
                mode: PluckerMode::ToricExact,
            });
        }
    }
    Ok(PluckerQuiver {
        vertex_count: n,
        mode: PluckerMode::ToricExact,
        pairs,
    })
}

fn generic_rank(spec: &QuiverFlagSpec) -> Result<PluckerQuiver> {
    let n = spec.rho() + 1;
    let index_pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let homs: Vec<BigUint> = index_pairs
        .par_iter()
        .map(|(i, j)| hom_dim(spec, &BundleTerm::det(spec, *i), &BundleTerm::det(spec, *j)))
        .collect::<Result<_>>()?;
    let hom: BTreeMap<(usize, usize), BigUint> = index_pairs.iter().copied().zip(homs).collect();
    let mut n_prime: BTreeMap<(usize, usize), BigUint> = BTreeMap::new();
    let mut pairs = Vec::new();
    for j in 1..n {
        for i in 0..j {
            let dim_hom = hom[&(i, j)].clone();
            let through: BigUint = (i + 1..j).map(|k| &n_prime[&(i, k)] * &hom[&(k, j)]).sum();
            let factoring = through.min(dim_hom.clone());
            let np = &dim_hom - &factoring;
            n_prime.insert((i, j), np.clone());
            pairs.push(PluckerPair {
                i,
                j,
                dim_hom,
                factoring,
                n_prime: np,
                mode: PluckerMode::GenericRank,
            });
        }
    }
    pairs.sort_by_key(|p| (p.i, p.j));
    Ok(PluckerQuiver {
        vertex_count: n,
        mode: PluckerMode::GenericRank,
        pairs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PluckerAmbient {
    /// The quiver flag spec `(Q', (1, ..., 1))`.
    pub spec: QuiverFlagSpec,
    pub dim: u64,
    pub codim: i64,
}

/// The ambient toric variety built from arrow counts `n'_{i,j}`; counts
/// may come from [`plucker_quiver`] or be supplied directly.
pub fn plucker_ambient(
    spec: &QuiverFlagSpec,
    counts: &BTreeMap<(usize, usize), BigUint>,
) -> Result<PluckerAmbient> {
    spec.require_strict()?;
    let n = spec.rho() + 1;
    let mut arrows = Vec::new();
    for ((i, j), c) in counts {
        if i >= j || *j >= n {
            return Err(Error::InvalidDims(format!(
                "arrow count for invalid pair {i}->{j}"
            )));
        }
        let c = c
            .to_usize()
            .ok_or_else(|| Error::InvalidDims(format!("arrow count {c} is too large")))?;
        arrows.extend(std::iter::repeat_n((*i, *j), c));
    }
    let ambient = QuiverFlagSpec::new(Quiver::new(n, arrows)?, vec![1; n])?;
    let dim = ambient.dimension()?;
    let codim = dim as i64 - spec.dimension()? as i64;
    Ok(PluckerAmbient {
        spec: ambient,
        dim,
        codim,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeEntry {
    pub theta: Vec<i64>,
    /// Distinct images of the ambient monomials of degree `θ`.
    pub image: BigUint,
    /// Monomials of degree `θ` in the Cox ring of the spec.
    pub target: BigUint,
    pub surjective: bool,
}

/// For every `θ` with `0 <= θ_i <= bound`, substitutes each arrow variable
/// of the ambient Cox ring by its monomial label and counts the distinct
/// products hit among the monomials of degree `θ`.
pub fn cox_probe(spec: &QuiverFlagSpec, bound: u32) -> Result<Vec<ProbeEntry>> {
    spec.require_toric()?;
    spec.require_strict()?;
    let (data, sq) = toric_section_quiver(spec)?;
    let ambient_arrows: Vec<(usize, usize)> = sq
        .quiver
        .arrows()
        .iter()
        .map(|a| (a.tail, a.head))
        .collect();
    let ambient_spec =
        QuiverFlagSpec::from_arrows(spec.rho() + 1, &ambient_arrows, &vec![1; spec.rho() + 1])?;
    let ambient = cox_data_of(&ambient_spec)?;
    let mut thetas: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..spec.rho() {
        thetas = thetas
            .into_iter()
            .flat_map(|prefix| {
                (0..=bound as i64).map(move |t| {
                    let mut next = prefix.clone();
                    next.push(t);
                    next
                })
            })
            .collect();
    }
    thetas
        .par_iter()
        .map(|theta| {
            let mut image = BTreeSet::new();
            for m in monomials_of_degree(&ambient, theta)? {
                let mut product = vec![0u32; data.vars().len()];
                for (e, label) in m.iter().zip(&sq.labels) {
                    for (p, l) in product.iter_mut().zip(label) {
                        *p += e * l;
                    }
                }
                image.insert(product);
            }
            let target = monomial_count(&data, theta)?;
            let image = BigUint::from(image.len());
            Ok(ProbeEntry {
                theta: theta.clone(),
                surjective: image == target,
                image,
                target,
            })
        })
        .collect()
}
