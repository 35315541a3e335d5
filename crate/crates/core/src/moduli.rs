//! Explicit representations, stability for the special weight, echelon
//! charts and the index data of the irrelevant ideal.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;
use crate::quiver::QuiverFlagSpec;

/// `(-sum r_i, 1, ..., 1)`.
pub fn special_weight(spec: &QuiverFlagSpec) -> Vec<i64> {
    let mut theta = vec![1i64; spec.rho() + 1];
    theta[0] = -(spec.dims()[1..].iter().sum::<u64>() as i64);
    theta
}

/// `sum theta_i r_i`.
pub fn pairing(spec: &QuiverFlagSpec, theta: &[i64]) -> i64 {
    theta
        .iter()
        .zip(spec.dims())
        .map(|(t, r)| t * *r as i64)
        .sum()
}

/// One `r_i x s_i` block per non-source vertex; the columns of `w_i` are
/// grouped by the arrows into `i`, in arrow order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    blocks: Vec<RationalMatrix>,
}

impl Representation {
    /// `blocks[i - 1]` is `w_i`.
    pub fn new(spec: &QuiverFlagSpec, blocks: Vec<RationalMatrix>) -> Result<Self> {
        if blocks.len() != spec.rho() {
            return Err(Error::ShapeMismatch(format!(
                "{} blocks for {} non-source vertices",
                blocks.len(),
                spec.rho()
            )));
        }
        for (k, b) in blocks.iter().enumerate() {
            let i = k + 1;
            let (r, s) = (spec.rank(i) as usize, spec.s(i) as usize);
            if b.rows() != r || b.cols() != s {
                return Err(Error::ShapeMismatch(format!(
                    "w_{i} is {}x{}, expected {r}x{s}",
                    b.rows(),
                    b.cols()
                )));
            }
        }
        Ok(Representation { blocks })
    }

    pub fn block(&self, vertex: usize) -> &RationalMatrix {
        &self.blocks[vertex - 1]
    }

    pub fn blocks(&self) -> &[RationalMatrix] {
        &self.blocks
    }
}

/// Concatenates one `r_{h(a)} x r_{t(a)}` matrix per arrow into the coarse
/// blocks `w_i`.
pub fn assemble(spec: &QuiverFlagSpec, maps: &[RationalMatrix]) -> Result<Representation> {
    let arrows = spec.quiver().arrows();
    if maps.len() != arrows.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} arrow maps for {} arrows",
            maps.len(),
            arrows.len()
        )));
    }
    for (idx, (m, a)) in maps.iter().zip(arrows).enumerate() {
        let (rows, cols) = (spec.rank(a.head) as usize, spec.rank(a.tail) as usize);
        if m.rows() != rows || m.cols() != cols {
            return Err(Error::ShapeMismatch(format!(
                "arrow {idx} map is {}x{}, expected {rows}x{cols}",
                m.rows(),
                m.cols()
            )));
        }
    }
    let blocks = (1..=spec.rho())
        .map(|i| {
            let parts: Vec<RationalMatrix> = spec
                .quiver()
                .arrows_into(i)
                .map(|(idx, _)| maps[idx].clone())
                .collect();
            RationalMatrix::hcat(spec.rank(i) as usize, &parts)
        })
        .collect::<Result<Vec<_>>>()?;
    Representation::new(spec, blocks)
}

/// Stability for the special weight: every `w_i` has full rank `r_i`.
pub fn is_special_stable(spec: &QuiverFlagSpec, rep: &Representation) -> bool {
    first_unstable_vertex(spec, rep).is_none()
}

fn first_unstable_vertex(spec: &QuiverFlagSpec, rep: &Representation) -> Option<(usize, usize)> {
    (1..=spec.rho()).find_map(|i| {
        let rank = rep.block(i).rank();
        (rank < spec.rank(i) as usize).then_some((i, rank))
    })
}

fn small_rational<R: Rng>(rng: &mut R) -> BigRational {
    let num: i64 = rng.gen_range(-3..=3);
    let den: i64 = rng.gen_range(1..=3);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A stable representation: each `w_i` gets an identity block in randomly
/// chosen columns and small random rationals elsewhere.
pub fn random_stable(spec: &QuiverFlagSpec, seed: u64) -> Result<Representation> {
    spec.require_nonempty()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = (1..=spec.rho())
        .map(|i| {
            let (r, s) = (spec.rank(i) as usize, spec.s(i) as usize);
            let mut pivots = sample(&mut rng, s, r).into_vec();
            pivots.sort_unstable();
            let mut m = RationalMatrix::zeros(r, s);
            for row in 0..r {
                for col in 0..s {
                    let value = match pivots.iter().position(|p| *p == col) {
                        Some(k) if k == row => BigRational::one(),
                        Some(_) => BigRational::zero(),
                        None => small_rational(&mut rng),
                    };
                    m.set(row, col, value);
                }
            }
            m
        })
        .collect();
    Representation::new(spec, blocks)
}

/// A representation with independent small random entries; it may or may
/// not be stable.
pub fn random_representation(spec: &QuiverFlagSpec, seed: u64) -> Representation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = (1..=spec.rho())
        .map(|i| {
            let (r, s) = (spec.rank(i) as usize, spec.s(i) as usize);
            let mut m = RationalMatrix::zeros(r, s);
            for row in 0..r {
                for col in 0..s {
                    m.set(row, col, small_rational(&mut rng));
                }
            }
            m
        })
        .collect();
    Representation::new(spec, blocks).expect("shapes follow the spec")
}

/// A representation in the standard affine chart of its orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EchelonChart {
    /// Pivot columns of each `w_i`, 0-based, for `i = 1..=rho`.
    pub pivots: Vec<Vec<usize>>,
    pub normal_form: Representation,
    /// Entries of the normal form outside the pivot columns.
    pub free_entries: u64,
}

/// Gauge-fixes the representation vertex by vertex in topological order:
/// `w_i` is brought to reduced row echelon form by some `g_i in GL(r_i)`,
/// and `g_i^{-1}` is absorbed into the blocks of arrows leaving `i`.
pub fn echelon_chart(spec: &QuiverFlagSpec, rep: &Representation) -> Result<EchelonChart> {
    if let Some((vertex, rank)) = first_unstable_vertex(spec, rep) {
        return Err(Error::NotStable {
            vertex,
            rank,
            expected: spec.rank(vertex) as usize,
        });
    }
    let quiver = spec.quiver();
    let mut blocks = rep.blocks().to_vec();
    let mut pivots = Vec::with_capacity(spec.rho());
    for i in 1..=spec.rho() {
        let (reduced, pivot_cols) = blocks[i - 1].rref();
        // g_i^{-1} is the pivot submatrix of the old block
        let r = spec.rank(i) as usize;
        let mut g_inv = RationalMatrix::zeros(r, r);
        for (k, c) in pivot_cols.iter().enumerate() {
            for row in 0..r {
                g_inv.set(row, k, blocks[i - 1].get(row, *c).clone());
            }
        }
        blocks[i - 1] = reduced;
        for (idx, a) in quiver.arrows_from(i) {
            let offset = column_offset(spec, a.head, idx);
            let block = &mut blocks[a.head - 1];
            let piece = block.column_block(offset, r).mul(&g_inv)?;
            block.set_column_block(offset, &piece);
        }
        pivots.push(pivot_cols);
    }
    let free_entries = (1..=spec.rho())
        .map(|i| spec.rank(i) * (spec.s(i) - spec.rank(i)))
        .sum();
    Ok(EchelonChart {
        pivots,
        normal_form: Representation::new(spec, blocks)?,
        free_entries,
    })
}

/// First column of arrow `arrow` inside the block `w_head`.
fn column_offset(spec: &QuiverFlagSpec, head: usize, arrow: usize) -> usize {
    spec.quiver()
        .arrows_into(head)
        .take_while(|(idx, _)| *idx != arrow)
        .map(|(_, a)| spec.rank(a.tail) as usize)
        .sum()
}

/// For each vertex `i >= 1`, every `r_i`-subset of `{1..s_i}`: the column
/// sets of the maximal minors generating the irrelevant ideal.
pub fn minor_index_sets(spec: &QuiverFlagSpec) -> Vec<Vec<Vec<usize>>> {
    (1..=spec.rho())
        .map(|i| subsets(spec.s(i) as usize, spec.rank(i) as usize))
        .collect()
}

/// All `k`-subsets of `{1..n}` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn extend(
        start: usize,
        n: usize,
        k: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for v in start..=n {
            if n - v + 1 < k - prefix.len() {
                break;
            }
            prefix.push(v);
            extend(v + 1, n, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        extend(1, n, k, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChamberLineBundle {
    /// Exponent of `det W_i` for `i = 1..=rho`.
    pub exponents: Vec<i64>,
    /// All exponents positive; such bundles are ample.
    pub ample_hint: bool,
}

/// The line bundle `det(W_1)^{theta_1} ... det(W_rho)^{theta_rho}` of a character.
pub fn chamber_line_bundle(spec: &QuiverFlagSpec, theta: &[i64]) -> Result<ChamberLineBundle> {
    if theta.len() != spec.rho() + 1 {
        return Err(Error::ShapeMismatch(format!(
            "character has {} entries, expected {}",
            theta.len(),
            spec.rho() + 1
        )));
    }
    if pairing(spec, theta) != 0 {
        return Err(Error::NotACharacter(theta.to_vec()));
    }
    let exponents = theta[1..].to_vec();
    let ample_hint = exponents.iter().all(|t| *t > 0);
    Ok(ChamberLineBundle {
        exponents,
        ample_hint,
    })
}
