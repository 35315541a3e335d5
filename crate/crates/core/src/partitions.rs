//! Partitions, dominant weights, Littlewood–Richardson coefficients and
//! dimensions of irreducible polynomial/rational GL(n)-modules.
//!
//! LR coefficients are computed by enumerating skew tableaux with the
//! lattice-word condition. Weights stay small (|λ| ≲ 20) everywhere this
//! crate uses them, so no generating-function shortcuts are attempted.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partition with trailing zeros stripped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotDominant(
                parts.iter().map(|p| *p as i64).collect(),
            ));
        }
        let mut parts = parts;
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of nonzero rows.
    pub fn length(&self) -> usize {
        self.0.len()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Row `i` (0-based), zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Diagram containment `other ⊆ self`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.length() <= self.length() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// Parts as a weight of length `len`; `None` if the partition is longer.
    pub fn to_weight(&self, len: usize) -> Option<DominantWeight> {
        if self.length() > len {
            return None;
        }
        let mut entries: Vec<i64> = self.0.iter().map(|p| *p as i64).collect();
        entries.resize(len, 0);
        Some(DominantWeight(entries))
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

/// A weakly decreasing integer sequence of fixed length: the highest weight
/// of an irreducible rational GL(len)-module.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct DominantWeight(Vec<i64>);

impl DominantWeight {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotDominant(entries));
        }
        Ok(DominantWeight(entries))
    }

    pub fn zero(len: usize) -> Self {
        DominantWeight(vec![0; len])
    }

    /// `(1, 0, ..., 0)`: the bundle itself.
    pub fn unit(len: usize) -> Self {
        let mut entries = vec![0; len];
        if len > 0 {
            entries[0] = 1;
        }
        DominantWeight(entries)
    }

    /// `(1, ..., 1)`: the determinant.
    pub fn det(len: usize) -> Self {
        DominantWeight(vec![1; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }

    pub fn is_partition(&self) -> bool {
        self.min_entry() >= 0
    }

    /// Smallest entry; 0 for the empty weight.
    pub fn min_entry(&self) -> i64 {
        self.0.last().copied().unwrap_or(0)
    }

    pub fn max_entry(&self) -> i64 {
        self.0.first().copied().unwrap_or(0)
    }

    /// Weight of the dual module: `(-λ_r, ..., -λ_1)`.
    pub fn dual(&self) -> DominantWeight {
        DominantWeight(self.0.iter().rev().map(|e| -e).collect())
    }

    /// Adds `m` to every entry (tensoring with `det^m`).
    pub fn twist(&self, m: i64) -> DominantWeight {
        DominantWeight(self.0.iter().map(|e| e + m).collect())
    }

    /// Smallest `m >= 0` making `λ + m(1,...,1)` a partition, with that partition.
    pub fn normalize(&self) -> (Partition, u64) {
        let m = (-self.min_entry()).max(0);
        let parts = self.0.iter().map(|e| (e + m) as u32).collect();
        (
            Partition::new(parts).expect("twist keeps dominance"),
            m as u64,
        )
    }

    pub fn to_partition(&self) -> Option<Partition> {
        if self.is_partition() {
            Some(Partition::new(self.0.iter().map(|e| *e as u32).collect()).expect("dominant"))
        } else {
            None
        }
    }
}

impl TryFrom<Vec<i64>> for DominantWeight {
    type Error = Error;
    fn try_from(entries: Vec<i64>) -> Result<Self> {
        DominantWeight::new(entries)
    }
}

impl From<DominantWeight> for Vec<i64> {
    fn from(w: DominantWeight) -> Self {
        w.0
    }
}

/// All partitions fitting in a box with `k` columns and `r` rows, in
/// lexicographic order of their parts.
pub fn enumerate_young(k: u32, r: usize) -> Vec<Partition> {
    fn extend(prefix: &mut Vec<u32>, max_part: u32, rows_left: usize, out: &mut Vec<Partition>) {
        out.push(Partition(prefix.clone()));
        if rows_left == 0 {
            return;
        }
        for p in 1..=max_part {
            prefix.push(p);
            extend(prefix, p, rows_left - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), k, r, &mut out);
    out.sort();
    out
}

/// All partitions of `n` with at most `max_len` rows.
pub fn partitions_of(n: u32, max_len: usize) -> Vec<Partition> {
    fn extend(
        prefix: &mut Vec<u32>,
        remaining: u32,
        max_part: u32,
        rows_left: usize,
        out: &mut Vec<Partition>,
    ) {
        if remaining == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        if rows_left == 0 {
            return;
        }
        for p in (1..=max_part.min(remaining)).rev() {
            prefix.push(p);
            extend(prefix, remaining - p, p, rows_left - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), n, n, max_len, &mut out);
    out.sort();
    out
}

type LrKey = (Partition, Partition, Partition);

fn lr_cache() -> &'static Mutex<HashMap<LrKey, u64>> {
    static CACHE: OnceLock<Mutex<HashMap<LrKey, u64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The Littlewood–Richardson coefficient `c^ν_{λμ}`.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    if lambda.size() + mu.size() != nu.size() || !nu.contains(lambda) || !nu.contains(mu) {
        return 0;
    }
    if mu.length() == 0 || lambda.length() == 0 {
        return 1;
    }
    let key = (lambda.clone(), mu.clone(), nu.clone());
    if let Some(c) = lr_cache().lock().expect("lr cache").get(&key) {
        return *c;
    }
    let c = count_lr_tableaux(lambda, mu, nu);
    lr_cache().lock().expect("lr cache").insert(key, c);
    c
}

/// Counts fillings of `ν/λ` with content `μ` that are semistandard and whose
/// reverse reading word (rows top to bottom, each right to left) is a
/// lattice word.
fn count_lr_tableaux(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    let rows = nu.length();
    let mut cells = Vec::with_capacity(mu.size() as usize);
    for i in 0..rows {
        for c in (lambda.part(i)..nu.part(i)).rev() {
            cells.push((i, c as usize));
        }
    }
    let mut tableau: Vec<Vec<u8>> = (0..rows).map(|i| vec![0; nu.part(i) as usize]).collect();
    let content: Vec<u32> = mu.parts().to_vec();
    let mut counts = vec![0u32; content.len() + 1];

    struct Ctx<'a> {
        lambda: &'a Partition,
        nu: &'a Partition,
        cells: &'a [(usize, usize)],
        content: &'a [u32],
    }

    fn fill(ctx: &Ctx, pos: usize, tableau: &mut [Vec<u8>], counts: &mut [u32]) -> u64 {
        if pos == ctx.cells.len() {
            return 1;
        }
        let (i, c) = ctx.cells[pos];
        let mut upper = (ctx.content.len() as u8).min(i as u8 + 1);
        if c + 1 < ctx.nu.part(i) as usize {
            upper = upper.min(tableau[i][c + 1]);
        }
        let mut lower = 1u8;
        if i > 0 && c >= ctx.lambda.part(i - 1) as usize {
            lower = tableau[i - 1][c] + 1;
        }
        let mut total = 0;
        for v in lower..=upper {
            let vi = v as usize;
            if counts[vi] >= ctx.content[vi - 1] {
                continue;
            }
            if vi > 1 && counts[vi - 1] <= counts[vi] {
                continue;
            }
            counts[vi] += 1;
            tableau[i][c] = v;
            total += fill(ctx, pos + 1, tableau, counts);
            counts[vi] -= 1;
        }
        tableau[i][c] = 0;
        total
    }

    let ctx = Ctx {
        lambda,
        nu,
        cells: &cells,
        content: &content,
    };
    fill(&ctx, 0, &mut tableau, &mut counts)
}

/// `S^λ ⊗ S^μ = ⊕ c^ν_{λμ} S^ν`, keeping only `ν` with at most `rank` rows.
pub fn tensor_decompose(
    lambda: &Partition,
    mu: &Partition,
    rank: usize,
) -> BTreeMap<Partition, u64> {
    let total = lambda.size() + mu.size();
    let max_len = rank.min(lambda.length() + mu.length());
    let mut out = BTreeMap::new();
    let mut prefix = Vec::new();
    candidate_shapes(lambda, mu, max_len, total, &mut prefix, &mut |nu| {
        let c = lr_coefficient(lambda, mu, nu);
        if c > 0 {
            out.insert(nu.clone(), c);
        }
    });
    out
}

/// Shapes `ν ⊇ λ ∪ μ` of the given size with `ν_i <= λ_i + μ_1`.
fn candidate_shapes(
    lambda: &Partition,
    mu: &Partition,
    max_len: usize,
    remaining: u32,
    prefix: &mut Vec<u32>,
    visit: &mut dyn FnMut(&Partition),
) {
    let i = prefix.len();
    if remaining == 0 {
        if i >= lambda.length() && i >= mu.length() {
            visit(&Partition(prefix.clone()));
        }
        return;
    }
    if i >= max_len {
        return;
    }
    let low = lambda.part(i).max(mu.part(i)).max(1);
    let mut high = (lambda.part(i) + mu.part(0)).min(remaining);
    if let Some(prev) = prefix.last() {
        high = high.min(*prev);
    }
    for p in low..=high {
        prefix.push(p);
        candidate_shapes(lambda, mu, max_len, remaining - p, prefix, visit);
        prefix.pop();
    }
}

/// `S^ν(E ⊕ F) = ⊕ c^ν_{λμ} S^λ E ⊗ S^μ F` with `rank E = r1`, `rank F = r2`.
pub fn sum_decompose(
    nu: &Partition,
    r1: usize,
    r2: usize,
) -> BTreeMap<(Partition, Partition), u64> {
    let mut out = BTreeMap::new();
    for lambda in sub_partitions(nu, r1) {
        let rest = nu.size() - lambda.size();
        for mu in partitions_of(rest, r2) {
            if !nu.contains(&mu) {
                continue;
            }
            let c = lr_coefficient(&lambda, &mu, nu);
            if c > 0 {
                out.insert((lambda.clone(), mu), c);
            }
        }
    }
    out
}

/// Partitions contained in `outer` with at most `max_len` rows.
pub fn sub_partitions(outer: &Partition, max_len: usize) -> Vec<Partition> {
    fn extend(outer: &Partition, prefix: &mut Vec<u32>, max_len: usize, out: &mut Vec<Partition>) {
        out.push(Partition(prefix.clone()));
        let i = prefix.len();
        if i >= max_len || i >= outer.length() {
            return;
        }
        let high = prefix
            .last()
            .copied()
            .unwrap_or(u32::MAX)
            .min(outer.part(i));
        for p in 1..=high {
            prefix.push(p);
            extend(outer, prefix, max_len, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(outer, &mut Vec::new(), max_len, &mut out);
    out.sort();
    out
}

/// Tensor product of two GL(r) weights of the same length `r`, with
/// negative entries handled by determinant twists.
pub fn tensor_weights(a: &DominantWeight, b: &DominantWeight) -> BTreeMap<DominantWeight, u64> {
    assert_eq!(a.len(), b.len(), "weights of different ranks");
    let rank = a.len();
    let (pa, ma) = a.normalize();
    let (pb, mb) = b.normalize();
    let shift = -((ma + mb) as i64);
    tensor_decompose(&pa, &pb, rank)
        .into_iter()
        .map(|(nu, c)| {
            let w = nu.to_weight(rank).expect("truncated to rank").twist(shift);
            (w, c)
        })
        .collect()
}

/// Dimension of the irreducible GL(n)-module with highest weight `weight`.
///
/// Shorter weights are padded with zeros between their positive and
/// negative entries; weights with more than `n` nonzero entries give 0.
pub fn gl_dimension(weight: &DominantWeight, n: usize) -> BigUint {
    let positive: Vec<i64> = weight
        .entries()
        .iter()
        .copied()
        .filter(|e| *e > 0)
        .collect();
    let negative: Vec<i64> = weight
        .entries()
        .iter()
        .copied()
        .filter(|e| *e < 0)
        .collect();
    if positive.len() + negative.len() > n {
        return BigUint::from(0u32);
    }
    let mut padded = positive;
    padded.resize(n - negative.len(), 0);
    padded.extend(negative);
    let (partition, _) = DominantWeight(padded).normalize();
    hook_content_dimension(&partition, n)
}

/// `prod over boxes (n + content) / hook`.
pub fn hook_content_dimension(partition: &Partition, n: usize) -> BigUint {
    if partition.length() > n {
        return BigUint::from(0u32);
    }
    let mut numerator = BigUint::one();
    let mut denominator = BigUint::one();
    let columns = partition.part(0) as usize;
    let column_heights: Vec<usize> = (0..columns)
        .map(|c| {
            partition
                .parts()
                .iter()
                .filter(|p| **p as usize > c)
                .count()
        })
        .collect();
    for (i, row) in partition.parts().iter().enumerate() {
        for (j, height) in column_heights.iter().enumerate().take(*row as usize) {
            let content = n + j - i;
            let hook = (*row as usize - j) + (height - i) - 1;
            numerator *= BigUint::from(content);
            denominator *= BigUint::from(hook);
        }
    }
    numerator / denominator
}

/// Binomial coefficient as an arbitrary-precision integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}
