//! Quivers with a unique source, dimension vectors, and the invariants that
//! only depend on arrow counts: weighted in/out degrees, dimension,
//! anticanonical exponents, path counts and vertex contraction.
//!
//! Every [`QuiverFlagSpec`] stores its quiver relabelled to a canonical
//! topological order (source first, ties broken by the smaller input label),
//! so every arrow satisfies `tail < head` and downstream code may iterate
//! vertices in increasing order.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arrow {
    pub tail: usize,
    pub head: usize,
}

/// A finite quiver. Arrow indices are the positions in [`Quiver::arrows`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<Arrow>,
}

/// Result of [`Quiver::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    /// `order[k]` is the input label of the vertex placed at position `k`.
    pub order: Vec<usize>,
    /// The quiver relabelled along `order`; arrow indices are unchanged.
    pub canonical: Quiver,
}

impl Quiver {
    pub fn new<I>(vertex_count: usize, arrows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if vertex_count == 0 {
            return Err(Error::NoVertices);
        }
        let arrows: Vec<Arrow> = arrows
            .into_iter()
            .map(|(tail, head)| Arrow { tail, head })
            .collect();
        for (idx, a) in arrows.iter().enumerate() {
            for v in [a.tail, a.head] {
                if v >= vertex_count {
                    return Err(Error::ArrowOutOfRange {
                        arrow: idx,
                        vertex: v,
                        vertex_count,
                    });
                }
            }
        }
        Ok(Quiver {
            vertex_count,
            arrows,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// Arrows with the given head, paired with their indices, in index order.
    pub fn arrows_into(&self, head: usize) -> impl Iterator<Item = (usize, Arrow)> + '_ {
        self.arrows
            .iter()
            .copied()
            .enumerate()
            .filter(move |(_, a)| a.head == head)
    }

    pub fn arrows_from(&self, tail: usize) -> impl Iterator<Item = (usize, Arrow)> + '_ {
        self.arrows
            .iter()
            .copied()
            .enumerate()
            .filter(move |(_, a)| a.tail == tail)
    }

    /// Number of arrows from `tail` to `head`.
    pub fn arrow_count(&self, tail: usize, head: usize) -> usize {
        self.arrows
            .iter()
            .filter(|a| a.tail == tail && a.head == head)
            .count()
    }

    /// Multiset of (tail, head) pairs, for label-preserving comparisons.
    pub fn arrow_multiset(&self) -> BTreeMap<(usize, usize), usize> {
        let mut counts = BTreeMap::new();
        for a in &self.arrows {
            *counts.entry((a.tail, a.head)).or_insert(0) += 1;
        }
        counts
    }

    /// Kahn's algorithm, always taking the smallest available label.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let mut indegree = vec![0usize; self.vertex_count];
        for a in &self.arrows {
            indegree[a.head] += 1;
        }
        let mut ready: BinaryHeap<Reverse<usize>> = indegree
            .iter()
            .enumerate()
            .filter(|(_, d)| **d == 0)
            .map(|(v, _)| Reverse(v))
            .collect();
        let mut order = Vec::with_capacity(self.vertex_count);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for (_, a) in self.arrows_from(v) {
                indegree[a.head] -= 1;
                if indegree[a.head] == 0 {
                    ready.push(Reverse(a.head));
                }
            }
        }
        if order.len() < self.vertex_count {
            let stuck = (0..self.vertex_count)
                .filter(|v| indegree[*v] > 0)
                .collect();
            return Err(Error::CyclicQuiver(stuck));
        }
        Ok(order)
    }

    /// Checks acyclicity, a unique source and reachability, and returns the
    /// canonical relabelling.
    pub fn validate(&self) -> Result<Validation> {
        let order = self.topological_order()?;
        let mut has_incoming = vec![false; self.vertex_count];
        for a in &self.arrows {
            has_incoming[a.head] = true;
        }
        let sources: Vec<usize> = (0..self.vertex_count)
            .filter(|v| !has_incoming[*v])
            .collect();
        if sources.len() != 1 {
            return Err(Error::MultipleSources(sources));
        }
        let source = sources[0];
        let mut seen = vec![false; self.vertex_count];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for (_, a) in self.arrows_from(v) {
                if !seen[a.head] {
                    seen[a.head] = true;
                    queue.push_back(a.head);
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::UnreachableVertex(v));
        }
        let canonical = self.relabel(&order);
        Ok(Validation { order, canonical })
    }

    /// Relabel so that the vertex `order[k]` becomes `k`.
    pub fn relabel(&self, order: &[usize]) -> Quiver {
        let mut position = vec![0; self.vertex_count];
        for (k, v) in order.iter().enumerate() {
            position[*v] = k;
        }
        Quiver {
            vertex_count: self.vertex_count,
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow {
                    tail: position[a.tail],
                    head: position[a.head],
                })
                .collect(),
        }
    }

    /// Number of directed paths from `from` to `to`, trivial path included.
    pub fn path_count(&self, from: usize, to: usize) -> Result<BigUint> {
        let order = self.topological_order()?;
        let mut counts = vec![BigUint::zero(); self.vertex_count];
        counts[from] = BigUint::one();
        let start = order.iter().position(|v| *v == from).unwrap_or(order.len());
        for &v in &order[start..] {
            if v == from {
                continue;
            }
            let mut total = BigUint::zero();
            for (_, a) in self.arrows_into(v) {
                total += &counts[a.tail];
            }
            counts[v] = total;
        }
        Ok(counts[to].clone())
    }
}

/// A quiver with unique source together with a dimension vector `r` with
/// `r_0 = 1`, stored in canonical topological labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuiverFlagSpec {
    quiver: Quiver,
    dims: Vec<u64>,
    incoming: Vec<u64>,
    outgoing: Vec<u64>,
    labels: Vec<usize>,
}

/// Weighted in-degrees `s_i` and out-degrees `s'_i`, indexed by vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeVectors {
    pub incoming: Vec<u64>,
    pub outgoing: Vec<u64>,
}

impl QuiverFlagSpec {
    /// `dims` is indexed by the labels used in `quiver`.
    pub fn new(quiver: Quiver, dims: Vec<u64>) -> Result<Self> {
        if dims.len() != quiver.vertex_count() {
            return Err(Error::InvalidDims(format!(
                "{} entries for {} vertices",
                dims.len(),
                quiver.vertex_count()
            )));
        }
        let Validation { order, canonical } = quiver.validate()?;
        let dims: Vec<u64> = order.iter().map(|v| dims[*v]).collect();
        if dims[0] != 1 {
            return Err(Error::InvalidDims(format!(
                "the source (input vertex {}) must have dimension 1, got {}",
                order[0], dims[0]
            )));
        }
        if let Some(k) = dims.iter().position(|d| *d == 0) {
            return Err(Error::InvalidDims(format!(
                "input vertex {} has dimension 0",
                order[k]
            )));
        }
        Ok(Self::from_canonical(canonical, dims, order))
    }

    /// Convenience constructor from raw arrow pairs.
    pub fn from_arrows(
        vertex_count: usize,
        arrows: &[(usize, usize)],
        dims: &[u64],
    ) -> Result<Self> {
        Self::new(
            Quiver::new(vertex_count, arrows.iter().copied())?,
            dims.to_vec(),
        )
    }

    /// The spec with a single vertex and no arrows (a point).
    pub fn point() -> Self {
        Self::from_canonical(
            Quiver {
                vertex_count: 1,
                arrows: Vec::new(),
            },
            vec![1],
            vec![0],
        )
    }

    fn from_canonical(quiver: Quiver, dims: Vec<u64>, labels: Vec<usize>) -> Self {
        let mut incoming = vec![0; quiver.vertex_count()];
        let mut outgoing = vec![0; quiver.vertex_count()];
        for a in quiver.arrows() {
            incoming[a.head] += dims[a.tail];
            outgoing[a.tail] += dims[a.head];
        }
        QuiverFlagSpec {
            quiver,
            dims,
            incoming,
            outgoing,
            labels,
        }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    /// Picard rank: the number of non-source vertices.
    pub fn rho(&self) -> usize {
        self.quiver.vertex_count() - 1
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn rank(&self, vertex: usize) -> u64 {
        self.dims[vertex]
    }

    /// `s_i`, the weighted in-degree.
    pub fn s(&self, vertex: usize) -> u64 {
        self.incoming[vertex]
    }

    /// `s'_i`, the weighted out-degree.
    pub fn s_prime(&self, vertex: usize) -> u64 {
        self.outgoing[vertex]
    }

    pub fn degree_vectors(&self) -> DegreeVectors {
        DegreeVectors {
            incoming: self.incoming.clone(),
            outgoing: self.outgoing.clone(),
        }
    }

    /// Input label of each canonical vertex.
    pub fn input_labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn is_nonempty(&self) -> bool {
        (1..=self.rho()).all(|i| self.dims[i] <= self.incoming[i])
    }

    pub fn is_strict(&self) -> bool {
        (1..=self.rho()).all(|i| self.dims[i] < self.incoming[i])
    }

    pub fn is_toric(&self) -> bool {
        self.dims.iter().all(|r| *r == 1)
    }

    pub fn require_nonempty(&self) -> Result<()> {
        match (1..=self.rho()).find(|i| self.dims[*i] > self.incoming[*i]) {
            Some(vertex) => Err(Error::EmptyModuli {
                vertex,
                rank: self.dims[vertex],
                incoming: self.incoming[vertex],
            }),
            None => Ok(()),
        }
    }

    /// Nonempty and strict.
    pub fn require_strict(&self) -> Result<()> {
        self.require_nonempty()?;
        match (1..=self.rho()).find(|i| self.dims[*i] == self.incoming[*i]) {
            Some(vertex) => Err(Error::NotStrict(vertex)),
            None => Ok(()),
        }
    }

    pub fn require_toric(&self) -> Result<()> {
        match self.dims.iter().position(|r| *r != 1) {
            Some(vertex) => Err(Error::NotToric(vertex)),
            None => Ok(()),
        }
    }

    /// `sum_i r_i (s_i - r_i)`.
    pub fn dimension(&self) -> Result<u64> {
        self.require_nonempty()?;
        Ok((1..=self.rho())
            .map(|i| self.dims[i] * (self.incoming[i] - self.dims[i]))
            .sum())
    }

    pub fn path_count(&self, from: usize, to: usize) -> BigUint {
        // canonical labels are topological
        let mut counts = vec![BigUint::zero(); self.quiver.vertex_count()];
        counts[from] = BigUint::one();
        for v in from + 1..=to {
            let mut total = BigUint::zero();
            for (_, a) in self.quiver.arrows_into(v) {
                total += &counts[a.tail];
            }
            counts[v] = total;
        }
        counts[to].clone()
    }

    /// Exponents of `det W_i` in the anticanonical bundle, for `i = 1..=rho`.
    pub fn anticanonical_exponents(&self) -> Result<Vec<i64>> {
        self.require_nonempty()?;
        Ok((1..=self.rho())
            .map(|i| self.incoming[i] as i64 - self.outgoing[i] as i64)
            .collect())
    }

    /// Sufficient (not necessary) Fano test: `s_i > s'_i` for every `i >= 1`.
    pub fn fano_sufficient(&self) -> bool {
        (1..=self.rho()).all(|i| self.incoming[i] > self.outgoing[i])
    }

    /// Repeatedly contracts a vertex with `r_i = s_i = 1` into the tail of
    /// its unique incoming arrow.
    pub fn simplify(&self) -> QuiverFlagSpec {
        let mut current = self.clone();
        while let Some(i) =
            (1..=current.rho()).find(|i| current.dims[*i] == 1 && current.incoming[*i] == 1)
        {
            current = current.contract(i);
        }
        current
    }

    fn contract(&self, vertex: usize) -> QuiverFlagSpec {
        let (removed, arrow) = self
            .quiver
            .arrows_into(vertex)
            .next()
            .expect("contracted vertex has an incoming arrow");
        let shift = |v: usize| if v > vertex { v - 1 } else { v };
        let arrows = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .filter(|(idx, _)| *idx != removed)
            .map(|(_, a)| {
                let tail = if a.tail == vertex { arrow.tail } else { a.tail };
                Arrow {
                    tail: shift(tail),
                    head: shift(a.head),
                }
            })
            .collect();
        let mut dims = self.dims.clone();
        dims.remove(vertex);
        let mut labels = self.labels.clone();
        labels.remove(vertex);
        let quiver = Quiver {
            vertex_count: self.quiver.vertex_count() - 1,
            arrows,
        };
        QuiverFlagSpec::from_canonical(quiver, dims, labels)
    }

    /// `min_i (s_i - r_i + 1)`: codimension of the determinantal unstable
    /// locus. Returns 0 for the one-vertex spec, which has no unstable locus.
    pub fn unstable_codimension(&self) -> Result<u64> {
        self.require_nonempty()?;
        Ok((1..=self.rho())
            .map(|i| self.incoming[i] - self.dims[i] + 1)
            .min()
            .unwrap_or(0))
    }
}
