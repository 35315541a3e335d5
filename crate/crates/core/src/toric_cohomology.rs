//! Line bundle cohomology on toric quiver flag varieties.
//!
//! With Cox ring `k[y_a]` and irrelevant ideal `B = ∩_i (y_a : h(a) = i)`,
//! local cohomology gives
//!
//! ```text
//! h^k(θ) = Σ_{u : deg u = θ} dim H̃^{k-1}(Δ|_{neg(u)})
//! ```
//!
//! where `Δ` is the simplicial complex on the arrows whose faces miss at
//! least one arrow into every vertex, and `neg(u) = {a : u_a < 0}`.
//!
//! Two evaluation routes are provided. [`Method::Exact`] groups exponent
//! vectors by their sign pattern `S`: if `S` meets the arrows into some
//! vertex in a proper nonempty subset, any arrow of that intersection is a
//! cone point of `Δ|_S` and the pattern contributes nothing. For the
//! remaining patterns (unions of whole head groups) the substitution
//! `u_a = -1 - v_a` on `S` turns the count into a monomial count for the
//! quiver with the arrows of `S` reversed, which is again acyclic, so the
//! count is finite and exact. [`Method::Lattice`] walks the degree fibre
//! shell by shell and stops after two empty shells that follow a nonempty
//! one; it is a heuristic and says so in its report.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::rank_i64;
use crate::quiver::QuiverFlagSpec;
use crate::toric::{monomial_count, GradedCoxData};

/// Faces are subsets of the arrows, encoded as bit masks, that do not
/// contain every arrow of any group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrrelevantComplex {
    arrow_count: usize,
    groups: Vec<u64>,
}

impl IrrelevantComplex {
    /// The complex of a toric spec: one group per non-source vertex.
    pub fn of(spec: &QuiverFlagSpec) -> Result<Self> {
        spec.require_toric()?;
        let groups = (1..=spec.rho())
            .map(|i| spec.quiver().arrows_into(i).map(|(idx, _)| idx).collect())
            .collect();
        Self::from_groups(spec.quiver().arrows().len(), groups)
    }

    pub fn from_groups(arrow_count: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        if arrow_count > 64 {
            return Err(Error::ShapeMismatch(format!(
                "{arrow_count} arrows exceed the 64 supported by the simplicial engine"
            )));
        }
        let groups = groups
            .into_iter()
            .map(|g| g.into_iter().fold(0u64, |m, a| m | (1 << a)))
            .collect();
        Ok(IrrelevantComplex {
            arrow_count,
            groups,
        })
    }

    pub fn arrow_count(&self) -> usize {
        self.arrow_count
    }

    pub fn groups(&self) -> &[u64] {
        &self.groups
    }

    pub fn is_face(&self, mask: u64) -> bool {
        self.groups.iter().all(|g| mask & g != *g)
    }

    /// Complements of the choices of one arrow per group.
    pub fn facets(&self) -> Vec<u64> {
        let all = if self.arrow_count == 64 {
            u64::MAX
        } else {
            (1u64 << self.arrow_count) - 1
        };
        let mut choices = vec![0u64];
        for g in &self.groups {
            let members: Vec<u64> = (0..64)
                .filter(|a| g >> a & 1 == 1)
                .map(|a| 1u64 << a)
                .collect();
            choices = choices
                .iter()
                .flat_map(|c| members.iter().map(move |m| c | m))
                .collect();
        }
        choices.into_iter().map(|c| all & !c).collect()
    }

    /// Reduced cohomology of the induced subcomplex on `vertices`.
    pub fn reduced_cohomology(&self, vertices: u64) -> ReducedCohomology {
        let key = (self.groups.clone(), vertices);
        if let Some(hit) = cohomology_cache()
            .lock()
            .expect("cohomology cache")
            .get(&key)
        {
            return hit.clone();
        }
        let value = reduced_cohomology(vertices, |f| self.is_face(f));
        cohomology_cache()
            .lock()
            .expect("cohomology cache")
            .insert(key, value.clone());
        value
    }
}

type CacheKey = (Vec<u64>, u64);

fn cohomology_cache() -> &'static Mutex<HashMap<CacheKey, ReducedCohomology>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, ReducedCohomology>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `dims[k + 1]` is `dim H̃^k` for `k = -1, 0, 1, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducedCohomology {
    pub dims: Vec<usize>,
}

impl ReducedCohomology {
    pub fn degree(&self, k: i64) -> usize {
        usize::try_from(k + 1)
            .ok()
            .and_then(|i| self.dims.get(i).copied())
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|d| *d == 0)
    }
}

/// Reduced rational cohomology of the simplicial complex on `vertices`
/// whose faces are the subsets accepted by `is_face` (which must be closed
/// under taking subsets).
pub fn reduced_cohomology(vertices: u64, is_face: impl Fn(u64) -> bool) -> ReducedCohomology {
    // faces by cardinality; the empty face sits at index 0
    let mut by_size: Vec<Vec<u64>> = vec![Vec::new(); vertices.count_ones() as usize + 1];
    let mut sub = vertices;
    loop {
        if is_face(sub) {
            by_size[sub.count_ones() as usize].push(sub);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & vertices;
    }
    while by_size.len() > 1 && by_size.last().is_some_and(Vec::is_empty) {
        by_size.pop();
    }
    for faces in &mut by_size {
        faces.sort_unstable();
    }
    // ranks[k] = rank of the boundary from faces of size k to size k - 1
    let mut ranks = vec![0usize; by_size.len() + 1];
    for k in 1..by_size.len() {
        let index: HashMap<u64, usize> = by_size[k - 1]
            .iter()
            .enumerate()
            .map(|(i, f)| (*f, i))
            .collect();
        let rows: Vec<Vec<i64>> = by_size[k]
            .iter()
            .map(|face| {
                let mut row = vec![0i64; by_size[k - 1].len()];
                let mut sign = 1;
                for v in 0..64 {
                    if face >> v & 1 == 1 {
                        row[index[&(face & !(1u64 << v))]] = sign;
                        sign = -sign;
                    }
                }
                row
            })
            .collect();
        ranks[k] = rank_i64(&rows);
    }
    let dims = (0..by_size.len())
        .map(|k| by_size[k].len() - ranks[k] - ranks[k + 1])
        .collect();
    ReducedCohomology { dims }
}

/// The kernel of the degree map `Z^{Q_1} -> Z^ρ` with a basis and a
/// section. The spanning tree uses the first arrow into each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeLattice {
    tree: Vec<usize>,
    arrows: Vec<(usize, usize)>,
    basis: Vec<Vec<i64>>,
}

impl DegreeLattice {
    pub fn of(spec: &QuiverFlagSpec) -> Result<Self> {
        spec.require_toric()?;
        let tree: Vec<usize> = (1..=spec.rho())
            .map(|i| {
                spec.quiver()
                    .arrows_into(i)
                    .next()
                    .map(|(idx, _)| idx)
                    .expect("every non-source vertex has an incoming arrow")
            })
            .collect();
        let arrows: Vec<(usize, usize)> = spec
            .quiver()
            .arrows()
            .iter()
            .map(|a| (a.tail, a.head))
            .collect();
        let mut lattice = DegreeLattice {
            tree,
            arrows,
            basis: Vec::new(),
        };
        let rho = spec.rho();
        let mut basis = Vec::new();
        for (idx, (tail, head)) in lattice.arrows.iter().enumerate() {
            if lattice.tree.contains(&idx) {
                continue;
            }
            let mut d = vec![0i64; rho];
            if *head > 0 {
                d[head - 1] += 1;
            }
            if *tail > 0 {
                d[tail - 1] -= 1;
            }
            let mut m: Vec<i64> = lattice.lift(&d).iter().map(|v| -v).collect();
            m[idx] += 1;
            basis.push(m);
        }
        lattice.basis = basis;
        Ok(lattice)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// An integer vector supported on the tree arrows with degree `theta`.
    pub fn lift(&self, theta: &[i64]) -> Vec<i64> {
        let mut u = vec![0i64; self.arrows.len()];
        for i in (1..=self.tree.len()).rev() {
            let outgoing: i64 = self
                .tree
                .iter()
                .filter(|a| self.arrows[**a].0 == i)
                .map(|a| u[*a])
                .sum();
            u[self.tree[i - 1]] = theta[i - 1] + outgoing;
        }
        u
    }

    /// Degree of an integer vector on the arrows.
    pub fn degree(&self, u: &[i64]) -> Vec<i64> {
        let mut d = vec![0i64; self.tree.len()];
        for (value, (tail, head)) in u.iter().zip(&self.arrows) {
            if *head > 0 {
                d[head - 1] += value;
            }
            if *tail > 0 {
                d[tail - 1] -= value;
            }
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Lattice { radius: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub theta: Vec<i64>,
    /// `h[k] = dim H^k` for `k = 0..=dim`.
    pub h: Vec<BigUint>,
    /// False when the lattice search hit its radius before seeing two empty
    /// shells after a contribution; the entries are then lower bounds.
    pub stabilized: bool,
    pub radius: Option<usize>,
}

impl CohomologyReport {
    pub fn require_stabilized(&self) -> Result<()> {
        match (self.stabilized, self.radius) {
            (false, Some(radius)) => Err(Error::SearchBudgetExceeded { radius }),
            _ => Ok(()),
        }
    }
}

pub fn cohomology_dims(
    spec: &QuiverFlagSpec,
    theta: &[i64],
    method: Method,
) -> Result<CohomologyReport> {
    spec.require_toric()?;
    if theta.len() != spec.rho() {
        return Err(Error::ShapeMismatch(format!(
            "theta has {} entries, expected {}",
            theta.len(),
            spec.rho()
        )));
    }
    let complex = IrrelevantComplex::of(spec)?;
    let dim = spec.dimension()? as usize;
    match method {
        Method::Exact => exact(spec, &complex, theta, dim),
        Method::Lattice { radius } => lattice_search(spec, &complex, theta, dim, radius),
    }
}

fn add_contribution(h: &mut [BigUint], cohomology: &ReducedCohomology, count: &BigUint) {
    for (idx, d) in cohomology.dims.iter().enumerate() {
        // H̃^{k-1} feeds h^k and sits at index k
        if *d > 0 && idx < h.len() {
            h[idx] += count * BigUint::from(*d);
        }
    }
}

fn exact(
    spec: &QuiverFlagSpec,
    complex: &IrrelevantComplex,
    theta: &[i64],
    dim: usize,
) -> Result<CohomologyReport> {
    let rho = spec.rho();
    let arrows = spec.quiver().arrows();
    let mut h = vec![BigUint::zero(); dim + 1];
    for choice in 0u64..(1u64 << rho) {
        let pattern = (0..rho)
            .filter(|i| choice >> i & 1 == 1)
            .fold(0u64, |m, i| m | complex.groups[i]);
        let cohomology = complex.reduced_cohomology(pattern);
        if cohomology.is_zero() {
            continue;
        }
        let mut shifted = theta.to_vec();
        let mut degrees = Vec::with_capacity(arrows.len());
        for (idx, a) in arrows.iter().enumerate() {
            let mut d = vec![0i64; rho];
            if a.head > 0 {
                d[a.head - 1] += 1;
            }
            if a.tail > 0 {
                d[a.tail - 1] -= 1;
            }
            if pattern >> idx & 1 == 1 {
                for (s, v) in shifted.iter_mut().zip(&d) {
                    *s += v;
                }
                d.iter_mut().for_each(|v| *v = -*v);
            }
            degrees.push(d);
        }
        let vars = (1..=arrows.len()).map(|k| format!("v{k}")).collect();
        let reversed = GradedCoxData::new(rho, vars, degrees)?;
        let count = monomial_count(&reversed, &shifted)?;
        add_contribution(&mut h, &cohomology, &count);
    }
    Ok(CohomologyReport {
        theta: theta.to_vec(),
        h,
        stabilized: true,
        radius: None,
    })
}

/// Integer vectors of the given L1 norm in `Z^n`.
fn l1_shell(n: usize, radius: usize) -> Vec<Vec<i64>> {
    fn fill(n: usize, left: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == n {
            if left == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if prefix.len() + 1 == n {
            for v in if left == 0 {
                vec![0]
            } else {
                vec![left as i64, -(left as i64)]
            } {
                prefix.push(v);
                fill(n, 0, prefix, out);
                prefix.pop();
            }
            return;
        }
        for m in 0..=left {
            let signs = if m == 0 {
                vec![0]
            } else {
                vec![m as i64, -(m as i64)]
            };
            for v in signs {
                prefix.push(v);
                fill(n, left - m, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if radius == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    fill(n, radius, &mut Vec::new(), &mut out);
    out
}

fn lattice_search(
    spec: &QuiverFlagSpec,
    complex: &IrrelevantComplex,
    theta: &[i64],
    dim: usize,
    radius: usize,
) -> Result<CohomologyReport> {
    let lattice = DegreeLattice::of(spec)?;
    let base = lattice.lift(theta);
    let mut cache: HashMap<u64, ReducedCohomology> = HashMap::new();
    let mut h = vec![BigUint::zero(); dim + 1];
    // Contributions may start several shells out, so empty shells only
    // count once something has been found; a search that finds nothing
    // never stabilizes.
    let mut started = false;
    let mut empty_shells = 0;
    let mut stabilized = false;
    for r in 0..=radius {
        let mut found = false;
        for c in l1_shell(lattice.rank(), r) {
            let mut u = base.clone();
            for (coeff, m) in c.iter().zip(lattice.basis()) {
                for (ua, ma) in u.iter_mut().zip(m) {
                    *ua += coeff * ma;
                }
            }
            let neg = u
                .iter()
                .enumerate()
                .filter(|(_, v)| **v < 0)
                .fold(0u64, |m, (a, _)| m | (1 << a));
            let cohomology = cache
                .entry(neg)
                .or_insert_with(|| complex.reduced_cohomology(neg));
            if !cohomology.is_zero() {
                found = true;
                add_contribution(&mut h, cohomology, &BigUint::from(1u32));
            }
        }
        started |= found;
        empty_shells = if found || !started {
            0
        } else {
            empty_shells + 1
        };
        if empty_shells == 2 {
            stabilized = true;
            break;
        }
    }
    Ok(CohomologyReport {
        theta: theta.to_vec(),
        h,
        stabilized,
        radius: Some(radius),
    })
}

/// `θ_i > -s_i` for every vertex: all higher cohomology vanishes there.
pub fn vanishing_region_check(spec: &QuiverFlagSpec, theta: &[i64]) -> bool {
    theta
        .iter()
        .enumerate()
        .all(|(k, t)| *t > -(spec.s(k + 1) as i64))
}

/// Compares `h^k(θ)` with `h^{dim-k}(K - θ)` for every `k`, where `K` is
/// the canonical class.
pub fn serre_dual_check(spec: &QuiverFlagSpec, theta: &[i64], method: Method) -> Result<bool> {
    let canonical: Vec<i64> = spec.anticanonical_exponents()?.iter().map(|e| -e).collect();
    let dual: Vec<i64> = canonical.iter().zip(theta).map(|(k, t)| k - t).collect();
    let left = cohomology_dims(spec, theta, method)?;
    let right = cohomology_dims(spec, &dual, method)?;
    left.require_stabilized()?;
    right.require_stabilized()?;
    let mut reversed = right.h.clone();
    reversed.reverse();
    Ok(left.h == reversed)
}

/// Whether `h^k` is nonzero at `apex`.
pub fn cone_spot_check(
    spec: &QuiverFlagSpec,
    apex: &[i64],
    k: usize,
    method: Method,
) -> Result<bool> {
    let report = cohomology_dims(spec, apex, method)?;
    Ok(report.h.get(k).is_some_and(|v| !v.is_zero()))
}
