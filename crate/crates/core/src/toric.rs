//! Graded Cox data, monomial sections, quivers of sections and the toric
//! specialisation (every `r_i = 1`) of quiver flag varieties.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::{Quiver, QuiverFlagSpec};

/// Passes of the perceptron search for a positive functional before the
/// grading is declared not pointed.
const POINTED_PASSES: usize = 20_000;

/// A polynomial ring with a grading by `Z^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedCoxData {
    rank: usize,
    vars: Vec<String>,
    degrees: Vec<Vec<i64>>,
    /// Integer functional positive on every degree, when one was found.
    functional: Option<Vec<i64>>,
}

impl GradedCoxData {
    pub fn new(rank: usize, vars: Vec<String>, degrees: Vec<Vec<i64>>) -> Result<Self> {
        if vars.len() != degrees.len() {
            return Err(Error::InvalidDegrees(format!(
                "{} variables but {} degrees",
                vars.len(),
                degrees.len()
            )));
        }
        if let Some((k, d)) = degrees.iter().enumerate().find(|(_, d)| d.len() != rank) {
            return Err(Error::InvalidDegrees(format!(
                "degree of {} has {} entries, expected {rank}",
                vars[k],
                d.len()
            )));
        }
        let functional = positive_functional(rank, &degrees);
        Ok(GradedCoxData {
            rank,
            vars,
            degrees,
            functional,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn degrees(&self) -> &[Vec<i64>] {
        &self.degrees
    }

    /// A functional `c` with `c · deg(x) > 0` for every variable `x`.
    pub fn pointedness_certificate(&self) -> Result<&[i64]> {
        self.functional
            .as_deref()
            .ok_or_else(|| Error::NotPointed("no functional is positive on every degree".into()))
    }

    pub fn is_pointed(&self) -> bool {
        self.functional.is_some()
    }

    /// Degree of a monomial given by its exponent vector.
    pub fn degree_of(&self, exponents: &[u32]) -> Vec<i64> {
        let mut d = vec![0i64; self.rank];
        for (e, deg) in exponents.iter().zip(&self.degrees) {
            for (acc, v) in d.iter_mut().zip(deg) {
                *acc += *e as i64 * v;
            }
        }
        d
    }

    /// Writes a monomial such as `x1^2x2`; the constant is `1`.
    pub fn format_monomial(&self, exponents: &[u32]) -> String {
        let mut out = String::new();
        for (e, name) in exponents.iter().zip(&self.vars) {
            match e {
                0 => {}
                1 => out.push_str(name),
                _ => out.push_str(&format!("{name}^{e}")),
            }
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }

    fn check_degree(&self, degree: &[i64]) -> Result<()> {
        if degree.len() != self.rank {
            return Err(Error::InvalidDegrees(format!(
                "degree has {} entries, expected {}",
                degree.len(),
                self.rank
            )));
        }
        Ok(())
    }
}

/// Perceptron search for `c` with `c · d > 0` for all `d`. Such a `c` exists
/// exactly when no nonzero nonnegative combination of the degrees vanishes.
fn positive_functional(rank: usize, degrees: &[Vec<i64>]) -> Option<Vec<i64>> {
    let mut c = vec![0i64; rank];
    for _ in 0..POINTED_PASSES {
        let mut updated = false;
        for d in degrees {
            if dot(&c, d) <= 0 {
                if d.iter().all(|v| *v == 0) {
                    return None;
                }
                for (ci, di) in c.iter_mut().zip(d) {
                    *ci += di;
                }
                updated = true;
            }
        }
        if !updated {
            return Some(c);
        }
    }
    None
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Every monomial of the given degree as an exponent vector, in
/// lexicographically decreasing order.
pub fn monomials_of_degree(data: &GradedCoxData, degree: &[i64]) -> Result<Vec<Vec<u32>>> {
    data.check_degree(degree)?;
    let c = data.pointedness_certificate()?.to_vec();
    let weights: Vec<i64> = data.degrees.iter().map(|d| dot(&c, d)).collect();
    let mut out = Vec::new();
    let mut exponents = vec![0u32; data.vars.len()];
    enumerate(
        data,
        &c,
        &weights,
        0,
        degree.to_vec(),
        &mut exponents,
        &mut out,
    );
    Ok(out)
}

fn enumerate(
    data: &GradedCoxData,
    c: &[i64],
    weights: &[i64],
    var: usize,
    remaining: Vec<i64>,
    exponents: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if var == data.vars.len() {
        if remaining.iter().all(|v| *v == 0) {
            out.push(exponents.clone());
        }
        return;
    }
    let budget = dot(c, &remaining);
    if budget < 0 {
        return;
    }
    let max = budget / weights[var];
    for e in (0..=max).rev() {
        let rest: Vec<i64> = remaining
            .iter()
            .zip(&data.degrees[var])
            .map(|(r, d)| r - e * d)
            .collect();
        exponents[var] = e as u32;
        enumerate(data, c, weights, var + 1, rest, exponents, out);
    }
    exponents[var] = 0;
}

/// Number of monomials of the given degree.
pub fn monomial_count(data: &GradedCoxData, degree: &[i64]) -> Result<BigUint> {
    data.check_degree(degree)?;
    let c = data.pointedness_certificate()?.to_vec();
    let weights: Vec<i64> = data.degrees.iter().map(|d| dot(&c, d)).collect();
    let mut memo = HashMap::new();
    Ok(count(data, &c, &weights, 0, degree.to_vec(), &mut memo))
}

fn count(
    data: &GradedCoxData,
    c: &[i64],
    weights: &[i64],
    var: usize,
    remaining: Vec<i64>,
    memo: &mut HashMap<(usize, Vec<i64>), BigUint>,
) -> BigUint {
    if var == data.vars.len() {
        return if remaining.iter().all(|v| *v == 0) {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    let budget = dot(c, &remaining);
    if budget < 0 {
        return BigUint::zero();
    }
    if let Some(v) = memo.get(&(var, remaining.clone())) {
        return v.clone();
    }
    let mut total = BigUint::zero();
    let mut rest = remaining.clone();
    for _ in 0..=budget / weights[var] {
        total += count(data, c, weights, var + 1, rest.clone(), memo);
        for (r, d) in rest.iter_mut().zip(&data.degrees[var]) {
            *r -= d;
        }
    }
    memo.insert((var, remaining), total.clone());
    total
}

/// One variable `y_a` per arrow, of degree `e_{h(a)} - e_{t(a)}` with `e_0 = 0`.
pub fn cox_data_of(spec: &QuiverFlagSpec) -> Result<GradedCoxData> {
    spec.require_toric()?;
    let rho = spec.rho();
    let mut vars = Vec::new();
    let mut degrees = Vec::new();
    for (k, a) in spec.quiver().arrows().iter().enumerate() {
        vars.push(format!("y{}", k + 1));
        let mut d = vec![0i64; rho];
        if a.head > 0 {
            d[a.head - 1] += 1;
        }
        if a.tail > 0 {
            d[a.tail - 1] -= 1;
        }
        degrees.push(d);
    }
    GradedCoxData::new(rho, vars, degrees)
}

/// `e_i` in `Z^ρ` for `i >= 1`, zero for `i = 0`.
pub fn unit_degrees(rho: usize) -> Vec<Vec<i64>> {
    (0..=rho)
        .map(|i| {
            let mut d = vec![0i64; rho];
            if i > 0 {
                d[i - 1] = 1;
            }
            d
        })
        .collect()
}

/// A quiver whose arrows carry monomial labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionQuiver {
    pub quiver: Quiver,
    /// Exponent vector of each arrow's label, in arrow order.
    pub labels: Vec<Vec<u32>>,
    /// The degrees `δ_0, ..., δ_ρ` the quiver was built from.
    pub degrees: Vec<Vec<i64>>,
}

impl SectionQuiver {
    /// Arrow counts `n_{i,j}`.
    pub fn arrow_counts(&self) -> BTreeMap<(usize, usize), usize> {
        self.quiver.arrow_multiset()
    }
}

/// True when no monomial has degree `δ_i - δ_j` for any `j > i`.
pub fn weakly_exceptional_check(data: &GradedCoxData, degrees: &[Vec<i64>]) -> Result<bool> {
    Ok(first_backward_hom(data, degrees)?.is_none())
}

fn first_backward_hom(
    data: &GradedCoxData,
    degrees: &[Vec<i64>],
) -> Result<Option<(usize, usize)>> {
    for i in 0..degrees.len() {
        for j in i + 1..degrees.len() {
            if !monomial_count(data, &sub(&degrees[i], &degrees[j]))?.is_zero() {
                return Ok(Some((j, i)));
            }
        }
    }
    Ok(None)
}

/// The quiver of sections of a weakly exceptional sequence of line bundles
/// of degrees `δ_0 = 0, δ_1, ..., δ_ρ`. Arrows `i -> j` are the monomials of
/// degree `δ_j - δ_i` not divisible by a monomial of degree `δ_k - δ_i` for
/// an intermediate `k`.
pub fn quiver_of_sections(data: &GradedCoxData, degrees: &[Vec<i64>]) -> Result<SectionQuiver> {
    let Some(first) = degrees.first() else {
        return Err(Error::InvalidDegrees("the degree list is empty".into()));
    };
    for d in degrees {
        data.check_degree(d)?;
    }
    if first.iter().any(|v| *v != 0) {
        return Err(Error::InvalidDegrees(
            "the first degree must be zero".into(),
        ));
    }
    let distinct: BTreeSet<&Vec<i64>> = degrees.iter().collect();
    if distinct.len() != degrees.len() {
        return Err(Error::InvalidDegrees("degrees must be distinct".into()));
    }
    if let Some((from, to)) = first_backward_hom(data, degrees)? {
        return Err(Error::NotWeaklyExceptional { from, to });
    }
    let n = degrees.len();
    let mut arrows = Vec::new();
    let mut labels = Vec::new();
    for i in 0..n {
        // monomials of degree δ_k - δ_i for every k > i
        let from_i: Vec<Vec<Vec<u32>>> = (0..n)
            .map(|k| {
                if k > i {
                    monomials_of_degree(data, &sub(&degrees[k], &degrees[i]))
                } else {
                    Ok(Vec::new())
                }
            })
            .collect::<Result<_>>()?;
        for j in i + 1..n {
            for m in &from_i[j] {
                let factors = (i + 1..j).any(|k| from_i[k].iter().any(|m1| divides(m1, m)));
                if !factors {
                    arrows.push((i, j));
                    labels.push(m.clone());
                }
            }
        }
    }
    Ok(SectionQuiver {
        quiver: Quiver::new(n, arrows)?,
        labels,
        degrees: degrees.to_vec(),
    })
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Two distinct parallel paths with the same monomial label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Binomial {
    /// Arrow indices along the lexicographically smaller path.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub label: Vec<u32>,
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |p: &[usize]| p.iter().map(|a| format!("y{}", a + 1)).collect::<String>();
        write!(f, "{} - {}", word(&self.left), word(&self.right))
    }
}

/// Every pair of distinct parallel paths of length at most `bound` whose
/// labels multiply to the same monomial.
pub fn kernel_binomials(sq: &SectionQuiver, bound: usize) -> Vec<Binomial> {
    /// Paths keyed by start, end and label.
    type Groups = BTreeMap<(usize, usize, Vec<u32>), Vec<Vec<usize>>>;
    let width = sq.labels.first().map_or(0, Vec::len);
    let mut groups: Groups = BTreeMap::new();
    fn walk(
        sq: &SectionQuiver,
        start: usize,
        at: usize,
        path: &mut Vec<usize>,
        label: &mut Vec<u32>,
        bound: usize,
        groups: &mut Groups,
    ) {
        if !path.is_empty() {
            groups
                .entry((start, at, label.clone()))
                .or_default()
                .push(path.clone());
        }
        if path.len() == bound {
            return;
        }
        for (idx, a) in sq.quiver.arrows_from(at) {
            path.push(idx);
            for (l, e) in label.iter_mut().zip(&sq.labels[idx]) {
                *l += e;
            }
            walk(sq, start, a.head, path, label, bound, groups);
            for (l, e) in label.iter_mut().zip(&sq.labels[idx]) {
                *l -= e;
            }
            path.pop();
        }
    }
    for v in 0..sq.quiver.vertex_count() {
        walk(
            sq,
            v,
            v,
            &mut Vec::new(),
            &mut vec![0; width],
            bound,
            &mut groups,
        );
    }
    let mut out = Vec::new();
    for ((_, _, label), mut paths) in groups {
        paths.sort();
        for x in 0..paths.len() {
            for y in x + 1..paths.len() {
                out.push(Binomial {
                    left: paths[x].clone(),
                    right: paths[y].clone(),
                    label: label.clone(),
                });
            }
        }
    }
    out.sort();
    out
}

/// Whether every monomial of degree `δ_1 + ... + δ_ρ` is a product of
/// monomials of degrees `δ_1, ..., δ_ρ`.
pub fn multiplication_surjective(data: &GradedCoxData, degrees: &[Vec<i64>]) -> Result<bool> {
    let mut products: BTreeSet<Vec<u32>> = BTreeSet::from([vec![0; data.vars.len()]]);
    let mut total = vec![0i64; data.rank];
    for d in degrees {
        let factors = monomials_of_degree(data, d)?;
        products = products
            .iter()
            .flat_map(|p| {
                factors
                    .iter()
                    .map(move |m| p.iter().zip(m).map(|(a, b)| a + b).collect::<Vec<u32>>())
            })
            .collect();
        for (t, v) in total.iter_mut().zip(d) {
            *t += v;
        }
    }
    Ok(BigUint::from(products.len()) == monomial_count(data, &total)?)
}

/// Exponent vectors `θ` with `0 <= θ_i < s_i`.
pub fn toric_tilting_lines(spec: &QuiverFlagSpec) -> Result<Vec<Vec<i64>>> {
    spec.require_toric()?;
    spec.require_strict()?;
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for i in 1..=spec.rho() {
        let s = spec.s(i) as i64;
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..s).map(move |t| {
                    let mut next = prefix.clone();
                    next.push(t);
                    next
                })
            })
            .collect();
    }
    Ok(out)
}

/// Every choice of one incoming arrow per non-source vertex.
pub fn pivot_charts(spec: &QuiverFlagSpec) -> Result<Vec<Vec<usize>>> {
    spec.require_toric()?;
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for i in 1..=spec.rho() {
        let incoming: Vec<usize> = spec.quiver().arrows_into(i).map(|(idx, _)| idx).collect();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                incoming.iter().map(move |a| {
                    let mut next = prefix.clone();
                    next.push(*a);
                    next
                })
            })
            .collect();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn f2() -> GradedCoxData {
        GradedCoxData::new(
            2,
            ["x1", "x2", "x3", "x4"].map(String::from).to_vec(),
            vec![vec![1, 0], vec![-2, 1], vec![1, 0], vec![0, 1]],
        )
        .unwrap()
    }

    fn toric_rho2() -> QuiverFlagSpec {
        QuiverFlagSpec::from_arrows(3, &[(0, 1), (0, 1), (0, 2), (1, 2), (1, 2)], &[1, 1, 1])
            .unwrap()
    }

    #[test]
    fn cox_degrees() {
        let data = cox_data_of(&toric_rho2()).unwrap();
        assert_eq!(
            data.degrees(),
            &[vec![1, 0], vec![1, 0], vec![0, 1], vec![-1, 1], vec![-1, 1]]
        );
        let k = QuiverFlagSpec::from_arrows(2, &[(0, 1); 3], &[1, 1]).unwrap();
        assert_eq!(
            cox_data_of(&k).unwrap().degrees(),
            &[vec![1], vec![1], vec![1]]
        );
        let grass = QuiverFlagSpec::from_arrows(2, &[(0, 1); 3], &[1, 2]).unwrap();
        assert_eq!(cox_data_of(&grass), Err(Error::NotToric(1)));
    }

    #[test]
    fn f2_monomials() {
        let data = f2();
        let ms = monomials_of_degree(&data, &[0, 1]).unwrap();
        let names: Vec<String> = ms.iter().map(|m| data.format_monomial(m)).collect();
        assert_eq!(names, vec!["x1^2x2", "x1x2x3", "x2x3^2", "x4"]);
        assert_eq!(monomial_count(&data, &[0, 1]).unwrap(), BigUint::from(4u32));
        assert_eq!(
            monomials_of_degree(&data, &[0, 0]).unwrap(),
            vec![vec![0; 4]]
        );
        assert!(monomials_of_degree(&data, &[-1, 0]).unwrap().is_empty());
        let data = cox_data_of(&toric_rho2()).unwrap();
        assert_eq!(monomials_of_degree(&data, &[0, 1]).unwrap().len(), 5);
    }

    #[test]
    fn non_pointed_grading() {
        let data =
            GradedCoxData::new(1, vec!["a".into(), "b".into()], vec![vec![1], vec![-1]]).unwrap();
        assert!(matches!(
            monomials_of_degree(&data, &[0]),
            Err(Error::NotPointed(_))
        ));
    }

    #[test]
    fn f2_quiver_of_sections() {
        let data = f2();
        let degrees = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
        let sq = quiver_of_sections(&data, &degrees).unwrap();
        let arrows: Vec<(usize, usize)> = sq
            .quiver
            .arrows()
            .iter()
            .map(|a| (a.tail, a.head))
            .collect();
        assert_eq!(arrows, vec![(0, 1), (0, 1), (0, 2), (1, 2), (1, 2)]);
        let labels: Vec<String> = sq.labels.iter().map(|m| data.format_monomial(m)).collect();
        assert_eq!(labels, vec!["x1", "x3", "x4", "x1x2", "x2x3"]);
        let binomials = kernel_binomials(&sq, 2);
        assert_eq!(binomials.len(), 1);
        assert_eq!(binomials[0].to_string(), "y1y5 - y2y4");
        assert_eq!(sq.arrow_counts(), toric_rho2().quiver().arrow_multiset());
        assert!(weakly_exceptional_check(&data, &degrees).unwrap());
        let reversed = vec![vec![0, 0], vec![0, 1], vec![1, 0]];
        assert!(!weakly_exceptional_check(&data, &reversed).unwrap());
        assert!(weakly_exceptional_check(&data, &[vec![0, 0]]).unwrap());
    }

    #[test]
    fn self_reproduction_and_kronecker() {
        let spec = toric_rho2();
        let sq = quiver_of_sections(&cox_data_of(&spec).unwrap(), &unit_degrees(2)).unwrap();
        assert_eq!(sq.arrow_counts(), spec.quiver().arrow_multiset());
        let p1 = QuiverFlagSpec::from_arrows(2, &[(0, 1); 2], &[1, 1]).unwrap();
        let sq = quiver_of_sections(&cox_data_of(&p1).unwrap(), &unit_degrees(1)).unwrap();
        assert_eq!(sq.arrow_counts(), BTreeMap::from([((0, 1), 2)]));
        assert!(kernel_binomials(&sq, 2).is_empty());
    }

    #[test]
    fn surjectivity() {
        assert!(multiplication_surjective(&f2(), &[vec![1, 0], vec![0, 1]]).unwrap());
        let p1 =
            GradedCoxData::new(1, vec!["a".into(), "b".into()], vec![vec![1], vec![1]]).unwrap();
        assert!(multiplication_surjective(&p1, &[vec![1], vec![1]]).unwrap());
        assert!(multiplication_surjective(&p1, &[vec![3]]).unwrap());
    }

    #[test]
    fn tilting_lines_and_charts() {
        let spec = toric_rho2();
        assert_eq!(toric_tilting_lines(&spec).unwrap().len(), 6);
        assert_eq!(pivot_charts(&spec).unwrap().len(), 6);
        assert_eq!(pivot_charts(&spec).unwrap()[0], vec![0, 2]);
        let p1 = QuiverFlagSpec::from_arrows(2, &[(0, 1); 2], &[1, 1]).unwrap();
        assert_eq!(toric_tilting_lines(&p1).unwrap(), vec![vec![0], vec![1]]);
    }
}
