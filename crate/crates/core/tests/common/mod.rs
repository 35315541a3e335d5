//! Fixtures and independent oracles shared by the integration tests.
//!
//! Nothing here calls into the library's arithmetic: path counts come from
//! explicit DFS, monomial counts from bounded enumeration, Schur modules
//! from semistandard tableaux and Weyl's dimension formula, ranks from
//! minors expanded by Leibniz.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use quiverflag::QuiverFlagSpec;

pub fn toric_rho2() -> QuiverFlagSpec {
    QuiverFlagSpec::from_arrows(3, &[(0, 1), (0, 1), (0, 2), (1, 2), (1, 2)], &[1, 1, 1]).unwrap()
}

pub fn toric_rho3() -> QuiverFlagSpec {
    let mut arrows = vec![(0, 1), (0, 1), (0, 2)];
    arrows.extend([(1, 2); 4]);
    arrows.push((1, 3));
    arrows.extend([(2, 3); 2]);
    QuiverFlagSpec::from_arrows(4, &arrows, &[1, 1, 1, 1]).unwrap()
}

pub fn rank_two_tower() -> QuiverFlagSpec {
    let mut arrows = vec![(0, 1); 4];
    arrows.push((0, 2));
    arrows.extend([(1, 2), (1, 2)]);
    QuiverFlagSpec::from_arrows(3, &arrows, &[1, 2, 2]).unwrap()
}

pub fn kronecker(n: usize, r: u64) -> QuiverFlagSpec {
    QuiverFlagSpec::from_arrows(2, &vec![(0, 1); n], &[1, r]).unwrap()
}

/// Successive quotients `C^4 -> W_1 -> W_2` of ranks 2 and 1.
pub fn flag_4_2_1() -> QuiverFlagSpec {
    let mut arrows = vec![(0, 1); 4];
    arrows.push((1, 2));
    QuiverFlagSpec::from_arrows(3, &arrows, &[1, 2, 1]).unwrap()
}

pub fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

/// A random acyclic quiver with unique source 0, at most `max_rho`
/// further vertices, ranks chosen so that `r_i < s_i <= max_s`.
pub fn random_strict_spec<R: Rng>(
    rng: &mut R,
    max_rho: usize,
    max_s: u64,
    toric: bool,
) -> QuiverFlagSpec {
    loop {
        let rho = rng.gen_range(1..=max_rho);
        let mut arrows = Vec::new();
        let mut dims = vec![1u64];
        for head in 1..=rho {
            let target_s = rng.gen_range(2..=max_s);
            let mut s = 0;
            // one arrow from an earlier vertex keeps everything reachable
            let mut attempts = 0;
            while s < target_s && attempts < 20 {
                attempts += 1;
                let tail = rng.gen_range(0..head);
                if s + dims[tail] > max_s {
                    continue;
                }
                arrows.push((tail, head));
                s += dims[tail];
            }
            if s < 2 {
                break;
            }
            let r = if toric { 1 } else { rng.gen_range(1..s) };
            dims.push(r);
        }
        if dims.len() != rho + 1 {
            continue;
        }
        let spec = QuiverFlagSpec::from_arrows(rho + 1, &arrows, &dims).unwrap();
        if spec.is_strict() {
            return spec;
        }
    }
}

/// A random nonempty spec, possibly with `r_i = s_i`.
pub fn random_nonempty_spec<R: Rng>(
    rng: &mut R,
    max_rho: usize,
    max_s: u64,
    toric: bool,
) -> QuiverFlagSpec {
    let rho = rng.gen_range(0..=max_rho);
    let mut arrows = Vec::new();
    let mut dims = vec![1u64];
    for head in 1..=rho {
        let first = rng.gen_range(0..head);
        arrows.push((first, head));
        let mut s = dims[first];
        for _ in 0..rng.gen_range(0..max_s) {
            let tail = rng.gen_range(0..head);
            if s + dims[tail] <= max_s {
                arrows.push((tail, head));
                s += dims[tail];
            }
        }
        dims.push(if toric { 1 } else { rng.gen_range(1..=s) });
    }
    QuiverFlagSpec::from_arrows(rho + 1, &arrows, &dims).unwrap()
}

/// Number of paths from `from` to `to`, by walking every path.
pub fn dfs_path_count(spec: &QuiverFlagSpec, from: usize, to: usize) -> u64 {
    if from == to {
        return 1;
    }
    spec.quiver()
        .arrows()
        .iter()
        .filter(|a| a.tail == from)
        .map(|a| dfs_path_count(spec, a.head, to))
        .sum()
}

/// Degree `d_a = e_head - e_tail` of each arrow of a toric spec, with the
/// source coordinate dropped.
pub fn arrow_degrees(spec: &QuiverFlagSpec) -> Vec<Vec<i64>> {
    let rho = spec.rho();
    spec.quiver()
        .arrows()
        .iter()
        .map(|a| {
            let mut d = vec![0i64; rho];
            d[a.head - 1] += 1;
            if a.tail > 0 {
                d[a.tail - 1] -= 1;
            }
            d
        })
        .collect()
}

/// Nonnegative integer vectors on the arrows of a toric spec with degree
/// `theta`. Since `sum_i i * (d_a)_i >= 1` for every arrow, the entries sum
/// to at most `sum_i i * theta_i`, which bounds the enumeration.
pub fn brute_monomial_count(spec: &QuiverFlagSpec, theta: &[i64]) -> u64 {
    let degrees = arrow_degrees(spec);
    let budget: i64 = theta
        .iter()
        .enumerate()
        .map(|(i, t)| (i as i64 + 1) * t)
        .sum();
    if budget < 0 {
        return 0;
    }
    fn walk(
        degrees: &[Vec<i64>],
        a: usize,
        left: i64,
        current: &mut Vec<i64>,
        theta: &[i64],
    ) -> u64 {
        if a == degrees.len() {
            return u64::from(current.as_slice() == theta);
        }
        let mut total = 0;
        for k in 0..=left {
            for (c, d) in current.iter_mut().zip(&degrees[a]) {
                *c += k * d;
            }
            total += walk(degrees, a + 1, left - k, current, theta);
            for (c, d) in current.iter_mut().zip(&degrees[a]) {
                *c -= k * d;
            }
        }
        total
    }
    walk(&degrees, 0, budget, &mut vec![0; theta.len()], theta)
}

/// Weyl's dimension formula for the `GL(n)` module of highest weight `w`.
pub fn weyl_dimension(w: &[i64]) -> BigUint {
    let n = w.len();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n {
        for j in i + 1..n {
            num *= BigInt::from(w[i] - w[j] + (j - i) as i64);
            den *= BigInt::from((j - i) as i64);
        }
    }
    let q = num / den;
    assert!(!q.is_negative());
    q.to_biguint().unwrap()
}

/// Dominant weight lists as `GL(n)` characters: multisets of torus weights.
pub type Character = BTreeMap<Vec<i64>, i64>;

/// Semistandard tableaux of shape `shape` with entries in `0..letters`.
fn tableaux(shape: &[usize], letters: usize) -> Vec<Vec<Vec<usize>>> {
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, len)| (0..*len).map(move |c| (r, c)))
        .collect();
    let mut out = Vec::new();
    let mut filling: Vec<Vec<usize>> = shape.iter().map(|len| vec![0; *len]).collect();
    fn fill(
        k: usize,
        cells: &[(usize, usize)],
        letters: usize,
        filling: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if k == cells.len() {
            out.push(filling.clone());
            return;
        }
        let (r, c) = cells[k];
        let lo_row = if c > 0 { filling[r][c - 1] } else { 0 };
        let lo_col = if r > 0 { filling[r - 1][c] + 1 } else { 0 };
        for v in lo_row.max(lo_col)..letters {
            filling[r][c] = v;
            fill(k + 1, cells, letters, filling, out);
        }
    }
    fill(0, &cells, letters, &mut filling, &mut out);
    out
}

/// Character of `S^shape(V)` where `V` has the given torus weights.
pub fn schur_character(shape: &[usize], letter_weights: &[Vec<i64>], n: usize) -> Character {
    let mut out = Character::new();
    for t in tableaux(shape, letter_weights.len()) {
        let mut w = vec![0i64; n];
        for row in &t {
            for v in row {
                for (x, y) in w.iter_mut().zip(&letter_weights[*v]) {
                    *x += y;
                }
            }
        }
        *out.entry(w).or_insert(0) += 1;
    }
    out
}

fn standard_letters(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| {
            let mut e = vec![0i64; n];
            e[i] = 1;
            e
        })
        .collect()
}

/// Character of the irreducible `GL(n)` module of dominant weight `w`.
pub fn irreducible_character(w: &[i64]) -> Character {
    let n = w.len();
    let shift = -w.iter().copied().min().unwrap_or(0).min(0);
    let shape: Vec<usize> = w
        .iter()
        .map(|x| (x + shift) as usize)
        .filter(|x| *x > 0)
        .collect();
    schur_character(&shape, &standard_letters(n), n)
        .into_iter()
        .map(|(k, m)| (k.iter().map(|x| x - shift).collect(), m))
        .collect()
}

pub fn multiply(a: &Character, b: &Character) -> Character {
    let mut out = Character::new();
    for (wa, ma) in a {
        for (wb, mb) in b {
            let w: Vec<i64> = wa.iter().zip(wb).map(|(x, y)| x + y).collect();
            *out.entry(w).or_insert(0) += ma * mb;
        }
    }
    out.retain(|_, m| *m != 0);
    out
}

/// Splits a character into irreducibles by repeatedly removing the
/// character of its largest weight.
pub fn decompose(mut c: Character) -> BTreeMap<Vec<i64>, u64> {
    let mut out = BTreeMap::new();
    while let Some((top, m)) = c.iter().next_back().map(|(k, v)| (k.clone(), *v)) {
        assert!(m > 0, "not a character");
        assert!(
            top.windows(2).all(|p| p[0] >= p[1]),
            "largest weight {top:?} is not dominant"
        );
        for (w, k) in irreducible_character(&top) {
            *c.entry(w).or_insert(0) -= m * k;
        }
        c.retain(|_, v| *v != 0);
        *out.entry(top).or_insert(0) += m as u64;
    }
    out
}

/// `h^0` on the Grassmannian of rank-`r` quotients of `C^s` of the
/// homogeneous bundle with the given `GL(r)` decomposition (Borel-Weil):
/// partitions contribute their `GL(s)` dimension, weights with a negative
/// entry no lower than `-(s - r)` contribute nothing.
pub fn grassmannian_h0(parts: &BTreeMap<Vec<i64>, u64>, s: usize) -> BigUint {
    let r = parts.keys().next().map_or(0, Vec::len);
    let mut total = BigUint::zero();
    for (w, m) in parts {
        let low = *w.last().unwrap();
        if low >= 0 {
            let mut padded = w.clone();
            padded.resize(s, 0);
            total += weyl_dimension(&padded) * BigUint::from(*m);
        } else {
            assert!(
                low >= -((s - r) as i64),
                "weight {w:?} is outside the vanishing range"
            );
        }
    }
    total
}

/// Determinant by the Leibniz expansion.
pub fn leibniz_det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut total = BigRational::zero();
    let mut perm: Vec<usize> = (0..n).collect();
    fn permutations(
        k: usize,
        perm: &mut Vec<usize>,
        sign: bool,
        m: &[Vec<BigRational>],
        total: &mut BigRational,
    ) {
        if k == perm.len() {
            let mut p = BigRational::one();
            for (row, col) in perm.iter().enumerate() {
                p *= &m[row][*col];
            }
            if sign {
                *total -= p;
            } else {
                *total += p;
            }
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            permutations(k + 1, perm, sign ^ (i != k), m, total);
            perm.swap(k, i);
        }
    }
    permutations(0, &mut perm, false, m, &mut total);
    total
}

/// Whether some maximal minor of an `r x s` matrix (`r <= s`) is nonzero.
pub fn has_nonzero_maximal_minor(m: &[Vec<BigRational>], r: usize, s: usize) -> bool {
    fn choose(
        start: usize,
        s: usize,
        left: usize,
        cols: &mut Vec<usize>,
        m: &[Vec<BigRational>],
    ) -> bool {
        if left == 0 {
            let minor: Vec<Vec<BigRational>> = m
                .iter()
                .map(|row| cols.iter().map(|c| row[*c].clone()).collect())
                .collect();
            return !leibniz_det(&minor).is_zero();
        }
        for c in start..s {
            cols.push(c);
            if choose(c + 1, s, left - 1, cols, m) {
                return true;
            }
            cols.pop();
        }
        false
    }
    choose(0, s, r, &mut Vec::new(), m)
}
