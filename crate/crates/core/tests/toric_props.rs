mod common;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use quiverflag::toric::{
    cox_data_of, kernel_binomials, monomial_count, monomials_of_degree, pivot_charts,
    quiver_of_sections, toric_tilting_lines, unit_degrees, weakly_exceptional_check, GradedCoxData,
};
use quiverflag::QuiverFlagSpec;

/// Rank-two Cox data whose degrees all pair positively with `(1, 1)`.
fn random_cox(seed: u64) -> GradedCoxData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=5);
    let mut degrees = Vec::new();
    while degrees.len() < n {
        let d = vec![rng.gen_range(-2..=3), rng.gen_range(-2..=3)];
        if d[0] + d[1] >= 1 {
            degrees.push(d);
        }
    }
    let vars = (1..=n).map(|i| format!("x{i}")).collect();
    GradedCoxData::new(2, vars, degrees).unwrap()
}

/// Exponent vectors of the given degree, by trying every vector whose
/// `(1, 1)`-weight matches.
fn brute_monomials(data: &GradedCoxData, degree: &[i64]) -> Vec<Vec<u32>> {
    let weights: Vec<i64> = data.degrees().iter().map(|d| d[0] + d[1]).collect();
    let total = degree[0] + degree[1];
    let mut out = Vec::new();
    fn walk(
        data: &GradedCoxData,
        w: &[i64],
        v: usize,
        left: i64,
        e: &mut Vec<u32>,
        target: &[i64],
        out: &mut Vec<Vec<u32>>,
    ) {
        if v == w.len() {
            if left == 0 && data.degree_of(e) == target {
                out.push(e.clone());
            }
            return;
        }
        for k in 0..=left / w[v] {
            e[v] = k as u32;
            walk(data, w, v + 1, left - k * w[v], e, target, out);
        }
        e[v] = 0;
    }
    if total >= 0 {
        walk(
            data,
            &weights,
            0,
            total,
            &mut vec![0; weights.len()],
            degree,
            &mut out,
        );
    }
    out
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// `0 = δ_0, ..., δ_k` with strictly increasing `(1, 1)`-weight, so no
/// monomial can point backwards.
fn increasing_degrees(seed: u64, k: usize) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![vec![0i64, 0]];
    let mut weight = 0;
    for _ in 0..k {
        weight += rng.gen_range(1..=2);
        let a = rng.gen_range(-2..=weight + 2);
        out.push(vec![a, weight - a]);
    }
    out
}

fn toric_strict(seed: u64) -> QuiverFlagSpec {
    random_strict_spec(&mut ChaCha8Rng::seed_from_u64(seed), 4, 4, true)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn monomials_match_enumeration(seed in any::<u64>(), a in -3i64..=6, b in -3i64..=6) {
        let data = random_cox(seed);
        let ours = monomials_of_degree(&data, &[a, b]).unwrap();
        let mut oracle = brute_monomials(&data, &[a, b]);
        oracle.sort_unstable_by(|x, y| y.cmp(x));
        prop_assert!(ours.windows(2).all(|w| w[0] > w[1]), "not strictly decreasing");
        prop_assert!(ours.iter().all(|m| data.degree_of(m) == vec![a, b]));
        prop_assert_eq!(&ours, &oracle);
        prop_assert_eq!(monomial_count(&data, &[a, b]).unwrap(), BigUint::from(oracle.len()));
    }

    /// A toric quiver flag variety is the quiver of sections of
    /// `O, det W_1, ..., det W_ρ`, each arrow labelled by its own variable.
    #[test]
    fn toric_specs_reproduce_themselves(seed in any::<u64>()) {
        let spec = random_nonempty_spec(&mut ChaCha8Rng::seed_from_u64(seed), 4, 4, true);
        let data = cox_data_of(&spec).unwrap();
        let sq = quiver_of_sections(&data, &unit_degrees(spec.rho())).unwrap();
        prop_assert_eq!(sq.arrow_counts(), spec.quiver().arrow_multiset());
        let mut ours: Vec<(usize, usize, Vec<u32>)> =
            sq.quiver.arrows().iter().zip(&sq.labels).map(|(a, l)| (a.tail, a.head, l.clone())).collect();
        let n = spec.quiver().arrows().len();
        let mut expected: Vec<(usize, usize, Vec<u32>)> = spec
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let mut e = vec![0; n];
                e[k] = 1;
                (a.tail, a.head, e)
            })
            .collect();
        ours.sort();
        expected.sort();
        prop_assert_eq!(ours, expected);
        prop_assert!(kernel_binomials(&sq, 3).is_empty());
    }

    #[test]
    fn quiver_of_sections_labels(seed in any::<u64>(), k in 1usize..=3) {
        let data = random_cox(seed);
        let degrees = increasing_degrees(seed, k);
        prop_assert!(weakly_exceptional_check(&data, &degrees).unwrap());
        let sq = quiver_of_sections(&data, &degrees).unwrap();
        for (a, label) in sq.quiver.arrows().iter().zip(&sq.labels) {
            let want: Vec<i64> = degrees[a.head].iter().zip(&degrees[a.tail]).map(|(x, y)| x - y).collect();
            prop_assert_eq!(data.degree_of(label), want);
            // irreducible: no intermediate section divides it
            for mid in a.tail + 1..a.head {
                let step: Vec<i64> = degrees[mid].iter().zip(&degrees[a.tail]).map(|(x, y)| x - y).collect();
                prop_assert!(brute_monomials(&data, &step).iter().all(|m| !divides(m, label)));
            }
        }
        let mut seen: BTreeMap<(usize, usize), Vec<Vec<u32>>> = BTreeMap::new();
        for (a, label) in sq.quiver.arrows().iter().zip(&sq.labels) {
            seen.entry((a.tail, a.head)).or_default().push(label.clone());
        }
        for labels in seen.values() {
            let mut sorted = labels.clone();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), labels.len(), "repeated label");
        }
        for b in kernel_binomials(&sq, 3) {
            prop_assert!(b.left != b.right);
            prop_assert!(b.left.len() <= 3 && b.right.len() <= 3);
            let ends = |p: &[usize]| (sq.quiver.arrows()[p[0]].tail, sq.quiver.arrows()[*p.last().unwrap()].head);
            prop_assert_eq!(ends(&b.left), ends(&b.right));
            for path in [&b.left, &b.right] {
                prop_assert!(path.windows(2).all(|w| sq.quiver.arrows()[w[0]].head == sq.quiver.arrows()[w[1]].tail));
                let mut product = vec![0u32; data.vars().len()];
                for a in path.iter() {
                    for (p, e) in product.iter_mut().zip(&sq.labels[*a]) {
                        *p += e;
                    }
                }
                prop_assert_eq!(&product, &b.label);
            }
        }
    }

    #[test]
    fn charts_and_tilting_lines_are_equinumerous(seed in any::<u64>()) {
        let spec = toric_strict(seed);
        let expected: u64 = (1..=spec.rho()).map(|i| spec.s(i)).product();
        let lines = toric_tilting_lines(&spec).unwrap();
        prop_assert_eq!(lines.len() as u64, expected);
        prop_assert!(lines.iter().all(|l| l.iter().enumerate().all(|(k, t)| (0..spec.s(k + 1) as i64).contains(t))));
        let charts = pivot_charts(&spec).unwrap();
        prop_assert_eq!(charts.len() as u64, expected);
        for chart in &charts {
            for (k, a) in chart.iter().enumerate() {
                prop_assert_eq!(spec.quiver().arrows()[*a].head, k + 1);
            }
        }
    }
}

#[test]
fn hirzebruch_binomial() {
    let data = GradedCoxData::new(
        2,
        ["x1", "x2", "x3", "x4"].map(String::from).to_vec(),
        vec![vec![1, 0], vec![-2, 1], vec![1, 0], vec![0, 1]],
    )
    .unwrap();
    let sq = quiver_of_sections(&data, &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
    let words: Vec<String> = kernel_binomials(&sq, 2)
        .iter()
        .map(ToString::to_string)
        .collect();
    assert_eq!(words, ["y1y5 - y2y4"]);
    assert!(!weakly_exceptional_check(&data, &[vec![0, 0], vec![0, 1], vec![1, 0]]).unwrap());
}
