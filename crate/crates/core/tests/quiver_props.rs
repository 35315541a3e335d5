mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use quiverflag::io::QuiverDocument;
use quiverflag::{Error, Quiver, QuiverFlagSpec};

fn spec_from(seed: u64, toric: bool) -> QuiverFlagSpec {
    random_nonempty_spec(&mut ChaCha8Rng::seed_from_u64(seed), 5, 5, toric)
}

/// `sum_i r_i (s_i - s'_i)`, which always equals `s'_0`.
fn weighted_antican(spec: &QuiverFlagSpec) -> i64 {
    spec.anticanonical_exponents()
        .unwrap()
        .iter()
        .enumerate()
        .map(|(k, e)| spec.rank(k + 1) as i64 * e)
        .sum()
}

/// Anticanonical exponents of `spec` pushed onto the vertices that survive
/// `simplify`, keyed by input label: a contracted vertex has `W_v = W_t`
/// for the tail `t` of its only arrow, so its exponent moves to `t`; the
/// source absorbs exponents silently since `W_0` is trivial.
fn folded_antican(spec: &QuiverFlagSpec, survivors: &[usize]) -> BTreeMap<usize, i64> {
    let exps = spec.anticanonical_exponents().unwrap();
    let labels = spec.input_labels();
    let mut out: BTreeMap<usize, i64> = survivors.iter().skip(1).map(|l| (*l, 0)).collect();
    for v in 1..=spec.rho() {
        let mut u = v;
        while !survivors.contains(&labels[u]) {
            u = spec.quiver().arrows_into(u).next().unwrap().1.tail;
        }
        if u != 0 {
            *out.get_mut(&labels[u]).unwrap() += exps[v - 1];
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn simplify_preserves_dimension_and_is_idempotent(seed in any::<u64>(), toric in any::<bool>()) {
        let spec = spec_from(seed, toric);
        let simple = spec.simplify();
        prop_assert_eq!(simple.dimension().unwrap(), spec.dimension().unwrap());
        prop_assert_eq!(simple.simplify(), simple.clone());
        let survivors = simple.input_labels().to_vec();
        let ours: BTreeMap<usize, i64> = survivors[1..]
            .iter()
            .copied()
            .zip(simple.anticanonical_exponents().unwrap())
            .collect();
        prop_assert_eq!(ours, folded_antican(&spec, &survivors));
        prop_assert_eq!(weighted_antican(&spec), spec.s_prime(0) as i64);
    }

    #[test]
    fn toric_dimension_zero_iff_simplifies_to_a_point(seed in any::<u64>()) {
        let spec = spec_from(seed, true);
        let point = spec.simplify().rho() == 0;
        prop_assert_eq!(spec.dimension().unwrap() == 0, point);
    }

    #[test]
    fn path_counts_match_enumeration(seed in any::<u64>(), toric in any::<bool>()) {
        let spec = spec_from(seed, toric);
        for i in 0..=spec.rho() {
            for j in i..=spec.rho() {
                prop_assert_eq!(spec.path_count(i, j), big(dfs_path_count(&spec, i, j)));
                prop_assert_eq!(spec.quiver().path_count(i, j).unwrap(), big(dfs_path_count(&spec, i, j)));
            }
        }
    }

    #[test]
    fn degree_vectors_follow_the_definition(seed in any::<u64>()) {
        let spec = spec_from(seed, false);
        for i in 0..=spec.rho() {
            let s: u64 = spec.quiver().arrows().iter().filter(|a| a.head == i).map(|a| spec.rank(a.tail)).sum();
            let s_prime: u64 = spec.quiver().arrows().iter().filter(|a| a.tail == i).map(|a| spec.rank(a.head)).sum();
            prop_assert_eq!(spec.s(i), s);
            prop_assert_eq!(spec.s_prime(i), s_prime);
        }
        let sinks = (1..=spec.rho()).filter(|i| spec.quiver().arrows().iter().all(|a| a.tail != *i));
        for sink in sinks {
            prop_assert_eq!(spec.s_prime(sink), 0);
        }
    }

    /// Shuffling vertex labels in the input changes nothing but the labels.
    #[test]
    fn relabelled_input_gives_the_same_spec(seed in any::<u64>(), perm_seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let spec = spec_from(seed, false);
        let n = spec.rho() + 1;
        let mut perm: Vec<usize> = (0..n).collect();
        perm[1..].shuffle(&mut ChaCha8Rng::seed_from_u64(perm_seed));
        let doc = QuiverDocument::from_spec(&spec);
        let arrows: Vec<(usize, usize)> = doc.arrows.iter().map(|(t, h)| (perm[*t], perm[*h])).collect();
        let mut dims = vec![0; n];
        for (v, r) in doc.dims.iter().enumerate() {
            dims[perm[v]] = *r;
        }
        let shuffled = QuiverFlagSpec::new(Quiver::new(n, arrows).unwrap(), dims).unwrap();
        prop_assert_eq!(shuffled.dimension().unwrap(), spec.dimension().unwrap());
        prop_assert_eq!(shuffled.anticanonical_exponents().unwrap().iter().sum::<i64>(),
                        spec.anticanonical_exponents().unwrap().iter().sum::<i64>());
        for (k, label) in shuffled.input_labels().iter().enumerate() {
            let original = perm.iter().position(|p| p == label).unwrap();
            prop_assert_eq!(shuffled.rank(k), spec.rank(original));
        }
    }
}

#[test]
fn structural_errors() {
    assert!(matches!(Quiver::new(0, []), Err(Error::NoVertices)));
    assert!(matches!(
        Quiver::new(2, [(0, 2)]),
        Err(Error::ArrowOutOfRange { .. })
    ));
    let two_sources = Quiver::new(3, [(0, 2), (1, 2)]).unwrap();
    assert!(matches!(
        QuiverFlagSpec::new(two_sources, vec![1, 1, 1]),
        Err(Error::MultipleSources(_))
    ));
    let point = QuiverFlagSpec::from_arrows(1, &[], &[1]).unwrap();
    assert_eq!(point.dimension().unwrap(), 0);
    assert_eq!(point, QuiverFlagSpec::point());
}

#[test]
fn fixtures() {
    let s = toric_rho2();
    assert_eq!((s.s(1), s.s(2), s.s_prime(1), s.s_prime(2)), (2, 3, 2, 0));
    assert_eq!(s.unstable_codimension().unwrap(), 2);
    let t = toric_rho3();
    assert_eq!(t.anticanonical_exponents().unwrap(), vec![-3, 3, 3]);
    assert!(!t.fano_sufficient());
    assert!(kronecker(4, 2).fano_sufficient());
    assert_eq!(rank_two_tower().dimension().unwrap(), 10);
}
