use std::collections::BTreeSet;

use hardylab::prodrule::{
    check_product_rule, classify_on_projectors, enumerate_lattice_assignments, evaluate,
    uniqueness_theorem_check, DiagonalOperator, Factor, ProductRuleFunction, ProjectorCase,
};
use proptest::prelude::*;

/// Every 0/1 vector over the 2^N subsets with `f(A ∩ B) = f(A) f(B)` for all
/// pairs, by trying all 2^(2^N) of them. Each is returned as its set of
/// subsets valued 1.
fn brute_force(n: usize) -> BTreeSet<Vec<u64>> {
    let size = 1usize << n;
    let mut found = BTreeSet::new();
    for bits in 0u64..(1u64 << size) {
        let f = |m: usize| (bits >> m) & 1 == 1;
        let ok = (0..size).all(|a| (0..size).all(|b| f(a & b) == (f(a) && f(b))));
        if ok {
            found.insert((0..size as u64).filter(|&m| f(m as usize)).collect());
        }
    }
    found
}

fn enumerated(n: usize) -> BTreeSet<Vec<u64>> {
    enumerate_lattice_assignments(n)
        .unwrap()
        .iter()
        .map(|a| a.ones())
        .collect()
}

#[test]
fn enumeration_matches_brute_force_n3() {
    let oracle = brute_force(3);
    assert_eq!(oracle.len(), 9);
    assert_eq!(enumerated(3), oracle);
}

#[test]
fn enumeration_matches_brute_force_n4() {
    let oracle = brute_force(4);
    assert_eq!(oracle.len(), 17);
    assert_eq!(enumerated(4), oracle);
}

#[test]
fn enumeration_is_deterministic_and_counts_principal_filters() {
    for n in 3..=5 {
        let a = enumerate_lattice_assignments(n).unwrap();
        let b = enumerate_lattice_assignments(n).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), (1 << n) + 1);
        assert!(uniqueness_theorem_check(n).unwrap());
    }
}

fn function() -> impl Strategy<Value = ProductRuleFunction> {
    let n = 3usize..6;
    prop_oneof![
        n.clone()
            .prop_map(|n| ProductRuleFunction::const1(n).unwrap()),
        n.clone()
            .prop_map(|n| ProductRuleFunction::const0(n).unwrap()),
        (n.clone(), 0usize..5, 0.0..3.0f64, any::<bool>())
            .prop_map(|(n, i, a, s)| ProductRuleFunction::case2(n, i % n + 1, a, s).unwrap()),
        (
            n,
            prop::collection::vec((0.05..3.0f64, any::<bool>()), 5),
            2usize..6
        )
            .prop_map(|(n, fs, k)| {
                let factors = fs
                    .into_iter()
                    .take(k.min(n))
                    .enumerate()
                    .map(|(i, (alpha, signed))| Factor {
                        index: i + 1,
                        alpha,
                        signed,
                    })
                    .collect();
                ProductRuleFunction::case3(n, factors).unwrap()
            }),
    ]
}

fn spectrum(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(
        prop_oneof![Just(0.0), Just(1.0), Just(-1.0), -2.0..2.0f64],
        n,
    )
}

proptest! {
    #[test]
    fn family_members_obey_the_product_rule(
        (f, a, b) in function().prop_flat_map(|f| {
            let n = f.dim();
            (Just(f), spectrum(n), spectrum(n))
        })
    ) {
        let a = DiagonalOperator::new(a).unwrap();
        let b = DiagonalOperator::new(b).unwrap();
        prop_assert!(check_product_rule(&f, &a, &b).unwrap());
    }

    #[test]
    fn json_round_trip(f in function()) {
        let text = serde_json::to_string(&f).unwrap();
        let back: ProductRuleFunction = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn case_matches_family(f in function()) {
        let r = classify_on_projectors(&f).unwrap();
        let expected = match &f {
            ProductRuleFunction::Const1 { .. } => ProjectorCase::AllOne,
            ProductRuleFunction::Case2 { .. } => ProjectorCase::SomeOne,
            _ => ProjectorCase::AllZero,
        };
        prop_assert_eq!(r.case, expected);
        if let ProductRuleFunction::Case3 { factors, .. } = &f {
            let mut support: Vec<usize> = factors.iter().map(|x| x.index).collect();
            support.sort();
            prop_assert_eq!(r.minimal_unit_projectors, vec![support]);
        }
    }
}

#[test]
fn functions_outside_the_families_fail() {
    // 1 on P1 and on P2 but not on their product 0.
    let lattice: ProductRuleFunction =
        serde_json::from_str(r#"{"case":"lattice","n":3,"ones":[[1],[2],[1,2,3]]}"#).unwrap();
    let p1 = DiagonalOperator::new(vec![1.0, 0.0, 0.0]).unwrap();
    let p2 = DiagonalOperator::new(vec![0.0, 1.0, 0.0]).unwrap();
    assert!(!check_product_rule(&lattice, &p1, &p2).unwrap());
    assert_eq!(evaluate(&lattice, &p1).unwrap(), 1.0);
}
