mod common;

use std::collections::BTreeSet;

use num_rational::Rational64;
use pointed_cy::cartan::{longest_word_by, CartanMatrix, RootSystem};
use pointed_cy::datum::{GenericDatum, PbwDegree};
use pointed_cy::format::{parse_datum, write_datum};
use pointed_cy::homology::{coeff_identity_check, cy_relation_check, is_cy_pointed};
use pointed_cy::isomorphism::{
    canonicalize_group_data, classify, representative, transport, Classification,
};
use pointed_cy::scalars::{
    apply_multiplicative, determinant, gcd_reducer, solve_integer_affine, solve_multiplicative_system, Monomial, Param,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{random_cy_family, random_datum, random_permutation, random_unimodular, TYPES};

const NAMED: [&str; 12] = ["A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2", "F4", "A1xA1", "A2xA1"];

fn monomial() -> impl Strategy<Value = Monomial> {
    (any::<bool>(), -6i64..=6, 1i64..=3, -4i64..=4).prop_map(|(neg, a, den, b)| {
        let (q, t) = (Param::new("q").unwrap(), Param::new("t").unwrap());
        Monomial::from_factors(neg, [(q, Rational64::new(a, den)), (t, Rational64::from_integer(b))])
    })
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, cols), rows)
}

/// Positive roots by closing the simple roots under all simple reflections.
fn closure_roots(cartan: &CartanMatrix) -> BTreeSet<Vec<i64>> {
    let n = cartan.rank();
    let simple: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut seen: BTreeSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut frontier = simple;
    while let Some(v) = frontier.pop() {
        for i in 0..n {
            let pairing: i64 = (0..n).map(|j| cartan.entry(i, j) * v[j]).sum();
            let mut w = v.clone();
            w[i] -= pairing;
            if seen.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    seen.into_iter().filter(|v| v.iter().all(|&x| x >= 0)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monomials_form_a_group(a in monomial(), b in monomial(), c in monomial()) {
        prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
        prop_assert!((&a * &a.inv()).is_one());
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(a.pow(3).inv(), a.inv().pow(3));
        prop_assert_eq!(a.to_string().parse::<Monomial>().unwrap(), a.clone());
        prop_assert_eq!(a.is_root_of_unity(), a.params().next().is_none());
    }

    #[test]
    fn affine_solutions_are_solutions(a in matrix(3, 4), x0 in prop::collection::vec(-5i64..=5, 4),
                                      coeffs in prop::collection::vec(-3i64..=3, 4)) {
        let b: Vec<Rational64> = a.iter()
            .map(|r| Rational64::from_integer(r.iter().zip(&x0).map(|(p, q)| p * q).sum()))
            .collect();
        let sol = solve_integer_affine(&a, &b).unwrap().expect("consistent system");
        let z = sol.point(&coeffs[..sol.kernel.len()]).unwrap();
        for (row, rhs) in a.iter().zip(&b) {
            prop_assert_eq!(Rational64::from_integer(row.iter().zip(&z).map(|(p, q)| p * q).sum()), *rhs);
        }
        for k in &sol.kernel {
            prop_assert!(a.iter().all(|r| r.iter().zip(k).map(|(p, q)| p * q).sum::<i64>() == 0));
        }
    }

    #[test]
    fn infeasible_systems_have_no_small_solution(a in matrix(2, 2), b in prop::collection::vec(-6i64..=6, 2)) {
        let rhs: Vec<Rational64> = b.iter().map(|&x| Rational64::from_integer(x)).collect();
        if solve_integer_affine(&a, &rhs).unwrap().is_none() {
            for x in -30i64..=30 {
                for y in -30i64..=30 {
                    prop_assert!(a[0][0] * x + a[0][1] * y != b[0] || a[1][0] * x + a[1][1] * y != b[1]);
                }
            }
        }
    }

    #[test]
    fn gcd_reducer_is_unimodular(v in prop::collection::vec(-20i64..=20, 1..=4)) {
        let (m, g) = gcd_reducer(&v).unwrap();
        prop_assert_eq!(determinant(&m).unwrap().abs(), 1);
        let image: Vec<i64> = m.iter().map(|r| r.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
        prop_assert_eq!(image[0], g);
        prop_assert!(image[1..].iter().all(|&x| x == 0));
        prop_assert_eq!(g, v.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x)));
    }

    #[test]
    fn multiplicative_systems_solve_their_images(a in matrix(3, 3), x in prop::collection::vec(monomial(), 3)) {
        let c = apply_multiplicative(&a, &x);
        let sol = solve_multiplicative_system(&a, &c).unwrap().expect("image is solvable");
        prop_assert_eq!(apply_multiplicative(&a, &sol), c);
    }

    #[test]
    fn roots_match_reflection_closure(idx in 0..NAMED.len(), seed in any::<u64>()) {
        let cartan = CartanMatrix::named(NAMED[idx]).unwrap();
        let oracle = closure_roots(&cartan);
        let rs = RootSystem::new(cartan.clone());
        let roots: BTreeSet<Vec<i64>> = rs.roots().iter().cloned().collect();
        prop_assert_eq!(&roots, &oracle);
        prop_assert_eq!(rs.p(), oracle.len());
        // any greedy choice yields a reduced word with the same root set
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let word = longest_word_by(&cartan, |adm| adm[rng.gen_range(0..adm.len())]);
        let other = RootSystem::with_word(cartan, word).unwrap();
        let other_roots: BTreeSet<Vec<i64>> = other.roots().iter().cloned().collect();
        prop_assert_eq!(other_roots, oracle);
    }

    #[test]
    fn pbw_order_is_total(a in prop::collection::vec(0i64..4, 4), b in prop::collection::vec(0i64..4, 4),
                          c in prop::collection::vec(0i64..4, 4)) {
        let rs = RootSystem::new(CartanMatrix::named("A2xA1").unwrap());
        let (a, b, c) = (PbwDegree::new(&rs, &a).unwrap(), PbwDegree::new(&rs, &b).unwrap(), PbwDegree::new(&rs, &c).unwrap());
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        prop_assert_eq!(a == b, a.cmp(&b).is_eq());
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
        if a.total < b.total {
            prop_assert!(a < b);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_data_satisfy_the_invariants(idx in 0..TYPES.len(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = random_datum(&mut rng, TYPES[idx]);
        prop_assert_eq!(parse_datum(&write_datum(&raw)).unwrap(), raw.clone());
        let d = GenericDatum::new(raw).unwrap();
        let rs = d.root_system();
        prop_assert!(coeff_identity_check(&d, &rs));
        prop_assert!(cy_relation_check(&d, &rs).holds());
        for i in 0..d.theta() {
            prop_assert!(!d.braiding(i, i).is_root_of_unity());
        }
    }

    #[test]
    fn transport_preserves_verdicts(idx in 0..TYPES.len(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = GenericDatum::new(random_datum(&mut rng, TYPES[idx])).unwrap();
        let m = random_unimodular(&mut rng, d.group_rank());
        let sigma = random_permutation(&mut rng, d.theta());
        let (moved, iso) = transport(&d, &m, &sigma).unwrap();
        prop_assert!(iso.verify(&d, &moved));
        let back = iso.inverse().unwrap();
        prop_assert!(back.verify(&moved, &d));
        prop_assert_eq!(is_cy_pointed(&d, &d.root_system()).is_cy, is_cy_pointed(&moved, &moved.root_system()).is_cy);
    }

    #[test]
    fn canonical_forms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = GenericDatum::new(random_cy_family(&mut rng)).unwrap();
        let (c, iso) = canonicalize_group_data(&d).unwrap();
        prop_assert!(iso.verify(&d, &c));
        prop_assert!(c.g(0)[0] > 0 && c.g(0)[1..].iter().all(|&x| x == 0));
        if c.group_rank() == 2 {
            let (l1, l2) = (c.g(1)[0], c.g(1)[1]);
            prop_assert!(l2 >= 0 && (l2 == 0 || (0..l2).contains(&l1)));
        }
        let again = canonicalize_group_data(&c).unwrap().0;
        prop_assert_eq!(again, c);
    }

    #[test]
    fn labels_are_isomorphism_invariants(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = GenericDatum::new(random_cy_family(&mut rng)).unwrap();
        let rs = d.root_system();
        let Classification::Label { label } = classify(&d, &rs).unwrap() else {
            return Err(TestCaseError::fail("family member without a label"));
        };
        let m = random_unimodular(&mut rng, d.group_rank());
        let (moved, _) = transport(&d, &m, &random_permutation(&mut rng, 2)).unwrap();
        let Classification::Label { label: other } = classify(&moved, &moved.root_system()).unwrap() else {
            return Err(TestCaseError::fail("moved member without a label"));
        };
        prop_assert_eq!(&label, &other);
        let rep = GenericDatum::new(representative(&label).unwrap()).unwrap();
        let Classification::Label { label: again } = classify(&rep, &rep.root_system()).unwrap() else {
            return Err(TestCaseError::fail("representative without a label"));
        };
        prop_assert_eq!(label, again);
    }
}
