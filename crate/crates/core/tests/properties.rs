use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use eqiw::fitcalc::checks::{random_element, random_presentation};
use eqiw::fitcalc::{FiniteModule, IdealHandle};
use eqiw::grp::{AbGroup, TruncAlgebra, TruncElem};
use eqiw::harness::render;
use eqiw::iwasawa::interpolate::evaluate;
use eqiw::iwasawa::{interpolate_from_values, interpolation_nodes};
use eqiw::Verdict;

fn group(choice: u8) -> AbGroup {
    match choice % 4 {
        0 => AbGroup::cyclic(2),
        1 => AbGroup::cyclic(3),
        2 => AbGroup::new(vec![2, 2], None).unwrap(),
        _ => AbGroup::cyclic(6),
    }
}

fn verdict() -> impl Strategy<Value = Verdict> {
    prop_oneof![Just(Verdict::Pass), Just(Verdict::Fail), Just(Verdict::NotApplicable)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn truncated_ring_axioms(seed in any::<u64>(), choice in 0u8..4) {
        let alg = TruncAlgebra::series(3, 4, &group(choice), 3).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let (a, b, c) = (random_element(&mut rng, &alg, 9), random_element(&mut rng, &alg, 9), random_element(&mut rng, &alg, 9));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&TruncElem::one(&alg)), a.clone());
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn group_inversion_is_an_involutive_automorphism(seed in any::<u64>(), choice in 0u8..4) {
        let alg = TruncAlgebra::group_ring(5, 3, &group(choice)).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let (a, b) = (random_element(&mut rng, &alg, 20), random_element(&mut rng, &alg, 20));
        prop_assert_eq!(a.invert_group().invert_group(), a.clone());
        prop_assert_eq!(a.mul(&b).invert_group(), a.invert_group().mul(&b.invert_group()));
    }

    #[test]
    fn fitting_ideal_is_presentation_independent(seed in any::<u64>(), choice in 0u8..4) {
        let alg = TruncAlgebra::group_ring(3, 5, &group(choice)).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let pres = random_presentation(&mut rng, &alg, 3);
        let fit = pres.fitting_ideal().unwrap();
        let r = random_element(&mut rng, &alg, 5);
        prop_assert!(pres.pad_free_summand().fitting_ideal().unwrap().equals(&fit).unwrap());
        let weights: Vec<TruncElem> = (0..pres.relations()).map(|_| random_element(&mut rng, &alg, 3)).collect();
        prop_assert!(pres.add_redundant_relation(&weights).fitting_ideal().unwrap().equals(&fit).unwrap());
        if pres.relations() > 1 {
            prop_assert!(pres.add_column_multiple(0, 1, &r).fitting_ideal().unwrap().equals(&fit).unwrap());
            prop_assert!(pres.swap_columns(0, 1).fitting_ideal().unwrap().equals(&fit).unwrap());
        }
        if pres.generators() > 1 {
            prop_assert!(pres.add_row_multiple(1, 0, &r).fitting_ideal().unwrap().equals(&fit).unwrap());
        }
        let module = FiniteModule::from_presentation(&pres);
        prop_assert!(fit.is_subset_of(&module.annihilator().unwrap()).unwrap());
    }

    #[test]
    fn canonical_ideal_forms_agree_on_associates(seed in any::<u64>()) {
        let alg = TruncAlgebra::group_ring(3, 5, &AbGroup::cyclic(2)).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let x = random_element(&mut rng, &alg, 30);
        let unit = TruncElem::one(&alg).add(&random_element(&mut rng, &alg, 5).scale(3));
        let left = IdealHandle::principal(&x);
        let right = IdealHandle::principal(&x.mul(&unit));
        prop_assert!(left.equals(&right).unwrap());
        prop_assert_eq!(&left.to_json()["canonical_basis"], &right.to_json()["canonical_basis"]);
        prop_assert!(left.contains(&x).unwrap());
    }

    #[test]
    fn interpolation_recovers_polynomials(coeffs in proptest::collection::vec(-500i64..500, 1..6)) {
        let nodes = interpolation_nodes(&BigInt::from(4), &[1, 2, 3, 4, 5, 6]);
        let coeffs: Vec<BigRational> = coeffs.into_iter().map(|c| BigRational::from_integer(c.into())).collect();
        let values: Vec<BigRational> = nodes.iter().map(|x| evaluate(&coeffs, x)).collect();
        let result = interpolate_from_values(3, &nodes, &values, coeffs.len(), None).unwrap();
        prop_assert_eq!(result.coeffs, coeffs);
    }

    #[test]
    fn verdict_combination(verdicts in proptest::collection::vec(verdict(), 0..8)) {
        let combined = Verdict::combine(verdicts.iter().copied());
        if verdicts.contains(&Verdict::Fail) {
            prop_assert_eq!(combined, Verdict::Fail);
        } else if verdicts.is_empty() || verdicts.contains(&Verdict::Pass) {
            prop_assert_eq!(combined, Verdict::Pass);
        } else {
            prop_assert_eq!(combined, Verdict::NotApplicable);
        }
        prop_assert_eq!(Verdict::combine([combined, combined]), combined);
    }

    #[test]
    fn rendering_is_key_order_independent(pairs in proptest::collection::btree_map("[a-z]{1,6}", 0i64..1000, 0..8)) {
        let forward: serde_json::Map<String, serde_json::Value> = pairs.iter().map(|(k, v)| (k.clone(), (*v).into())).collect();
        let backward: serde_json::Map<String, serde_json::Value> = pairs.iter().rev().map(|(k, v)| (k.clone(), (*v).into())).collect();
        let text = render(&serde_json::Value::Object(forward));
        prop_assert_eq!(&text, &render(&serde_json::Value::Object(backward)));
        prop_assert!(text.ends_with('\n'));
    }
}
