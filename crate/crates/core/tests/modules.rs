use cobord_core::bp::BpRing;
use cobord_core::fgl::{skeleton_presentation, two_series, FPModule};
use cobord_core::gmod::{
    free_ranks, kunneth_pieces, random_fp_module, realize, tensor_mod2, tensor_unit,
    tor1_bruteforce, tor1_via_resolution, tor_tuple_degrees, tor_tuples,
};
use proptest::prelude::*;
use rand::SeedableRng;

fn ring() -> BpRing {
    BpRing::new(4).unwrap()
}

#[test]
fn tor_of_y2_against_y8_in_tuple_degrees() {
    let s = two_series(8, ring()).unwrap();
    let y2 = skeleton_presentation(1, &s).unwrap();
    let space = tor_tuples(&y2, &s, 4, 8).unwrap();
    assert_eq!(space.component_degrees, tor_tuple_degrees(4, 8));
    for g in &space.gens {
        assert_eq!(g.len(), 4);
    }
    let a = tor1_via_resolution(&y2, &s, 4, (-12, 10)).unwrap();
    let b = tor1_bruteforce(&y2, &skeleton_presentation(4, &s).unwrap(), (-12, 10)).unwrap();
    assert!(a.same_invariants(&b));
}

#[test]
fn tensor_of_free_modules_is_the_product_of_hilbert_functions() {
    let s = two_series(4, ring()).unwrap();
    let free = FPModule::free(vec![0, 4], 4);
    let p = kunneth_pieces(&free, &s, 0, (-10, 6)).unwrap();
    assert!(p.associated_graded_only);
    for d in -10..=6 {
        let g = p.tensor.get(d).unwrap();
        assert_eq!(g.free_rank, free_ranks(&[0, 4], d, ring()).unwrap());
        assert!(g.torsion.is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn tor_oracles_agree_on_random_modules(seed in 0u64..1000, n in 1usize..=3) {
        let s = two_series(8, ring()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m = random_fp_module(&mut rng, 4);
        let y = skeleton_presentation(n, &s).unwrap();
        let a = tor1_via_resolution(&m, &s, n, (-10, 8)).unwrap();
        let b = tor1_bruteforce(&m, &y, (-10, 8)).unwrap();
        let c = tor1_bruteforce(&y, &m, (-10, 8)).unwrap();
        prop_assert!(a.same_invariants(&b), "{:?}\n{}\n{}", m, a, b);
        prop_assert!(a.same_invariants(&c));
    }

    #[test]
    fn constant_tensors_vanish_off_generator_degrees(seed in 0u64..1000) {
        // Away from generator degrees the module is spanned by v-multiples,
        // which die after tensoring with Z_(2) or Z/2.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m = random_fp_module(&mut rng, 4);
        let window = (-8, 6);
        let unit = tensor_unit(&m, window).unwrap();
        let mod2 = tensor_mod2(&m, window).unwrap();
        let real = realize(&m, window).unwrap();
        for d in window.0..=window.1 {
            if m.gen_degrees.contains(&d) {
                continue;
            }
            prop_assert!(unit.get(d).unwrap().is_zero(), "degree {} of {:?}", d, m);
            prop_assert!(mod2.get(d).unwrap().is_zero());
            let _ = real.get(d).unwrap();
        }
    }
}
