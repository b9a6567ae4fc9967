use cobord_core::charclass::{
    ah_obstruction, euler_identity_check, restrict_rep, ObstructionStatus, Orientation, RepTag,
};
use cobord_core::steenrod::{
    bso4_ring, extraspecial_ring, freeness_check, random_element, torsion_shift_check, SqAlgebra,
};
use cobord_core::MGPoly;
use proptest::prelude::*;
use rand::SeedableRng;
use std::sync::OnceLock;

fn extraspecial() -> &'static SqAlgebra {
    static RING: OnceLock<SqAlgebra> = OnceLock::new();
    RING.get_or_init(|| extraspecial_ring(10).unwrap())
}

#[test]
fn sq3_of_w4_in_bso4() {
    let a = bso4_ring(8).unwrap();
    let w4 = a.parse("w4").unwrap();
    assert_eq!(a.display(&a.sq(3, &w4).unwrap()), "w3*w4");
    assert!(a.sq(3, &a.parse("w2^2").unwrap()).unwrap().is_zero());
}

#[test]
fn extraspecial_ring_is_free_over_the_image_of_bso4() {
    let a = extraspecial();
    let s = a.structure.clone().unwrap();
    let r = freeness_check(a, &[s.w2.clone(), s.w3.clone(), s.w4.clone()], 8).unwrap();
    assert!(r.passed, "{r:?}");
    let bad = a.with_extra_relation(a.parse("w4*x1").unwrap()).unwrap();
    assert!(!freeness_check(&bad, &[s.w2, s.w3, s.w4], 8).unwrap().passed);
}

#[test]
fn torsion_shift_and_its_control() {
    let a = extraspecial();
    assert!(torsion_shift_check(a).unwrap().passed);
    let broken = a.with_square("w4", 3, MGPoly::zero()).unwrap();
    let r = torsion_shift_check(&broken).unwrap();
    assert!(!r.passed);
    assert_eq!(r.witness.as_deref(), Some("0"));
}

#[test]
fn euler_identity_under_default_orientation() {
    let r = euler_identity_check(Orientation::default());
    assert!(r.passed());
    assert_eq!(r.difference, "-2*a^2 + 2*b^2");
    let flipped = euler_identity_check(Orientation::POSITIVE);
    assert!(flipped.squared_holds && flipped.c1_vanishes);
    assert!(!flipped.identity_holds);
}

#[test]
fn obstruction_of_euler_reduction() {
    let a = bso4_ring(8).unwrap();
    let o = ah_obstruction(&a.parse("w4").unwrap(), &a).unwrap();
    assert_eq!(o.status, ObstructionStatus::Obstructed);
    let zero = ah_obstruction(&MGPoly::zero(), &a).unwrap();
    assert_eq!(zero.status, ObstructionStatus::Undecided);
}

#[test]
fn representations_are_sign_closed() {
    for tag in [RepTag::A, RepTag::B, RepTag::Trivial] {
        let r = restrict_rep(tag);
        assert!(r.is_sign_closed());
        assert!(r.chern(1).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn total_square_is_multiplicative(seed in any::<u64>(), df in 1u32..=4, dg in 1u32..=4) {
        let a = extraspecial();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = random_element(a, df, &mut rng).unwrap();
        let g = random_element(a, dg, &mut rng).unwrap();
        let fg = a.reduce(&(&f * &g)).unwrap();
        for k in 0..=(a.bound() - df - dg) {
            let mut rhs = MGPoly::zero();
            for i in 0..=k {
                rhs = rhs + &a.sq(i, &f).unwrap() * &a.sq(k - i, &g).unwrap();
            }
            prop_assert_eq!(a.sq(k, &fg).unwrap(), a.reduce(&rhs).unwrap());
        }
    }

    #[test]
    fn squares_are_unstable(seed in any::<u64>(), d in 1u32..=4) {
        let a = extraspecial();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = random_element(a, d, &mut rng).unwrap();
        prop_assert!(a.sq(d + 1, &f).unwrap().is_zero());
        prop_assert_eq!(a.sq(d, &f).unwrap(), a.reduce(&(&f * &f)).unwrap());
    }

    #[test]
    fn reduction_keeps_weights(seed in any::<u64>(), df in 1u32..=4, dg in 1u32..=4) {
        let a = extraspecial();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = random_element(a, df, &mut rng).unwrap();
        let g = random_element(a, dg, &mut rng).unwrap();
        let raw = &f * &g;
        let mut total = MGPoly::zero();
        for weight in 0..=2 {
            let part = raw.filter_terms(|m| a.monomial_weight(m) == weight);
            let reduced = a.reduce(&part).unwrap();
            for (m, _) in reduced.terms() {
                prop_assert_eq!(a.monomial_weight(m), weight);
            }
            total = total + reduced;
        }
        prop_assert_eq!(total, a.reduce(&raw).unwrap());
    }
}
