use cobord_core::bp::BpRing;
use cobord_core::fgl::{
    check_formal_sum, check_logarithm, check_round_trip, resolution_exactness_check,
    skeleton_presentation, two_series, two_series_data,
};
use cobord_core::gmod::tensor_unit;
use cobord_core::lattice::AbGroup;
use proptest::prelude::*;

fn ring() -> BpRing {
    BpRing::new(4).unwrap()
}

// Frozen from a run that passed all three self-consistency checks at bound 16.
const GOLDEN: [&str; 12] = [
    "-58/7*v1^4 + 30/7*v1*v2",
    "-300/7*v1^5 + 111/7*v1^2*v2",
    "-892/7*v1^6 + 246/7*v1^3*v2 + 16/7*v2^2",
    "v3",
    "1274326/889*v1^8 - 387152/889*v1^5*v2 - 6826/889*v1^2*v2^2 + 766/127*v1*v3",
    "56487128/6223*v1^9 - 16105473/6223*v1^6*v2 - 715627/6223*v1^3*v2^2 + 3579/127*v1^2*v3 + 340/49*v2^3",
    "208734072/6223*v1^10 - 7063398/889*v1^7*v2 - 4537914/6223*v1^4*v2^2 + 79462/889*v1^3*v3 - 207548/6223*v1*v2^3 + 5616/889*v2*v3",
    "3650080828/43561*v1^11 - 332110358/43561*v1^8*v2 - 184881537/43561*v1^5*v2^2 + 162777/889*v1^4*v3 - 22555703/43561*v1^2*v2^3 + 55329/889*v1*v2*v3",
    "2736522548/43561*v1^12 + 3809567112/43561*v1^9*v2 - 903326836/43561*v1^6*v2^2 - 76294/889*v1^5*v3 - 25601502/6223*v1^3*v2^3 + 363210/889*v1^2*v2*v3 + 8324/343*v2^4",
    "-29205949256/43561*v1^13 + 29876307974/43561*v1^10*v2 - 466125031/6223*v1^7*v2^2 - 17852922/6223*v1^6*v3 - 975930769/43561*v1^4*v2^3 + 11952023/6223*v1^3*v2*v3 - 10584174/43561*v1*v2^4 + 212440/6223*v2^2*v3",
    "-1341942301620/304927*v1^14 + 916220015944/304927*v1^11*v2 - 52062415842/304927*v1^8*v2^2 - 86901580/6223*v1^7*v3 - 28747708162/304927*v1^5*v2^3 + 40357694/6223*v1^4*v2*v3 - 1090218056/304927*v1^2*v2^4 + 1989656/6223*v1*v2^2*v3 + 512/127*v3^2",
    "v4",
];

#[test]
fn leading_coefficients() {
    let s = two_series(4, ring()).unwrap();
    assert_eq!(s.to_text(), "2*c1 + v1*c1^2 + 2*v1^2*c1^3 + v2*c1^4");
}

#[test]
fn frozen_coefficients_through_sixteen() {
    let data = two_series_data(16, ring()).unwrap();
    for (idx, expect) in GOLDEN.iter().enumerate() {
        let j = idx + 5;
        assert_eq!(ring().display(&data.series.coeff(j)), *expect, "c1^{j}");
    }
    assert!(data.series.degrees_ok());
    assert!(check_formal_sum(&data).passed());
    assert!(check_logarithm(&data).passed());
    assert!(check_round_trip(&data).passed());
}

#[test]
fn skeleta_resolve_and_y8_matches_integral_cohomology() {
    for n in 1..=4 {
        let r = resolution_exactness_check(n, (-30, 10), ring()).unwrap();
        assert!(r.is_exact(), "n={n}: {r:?}");
    }
    let y8 = skeleton_presentation(4, &two_series(4, ring()).unwrap()).unwrap();
    let t = tensor_unit(&y8, (-4, 10)).unwrap();
    let expect = vec![
        (0, AbGroup::free(1)),
        (2, AbGroup::elementary(1)),
        (4, AbGroup::elementary(1)),
        (6, AbGroup::elementary(1)),
        (8, AbGroup::elementary(1)),
    ];
    assert_eq!(t.nonzero(), expect);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn truncations_agree_and_are_homogeneous(bound in 1usize..=16, lower in 1usize..=16) {
        let lower = lower.min(bound);
        let big = two_series(bound, ring()).unwrap();
        let small = two_series(lower, ring()).unwrap();
        prop_assert!(big.degrees_ok());
        for j in 1..=lower {
            prop_assert_eq!(big.coeff(j), small.coeff(j));
        }
    }
}
