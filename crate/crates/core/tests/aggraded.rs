use cobord_core::ahss::{
    bg_cohomology_input, build_einfty, lemma64_decide, lemma64_rank_sweep, prop_chain_report,
    vi_injectivity_report, wilson_bound, ChainInputs, CohomologyInput, IntegralGroup,
};
use cobord_core::bp::BpRing;
use cobord_core::charclass::{euler_identity_check, Orientation};
use cobord_core::fgl::{two_series, CSeries};
use cobord_core::gmod::tensor_unit;
use cobord_core::lattice::AbGroup;
use cobord_core::steenrod::{extraspecial_ring, torsion_shift_check, SqAlgebra};
use cobord_core::trace::{validate_trace, AxiomSet, Status, Verdict};
use cobord_core::MGPoly;
use proptest::prelude::*;
use std::sync::OnceLock;

const WINDOW: (i64, i64) = (-8, 8);

fn ring() -> BpRing {
    BpRing::new(4).unwrap()
}

fn series() -> CSeries {
    two_series(8, ring()).unwrap()
}

fn extraspecial() -> &'static SqAlgebra {
    static RING: OnceLock<SqAlgebra> = OnceLock::new();
    RING.get_or_init(|| extraspecial_ring(10).unwrap())
}

fn chain(a: &SqAlgebra, axioms: AxiomSet) -> (Verdict, Verdict) {
    let input = bg_cohomology_input(a, axioms, 0).unwrap();
    let model = build_einfty(&input, WINDOW, ring()).unwrap();
    let lemma = lemma64_decide(&model, &series()).unwrap();
    let ts = torsion_shift_check(a).unwrap();
    let inputs = ChainInputs {
        model: &model,
        torsion_shift_passed: ts.passed,
        torsion_shift_detail: ts.to_string(),
        tor_oracles_agree: true,
        euler_identity_passed: euler_identity_check(Orientation::default()).passed(),
        lemma64: &lemma,
        y2_degree2: AbGroup::elementary(1),
    };
    prop_chain_report(&inputs).unwrap()
}

#[test]
fn rank_sweep_with_both_axioms() {
    let sweep =
        lemma64_rank_sweep(extraspecial(), AxiomSet::ALL, 4, WINDOW, ring(), &series()).unwrap();
    assert_eq!(sweep.len(), 5);
    for (r, v) in sweep {
        assert_eq!(v.status, Status::ForcedZero, "rank {r}\n{}", v.render());
        validate_trace(&v.trace).unwrap();
    }
}

#[test]
fn ablation_and_monotonicity() {
    let s = series();
    let mut verdicts = Vec::new();
    for axioms in AxiomSet::subsets() {
        let input = bg_cohomology_input(extraspecial(), axioms, 1).unwrap();
        let model = build_einfty(&input, WINDOW, ring()).unwrap();
        let v = lemma64_decide(&model, &s).unwrap();
        if !axioms.h7_no_4torsion {
            assert_eq!(v.status, Status::NotForced);
            assert_eq!(v.failed_stage, Some(3));
            assert!(v.witness.is_some());
        }
        verdicts.push((axioms, v.status));
    }
    for (small, s1) in &verdicts {
        for (big, s2) in &verdicts {
            if big.includes(small) && *s1 == Status::ForcedZero {
                assert_eq!(*s2, Status::ForcedZero, "{small} -> {big}");
            }
        }
    }
}

#[test]
fn bockstein_data_agrees_with_the_axioms() {
    let input = bg_cohomology_input(extraspecial(), AxiomSet::NONE, 0).unwrap();
    assert!(
        input.axiom_consistency.iter().all(|(_, ok)| *ok),
        "{:?}",
        input.axiom_consistency
    );
    let e2: Vec<usize> = input.bockstein.iter().map(|r| r.e2).collect();
    assert_eq!(e2, vec![1, 0, 0, 1, 1, 0, 0, 1]);
}

#[test]
fn proposition_chain_on_the_extraspecial_group() {
    let (p1, p2) = chain(extraspecial(), AxiomSet::ALL);
    assert_eq!(p1.status, Status::Nonzero, "{}", p1.render());
    assert_eq!(p2.status, Status::Nonzero, "{}", p2.render());
    validate_trace(&p1.trace).unwrap();
    validate_trace(&p2.trace).unwrap();
}

#[test]
fn mutated_sq3_makes_the_chain_undecided() {
    let broken = extraspecial().with_square("w4", 3, MGPoly::zero()).unwrap();
    let (p1, p2) = chain(&broken, AxiomSet::ALL);
    for v in [p1, p2] {
        assert_eq!(v.status, Status::Undecided);
        assert_eq!(v.dependency.as_deref(), Some("steenrod"));
    }
}

#[test]
fn torsion_free_input_has_no_obstruction() {
    let input = CohomologyInput::torsion_free([1, 0, 1, 0, 2, 0, 1, 1]);
    let model = build_einfty(&input, WINDOW, ring()).unwrap();
    let lemma = lemma64_decide(&model, &series()).unwrap();
    let inputs = ChainInputs {
        model: &model,
        torsion_shift_passed: true,
        torsion_shift_detail: String::new(),
        tor_oracles_agree: true,
        euler_identity_passed: true,
        lemma64: &lemma,
        y2_degree2: AbGroup::elementary(1),
    };
    let (p1, p2) = prop_chain_report(&inputs).unwrap();
    assert_eq!(p1.status, Status::NoObstruction);
    assert_eq!(p2.status, Status::NoObstruction);
}

#[test]
fn vacuous_when_h7_vanishes() {
    let mut groups = vec![IntegralGroup::zero(); 8];
    groups[0] = IntegralGroup::free(1);
    let sq3 = (0..=4)
        .map(|s| cobord_core::ZMat::zeros(groups[s + 3].ngens(), groups[s].ngens()))
        .collect();
    let input = CohomologyInput::new("H^7 = 0", groups, sq3, AxiomSet::NONE).unwrap();
    let model = build_einfty(&input, WINDOW, ring()).unwrap();
    assert_eq!(
        lemma64_decide(&model, &series()).unwrap().status,
        Status::ForcedZero
    );
}

#[test]
fn wilson_examples() {
    assert!(wilson_bound(6, 1, 2));
    assert!(!wilson_bound(8, 1, 2));
    assert!(wilson_bound(0, 0, 2));
    assert!(wilson_bound(14, 2, 2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn zero_sq3_gives_cellwise_tensor_product(ranks in proptest::array::uniform8(0usize..3)) {
        let input = CohomologyInput::torsion_free(ranks);
        let model = build_einfty(&input, WINDOW, ring()).unwrap();
        for c in &model.cells {
            prop_assert_eq!(&c.group, &AbGroup::free(ranks[c.filtration as usize]));
        }
        let rep = vi_injectivity_report(&model).unwrap();
        prop_assert!(rep.passed);
        prop_assert!(rep.v1_noninjective.is_empty());
    }

    #[test]
    fn elementary_groups_with_zero_sq3(counts in proptest::array::uniform8(0usize..3)) {
        let groups: Vec<IntegralGroup> = counts.iter().map(|&c| IntegralGroup::elementary(c)).collect();
        let sq3 = (0..=4).map(|s| cobord_core::ZMat::zeros(groups[s + 3].ngens(), groups[s].ngens())).collect();
        let input = CohomologyInput::new("elementary", groups, sq3, AxiomSet::ALL).unwrap();
        let model = build_einfty(&input, WINDOW, ring()).unwrap();
        for c in &model.cells {
            prop_assert_eq!(c.group.mod2_dim(), counts[c.filtration as usize]);
        }
        prop_assert!(vi_injectivity_report(&model).unwrap().passed);
    }
}

#[test]
fn exported_module_reduces_to_the_bottom_cells() {
    let input = bg_cohomology_input(extraspecial(), AxiomSet::ALL, 0).unwrap();
    let model = build_einfty(&input, WINDOW, ring()).unwrap();
    let m = model.as_fp_module().unwrap();
    assert_eq!(m.relations.len(), 146);
    let t = tensor_unit(&m, (0, 7)).unwrap();
    for s in 0..=7u32 {
        let bottom = model
            .cells
            .iter()
            .find(|c| c.filtration == s && c.total_degree == s as i64)
            .unwrap();
        assert_eq!(t.get(s as i64).unwrap(), &bottom.group, "degree {s}");
    }
}
