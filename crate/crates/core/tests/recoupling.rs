use proptest::prelude::*;

use recouple_core::braidrep::BraidWord;
use recouple_core::recoupling::certify::certify_all;
use recouple_core::recoupling::channels::World;
use recouple_core::recoupling::moves::{expand_vector, project_onto_left_combs};
use recouple_core::recoupling::{left_associate_detailed, Associator, VirtualBraidedTree};
use recouple_core::sampling;
use recouple_core::trees::{expand_unchecked, extended_basis, LabeledTree, RootSector, TreeShape};

fn tree(s: &str) -> LabeledTree {
    s.parse().unwrap()
}

#[test]
fn certificate_outcomes() {
    let got: Vec<_> = certify_all().into_iter().map(|c| (c.name, c.passed, c.cases)).collect();
    let want = [
        ("F (published matrix)", 2, 6),
        ("F forward then backward", 2, 2),
        ("F (oracle projection)", 110, 186),
        ("R (classical labels)", 10, 10),
        ("R (extended labels)", 32, 32),
        ("swap", 21, 21),
        ("swap involution", 102, 102),
        ("bubble", 43, 43),
        ("turnback", 2, 2),
        ("lemma 1 (published coefficients)", 0, 3),
        ("lemma 2 (virtual over classical)", 4, 4),
        ("lemma 3 (~P branch under a classical crossing)", 14, 14),
    ];
    assert_eq!(got, want);
}

#[test]
fn two_leaf_inputs_associate_exactly() {
    for w in ["n=2;", "n=2; s1", "n=2; s1^-1 v1", "n=2; v1 s1 s1"] {
        let braid: BraidWord = w.parse().unwrap();
        for input in VirtualBraidedTree::labelings(&braid, &TreeShape::left_comb(2)).unwrap() {
            let out = left_associate_detailed(&input);
            assert!(out.is_exact(), "{input}");
            assert_eq!(expand_vector(&out.vector).unwrap(), input.expand(), "{input}");
        }
    }
}

#[test]
fn identity_braid_on_a_left_comb_is_the_input() {
    let t = tree("((L:P L:P):* L:P):P");
    let input = VirtualBraidedTree::new(BraidWord::identity(3), t.clone()).unwrap();
    let out = left_associate_detailed(&input);
    assert!(out.is_exact());
    assert_eq!(out.vector.len(), 1);
    assert!(out.vector.coefficient(&t).is_one());
}

#[test]
fn projection_of_a_left_comb_is_exact() {
    for t in extended_basis(3, RootSector::Vacuum) {
        let p = project_onto_left_combs(&expand_unchecked(&t), 3, RootSector::Vacuum, World::Extended).unwrap();
        assert!(p.exact, "{t}");
        assert_eq!(p.vector.len(), 1, "{t}");
        assert!(p.vector.coefficient(&t).is_one(), "{t}");
    }
}

#[test]
fn mismatched_inputs_are_rejected() {
    let braid: BraidWord = "n=2; s1".parse().unwrap();
    assert!(VirtualBraidedTree::new(braid.clone(), tree("((L:P L:P):P L:P):P")).is_err());
    assert!(VirtualBraidedTree::new(braid, tree("(L:~P L:P):P")).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn cached_associator_matches_fresh_runs(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let mut shared = Associator::new();
        for _ in 0..3 {
            let input = sampling::virtual_braided_tree(&mut rng, 4, 3);
            let cached = shared.left_associate(&input);
            let fresh = left_associate_detailed(&input);
            prop_assert_eq!(&cached.vector, &fresh.vector);
            prop_assert_eq!(cached.is_exact(), fresh.is_exact());
            for (t, _) in cached.vector.iter() {
                prop_assert!(t.shape().is_left_comb());
            }
            if cached.is_exact() {
                prop_assert_eq!(expand_vector(&cached.vector)?, input.expand());
            }
        }
    }
}
