use proptest::prelude::*;

use recouple_core::diagrams::{crossing_at, projector2, CrossingSign, Diagram, DiagramSum};
use recouple_core::sampling;
use recouple_core::{constants, Scalar};

fn d() -> Scalar {
    constants().d
}

fn e(n: usize, i: usize) -> DiagramSum {
    Diagram::cupcap_at(n, i).into()
}

#[test]
fn temperley_lieb_relations() {
    let e1 = e(3, 0);
    let e2 = e(3, 1);
    assert_eq!(e1.compose(&e1).unwrap(), e1.scale(&d()));
    assert_eq!(e1.compose(&e2).unwrap().compose(&e1).unwrap(), e1);
    assert_eq!(e2.compose(&e1).unwrap().compose(&e2).unwrap(), e2);
}

#[test]
fn closure_counts_loops() {
    for n in 0..5 {
        assert_eq!(DiagramSum::identity(n).close().unwrap(), d().pow(n as i32));
    }
    assert_eq!(e(2, 0).close().unwrap(), d());
    let swap: DiagramSum = Diagram::transposition().into();
    assert_eq!(swap.close().unwrap(), d());
}

#[test]
fn projector_facts() {
    let p = projector2();
    let k = constants();
    assert_eq!(p.compose(&p).unwrap(), p);
    assert!(p.compose(&e(2, 0)).unwrap().is_zero());
    assert_eq!(p.close().unwrap(), k.delta);
    assert_eq!(p.mirror(), p);
}

#[test]
fn crossing_and_its_inverse_cancel() {
    let s = crossing_at(2, 0, CrossingSign::Positive);
    let t = crossing_at(2, 0, CrossingSign::Negative);
    assert_eq!(s.compose(&t).unwrap(), DiagramSum::identity(2));
}

#[test]
fn text_round_trip() {
    let x: Diagram = "2/4: 0-2, 1-5, 3-4".parse().unwrap();
    assert_eq!(x.to_string().parse::<Diagram>().unwrap(), x);
    assert!("2/2: 0-1".parse::<Diagram>().is_err());
}

#[test]
fn mismatched_boundaries_are_rejected() {
    assert!(e(2, 0).compose(&e(3, 0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let x = sampling::diagram_sum(&mut rng, 2, 4);
        let y = sampling::diagram_sum(&mut rng, 4, 2);
        let z = sampling::diagram_sum(&mut rng, 2, 4);
        prop_assert_eq!(x.compose(&y)?.compose(&z)?, x.compose(&y.compose(&z)?)?);
    }

    #[test]
    fn tensor_interchanges_with_composition(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let x = sampling::diagram_sum(&mut rng, 1, 3);
        let y = sampling::diagram_sum(&mut rng, 3, 1);
        let u = sampling::diagram_sum(&mut rng, 2, 2);
        let v = sampling::diagram_sum(&mut rng, 2, 0);
        prop_assert_eq!(
            x.tensor(&u).compose(&y.tensor(&v))?,
            x.compose(&y)?.tensor(&u.compose(&v)?)
        );
    }

    #[test]
    fn mirror_reverses_composition(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let x = sampling::diagram_sum(&mut rng, 3, 1);
        let y = sampling::diagram_sum(&mut rng, 1, 3);
        prop_assert_eq!(x.compose(&y)?.mirror(), y.mirror().compose(&x.mirror())?);
        prop_assert_eq!(x.mirror().mirror(), x);
    }

    #[test]
    fn pairing_is_symmetric(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let x = sampling::diagram_sum(&mut rng, 2, 2);
        let y = sampling::diagram_sum(&mut rng, 2, 2);
        prop_assert_eq!(x.pairing(&y)?, y.pairing(&x)?);
    }
}
