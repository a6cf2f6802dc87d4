use num_bigint::BigInt;
use proptest::prelude::*;

use recouple_core::braidrep::{
    bracket_closure, check_relations, classical_rep_matrix, BraidWord, Letter, SectorAction,
};
use recouple_core::sampling;
use recouple_core::trees::{ParticleLabel, RootSector};
use recouple_core::{constants, Scalar};

fn word(s: &str) -> BraidWord {
    s.parse().unwrap()
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

/// Closure of `s1^m` on two strands, from `s = A + A^-1 e` and `e^k = d^(k-1) e`.
fn two_strand_torus(m: i32) -> Scalar {
    let d = constants().d;
    let (a, sign) = if m >= 0 { (1, 1) } else { (-1, -1) };
    let m = m.unsigned_abs();
    let mut total = &Scalar::monomial(1, a * m as i64) * &d.pow(2);
    for k in 1..=m {
        let exp = sign * (m as i64 - 2 * k as i64);
        total += &Scalar::monomial(binomial(m, k), exp) * &d.pow(k as i32);
    }
    total
}

#[test]
fn bracket_of_small_closures() {
    let d = constants().d;
    for n in 1..5 {
        assert_eq!(bracket_closure(&BraidWord::identity(n)), d.pow(n as i32));
    }
    assert_eq!(bracket_closure(&word("n=2; s1")), &-Scalar::monomial(1, 3) * &d);
    assert_eq!(
        bracket_closure(&word("n=2; s1 s1")),
        &d * &(&-Scalar::monomial(1, 4) - &Scalar::monomial(1, -4))
    );
    assert_eq!(bracket_closure(&word("n=2; v1")), d);
    for m in -4i32..=5 {
        let w = BraidWord::new(
            2,
            vec![if m >= 0 { Letter::sigma(1) } else { Letter::sigma_inv(1) }; m.unsigned_abs() as usize],
        )
        .unwrap();
        assert_eq!(bracket_closure(&w), two_strand_torus(m), "s1^{m}");
    }
}

#[test]
fn bracket_is_a_markov_trace_up_to_a_twist() {
    let w = word("n=2; s1 s1 s1");
    let stabilized = word("n=3; s1 s1 s1 s2");
    assert_eq!(
        bracket_closure(&stabilized),
        &-Scalar::monomial(1, 3) * &bracket_closure(&w)
    );
    let virtual_stab = word("n=3; s1 s1 s1 v2");
    assert_eq!(bracket_closure(&virtual_stab), bracket_closure(&w));
}

#[test]
fn two_strand_generator_eigenvalues() {
    let p = classical_rep_matrix(&word("n=2; s1"), 2, ParticleLabel::P).unwrap();
    let star = classical_rep_matrix(&word("n=2; s1"), 2, ParticleLabel::Star).unwrap();
    assert_eq!(p.entries[0][0], -Scalar::monomial(1, -4));
    assert_eq!(star.entries[0][0], Scalar::monomial(1, -8));
    let inv = classical_rep_matrix(&word("n=2; s1^-1"), 2, ParticleLabel::P).unwrap();
    assert!(inv.mul(&p).unwrap().is_identity());
}

#[test]
fn two_strand_relations_hold() {
    let checks = check_relations(2).unwrap();
    assert_eq!(checks.len(), 4);
    assert!(checks.iter().all(|c| c.holds && c.witness.is_none()));
}

#[test]
fn three_strand_relations() {
    let checks = check_relations(3).unwrap();
    assert_eq!(checks.len(), 14);
    for c in &checks {
        assert_eq!(c.holds, c.witness.is_none(), "{}", c.relation);
        if c.exact {
            assert!(c.holds, "exact relation {} fails", c.relation);
        }
    }
    assert_eq!(checks.iter().filter(|c| c.holds).count(), 9);
}

#[test]
fn relation_check_rejects_unsupported_sizes() {
    assert!(check_relations(1).is_err());
    assert!(check_relations(6).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn interpolation_agrees_with_symbolic_comparison(seed in any::<u64>(), n in 2usize..=3, cable in any::<bool>()) {
        let mut rng = sampling::rng(seed);
        let lhs = sampling::letters(&mut rng, n, 3);
        let rhs = if seed % 3 == 0 { lhs.clone() } else { sampling::letters(&mut rng, n, 3) };
        let sector = if cable { RootSector::Cable } else { RootSector::Vacuum };
        let mut action = SectorAction::extended(n, sector)?;
        let fast = action.letters_difference(&lhs, &rhs)?;
        let x = action.letters_matrix(&lhs)?;
        let y = action.letters_matrix(&rhs)?;
        let slow = action.first_symbolic_difference(&x, &y)?;
        prop_assert_eq!(fast.is_some(), slow.is_some());
    }
}
