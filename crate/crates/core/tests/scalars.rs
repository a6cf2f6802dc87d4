use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use recouple_core::scalars::{LaurentPoly, RationalFn};
use recouple_core::{constants, Scalar};

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i64..=3, -4i64..=4), 0..4).prop_map(LaurentPoly::from_terms)
}

fn nonzero_laurent() -> impl Strategy<Value = LaurentPoly> {
    laurent().prop_filter("nonzero", |p| !p.is_zero())
}

fn rational() -> impl Strategy<Value = RationalFn> {
    (laurent(), nonzero_laurent()).prop_map(|(n, d)| RationalFn::new(n, d))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (rational(), rational()).prop_map(|(p, q)| Scalar::new(p, q))
}

/// `d` and `Δ` evaluated from their definitions, away from the library.
fn loop_at(a: Complex64) -> (Complex64, Complex64) {
    let d = -a * a - 1.0 / (a * a);
    (d, d * d - 1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_laws(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a);
    }

    #[test]
    fn rational_functions_are_canonical(n in laurent(), d in nonzero_laurent(), k in nonzero_laurent()) {
        let x = RationalFn::new(n.clone(), d.clone());
        let scaled = RationalFn::new(&n * &k, &d * &k);
        prop_assert_eq!(&x, &scaled);
        prop_assert_eq!(&(&x * &RationalFn::from_laurent(d)), &RationalFn::from_laurent(n));
    }

    #[test]
    fn scalars_form_a_field(x in scalar(), y in scalar()) {
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inv().unwrap(), Scalar::one());
            prop_assert_eq!(&(&y / &x) * &x, y.clone());
        }
        prop_assert_eq!((&x * &y).norm(), &x.norm() * &y.norm());
    }

    #[test]
    fn json_round_trips(x in scalar()) {
        prop_assert_eq!(Scalar::from_json(&x.to_json()).unwrap(), x);
    }

    #[test]
    fn complex_evaluation_is_a_homomorphism(x in scalar(), y in scalar(), t in 0.1f64..1.4) {
        let a = Complex64::from_polar(1.1, t);
        let (Ok(ex), Ok(ey), Ok(exy)) = (x.eval(a), y.eval(a), (&x * &y).eval(a)) else {
            return Ok(());
        };
        prop_assert!((ex * ey - exy).norm() <= 1e-6 * (1.0 + exy.norm()));
    }

    #[test]
    fn rational_evaluation_matches_complex(p in laurent(), num in 1i64..9, den in 1i64..9) {
        let a = BigRational::new(num.into(), den.into());
        let exact = p.eval_rational(&a);
        let float = p.eval(Complex64::new(num as f64 / den as f64, 0.0));
        let exact = exact.to_f64().unwrap();
        prop_assert!((exact - float.re).abs() <= 1e-9 * (1.0 + exact.abs()));
    }
}

#[test]
fn loop_value_and_projected_loop_at_sample_points() {
    let k = constants();
    for t in [0.3, 1.0, 2.2] {
        let a = Complex64::from_polar(0.9, t);
        let (d, delta) = loop_at(a);
        assert!((k.d.eval(a).unwrap() - d).norm() < 1e-9);
        assert!((k.delta.eval(a).unwrap() - delta).norm() < 1e-9);
        assert!((Scalar::sqrt_delta().eval(a).unwrap().powi(2) - delta).norm() < 1e-9);
    }
}

#[test]
fn display_is_readable() {
    assert_eq!(constants().d.to_string(), "-A^2 - A^-2");
    assert_eq!(Scalar::from_int(3).to_string(), "3");
}

#[test]
fn spot_values_at_a_equal_one() {
    let one = BigRational::from_integer(1.into());
    let k = constants();
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let zero = q(0, 1);
    assert_eq!(k.d.eval_parts_rational(&one).unwrap(), (q(-2, 1), zero.clone()));
    assert_eq!(k.delta.eval_parts_rational(&one).unwrap(), (q(3, 1), zero.clone()));
    assert_eq!(k.theta.eval_parts_rational(&one).unwrap(), (q(-3, 1), zero.clone()));
    assert_eq!(k.tet.eval_parts_rational(&one).unwrap(), (q(27, 2), zero.clone()));
    assert_eq!(k.c2.eval_parts_rational(&one).unwrap(), (q(8, 9), zero));
}
