//! The named recoupling constants.

use super::{delta_poly, loop_poly, Scalar};

/// Loop and network evaluations together with the F-matrix entries and the
/// four coefficients of the left association of a tree with a `~P` edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedConstants {
    /// Loop value `-A^2 - A^-2`.
    pub d: Scalar,
    /// Projected loop `d^2 - 1`.
    pub delta: Scalar,
    /// Theta network `(d^2 - 1)(d^2 - 2)/d`.
    pub theta: Scalar,
    /// Tetrahedral network `2 (d^2 - 1)^2 (d^2 - 2) Theta / d^3`.
    pub tet: Scalar,
    pub a: Scalar,
    pub b: Scalar,
    pub g: Scalar,
    pub h: Scalar,
    pub c1: Scalar,
    pub c2: Scalar,
    pub c3: Scalar,
    pub c4: Scalar,
}

impl NamedConstants {
    /// `(name, value)` pairs in declaration order.
    pub fn entries(&self) -> Vec<(&'static str, &Scalar)> {
        vec![
            ("d", &self.d),
            ("Delta", &self.delta),
            ("Theta", &self.theta),
            ("T", &self.tet),
            ("a", &self.a),
            ("b", &self.b),
            ("g", &self.g),
            ("h", &self.h),
            ("c1", &self.c1),
            ("c2", &self.c2),
            ("c3", &self.c3),
            ("c4", &self.c4),
        ]
    }
}

pub fn constants() -> NamedConstants {
    let one = Scalar::one();
    let two = Scalar::from_int(2);
    let d = Scalar::from_laurent(loop_poly());
    let d2 = &d * &d;
    let delta = Scalar::from_laurent(delta_poly());
    debug_assert_eq!(delta, &d2 - &one);
    let theta = &(&delta * &(&d2 - &two)) / &d;
    let tet = &(&(&(&two * &delta) * &delta) * &(&(&d2 - &two) * &theta)) / &(&d2 * &d);

    let a = delta.inv().expect("Delta is nonzero");
    let b = Scalar::sqrt_delta().inv().expect("sqrt(Delta) is nonzero");
    let g = b.clone();
    let h = -&a;

    let h2 = &h * &h;
    let h3 = &h2 * &h;
    let d_minus_1 = &d - &one;
    let c1 = &h3 - &(&(&d * &g) * &h);
    let c2 = &d_minus_1 * &(&h - &h3);
    let c3 = &(&h2 * &g) - &(&d * &(&g * &g));
    let c4 = &d_minus_1 * &(&g - &(&g * &h2));

    NamedConstants {
        d,
        delta,
        theta,
        tet,
        a,
        b,
        g,
        h,
        c1,
        c2,
        c3,
        c4,
    }
}
