//! Rational functions of `A` over the rationals, kept in a reduced canonical form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::laurent::{upoly, LaurentPoly};

/// `num / den` with both parts integral Laurent polynomials.
///
/// Canonical form:
/// - `den` is an ordinary polynomial with nonzero constant term (any power of
///   `A` lives in `num`), and that constant term is positive;
/// - `num` and `den` have no common polynomial factor;
/// - the integer content of `num` and `den` taken together is 1;
/// - zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFn {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Default for RationalFn {
    fn default() -> Self {
        Self::zero()
    }
}

impl RationalFn {
    pub fn zero() -> Self {
        RationalFn {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_laurent(LaurentPoly::one())
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        Self::from_laurent(LaurentPoly::constant(c))
    }

    pub fn from_laurent(num: LaurentPoly) -> Self {
        RationalFn {
            num,
            den: LaurentPoly::one(),
        }
    }

    /// Builds `num / den`, reducing to canonical form.
    ///
    /// Panics if `den` is zero; use [`RationalFn::checked_new`] otherwise.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Self {
        Self::checked_new(num, den).expect("zero denominator")
    }

    pub fn checked_new(num: LaurentPoly, den: LaurentPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::normalize(num, den))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value is a Laurent polynomial (denominator 1).
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    fn normalize(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        // Move every power of A out of the denominator.
        let num_shift = num.low() - den.low();
        let n: Vec<BigInt> = num.coeffs().to_vec();
        let d: Vec<BigInt> = den.coeffs().to_vec();

        let (mut n, mut d) = if d.len() == 1 {
            (n, d)
        } else {
            let g = upoly::gcd(&n, &d);
            if g.len() > 1 {
                (upoly::div_exact(&n, &g), upoly::div_exact(&d, &g))
            } else {
                (n, d)
            }
        };

        let content = upoly::content(&n).gcd(&upoly::content(&d));
        if !content.is_one() {
            n.iter_mut().for_each(|c| *c /= &content);
            d.iter_mut().for_each(|c| *c /= &content);
        }
        if d[0].is_negative() {
            n.iter_mut().for_each(|c| *c = -&*c);
            d.iter_mut().for_each(|c| *c = -&*c);
        }
        RationalFn {
            num: LaurentPoly::from_dense(num_shift, n),
            den: LaurentPoly::from_dense(0, d),
        }
    }

    /// Canonical form of a quotient already free of common factors.
    fn finish(num: LaurentPoly, den: LaurentPoly) -> Self {
        let shift = num.low() - den.low();
        let mut n = num.coeffs().to_vec();
        let mut d = den.coeffs().to_vec();
        let content = upoly::content(&n).gcd(&upoly::content(&d));
        if !content.is_one() {
            n.iter_mut().for_each(|c| *c /= &content);
            d.iter_mut().for_each(|c| *c /= &content);
        }
        if d[0].is_negative() {
            n.iter_mut().for_each(|c| *c = -&*c);
            d.iter_mut().for_each(|c| *c = -&*c);
        }
        RationalFn {
            num: LaurentPoly::from_dense(shift, n),
            den: LaurentPoly::from_dense(0, d),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::normalize(self.den.clone(), self.num.clone()))
        }
    }

    pub fn pow(&self, e: i32) -> Self {
        let base = if e < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        RationalFn {
            num: base.num.pow(e.unsigned_abs()),
            den: base.den.pow(e.unsigned_abs()),
        }
        .renormalized()
    }

    fn renormalized(self) -> Self {
        Self::normalize(self.num, self.den)
    }

    /// Evaluates at a complex `A`; `None` when the denominator vanishes there.
    pub fn eval(&self, a: Complex64) -> Option<Complex64> {
        let den = self.den.eval(a);
        let scale = self.den.abs_scale(a).max(1.0);
        if den.norm() <= 1e-13 * scale {
            return None;
        }
        Some(self.num.eval(a) / den).filter(|v| v.is_finite())
    }

    /// Exact evaluation at a rational `A`; `None` at a pole.
    pub fn eval_rational(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() && (self.num.low() < 0) {
            return None;
        }
        let den = self.den.eval_rational(a);
        if den.is_zero() {
            return None;
        }
        Some(self.num.eval_rational(a) / den)
    }
}

impl Add for &RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFn::from_laurent(&self.num + &rhs.num);
        }
        // Both operands are reduced, so only factors shared by the two
        // denominators can cancel.
        let g = poly_gcd(&self.den, &rhs.den);
        let (b, d) = (poly_div(&self.den, &g), poly_div(&rhs.den, &g));
        let t = &(&self.num * &d) + &(&rhs.num * &b);
        if t.is_zero() {
            return RationalFn::zero();
        }
        let g2 = poly_gcd(&t, &g);
        RationalFn::finish(poly_div(&t, &g2), &b * &poly_div(&rhs.den, &g2))
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        self + &(-rhs)
    }
}

impl Mul for &RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        if self.is_zero() || rhs.is_zero() {
            return RationalFn::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFn::from_laurent(&self.num * &rhs.num);
        }
        let g1 = poly_gcd(&self.num, &rhs.den);
        let g2 = poly_gcd(&rhs.num, &self.den);
        RationalFn::finish(
            &poly_div(&self.num, &g1) * &poly_div(&rhs.num, &g2),
            &poly_div(&self.den, &g2) * &poly_div(&rhs.den, &g1),
        )
    }
}

/// Gcd of the polynomial parts, ignoring powers of `A`.
fn poly_gcd(x: &LaurentPoly, y: &LaurentPoly) -> LaurentPoly {
    if x.coeffs().len() == 1 || y.coeffs().len() == 1 {
        return LaurentPoly::one();
    }
    LaurentPoly::from_dense(0, upoly::gcd(x.coeffs(), y.coeffs()))
}

/// Least common multiple of the primitive parts of two polynomials with
/// nonzero constant terms.
pub(crate) fn poly_lcm(x: &LaurentPoly, y: &LaurentPoly) -> LaurentPoly {
    let primitive = |p: &LaurentPoly| LaurentPoly::from_dense(p.low(), upoly::primitive(p.coeffs()));
    let (x, y) = (primitive(x), primitive(y));
    &x * &poly_div(&y, &poly_gcd(&x, &y))
}

/// Exact quotient by a primitive polynomial with nonzero constant term.
fn poly_div(x: &LaurentPoly, g: &LaurentPoly) -> LaurentPoly {
    if g.is_one() {
        return x.clone();
    }
    LaurentPoly::from_dense(x.low(), upoly::div_exact(x.coeffs(), g.coeffs()))
}

impl Div for &RationalFn {
    type Output = RationalFn;
    fn div(self, rhs: &RationalFn) -> RationalFn {
        self * &rhs.inv().expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for RationalFn {
            type Output = RationalFn;
            fn $method(self, rhs: RationalFn) -> RationalFn {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        -&self
    }
}

impl From<LaurentPoly> for RationalFn {
    fn from(p: LaurentPoly) -> Self {
        RationalFn::from_laurent(p)
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn reduces_common_factor() {
        // (A^2 - 1) / (A + 1) == A - 1
        let r = RationalFn::new(lp(&[(1, 2), (-1, 0)]), lp(&[(1, 1), (1, 0)]));
        assert_eq!(r, RationalFn::from_laurent(lp(&[(1, 1), (-1, 0)])));
    }

    #[test]
    fn denominator_powers_of_a_move_to_numerator() {
        // 1 / (A^2 + A^6) == A^-2 / (1 + A^4)
        let r = RationalFn::new(LaurentPoly::one(), lp(&[(1, 2), (1, 6)]));
        assert_eq!(r.den(), &lp(&[(1, 0), (1, 4)]));
        assert_eq!(r.num(), &lp(&[(1, -2)]));
    }

    #[test]
    fn sign_and_content_normalized() {
        let r = RationalFn::new(lp(&[(4, 0)]), lp(&[(-6, 0), (2, 1)]));
        assert_eq!(r.num(), &lp(&[(-2, 0)]));
        assert_eq!(r.den(), &lp(&[(3, 0), (-1, 1)]));
    }

    #[test]
    fn inverse_roundtrip() {
        let r = RationalFn::new(lp(&[(1, 3), (2, -1)]), lp(&[(1, 0), (5, 2)]));
        assert!((&r * &r.inv().unwrap()).is_one());
    }
}
