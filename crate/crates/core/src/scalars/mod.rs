//! Exact scalars: the field `Q(A)` with `sqrt(Delta)` adjoined, where
//! `d = -A^2 - A^-2` is the loop value and `Delta = d^2 - 1`.

mod constants;
mod laurent;
mod rational;

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use serde_json::{json, Value};

pub use constants::{constants, NamedConstants};
pub use laurent::LaurentPoly;
pub(crate) use rational::poly_lcm;
pub use rational::RationalFn;

use crate::error::{Error, Result};

/// `p + q * sqrt(Delta)` with `p, q` in `Q(A)`.
///
/// `Delta = A^4 + 1 + A^-4` is not a square in `Q(A)`, so the pair is unique
/// and every nonzero value is invertible.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar {
    p: RationalFn,
    q: RationalFn,
}

/// `Delta` as a Laurent polynomial: `d^2 - 1 = A^4 + 1 + A^-4`.
pub fn delta_poly() -> LaurentPoly {
    LaurentPoly::from_terms([(1, 4), (1, 0), (1, -4)])
}

/// The loop value `d = -A^2 - A^-2`.
pub fn loop_poly() -> LaurentPoly {
    LaurentPoly::from_terms([(-1, 2), (-1, -2)])
}

impl Scalar {
    pub fn new(p: RationalFn, q: RationalFn) -> Self {
        Scalar { p, q }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(RationalFn::one())
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        Self::from_rational(RationalFn::from_int(c))
    }

    pub fn from_rational(p: RationalFn) -> Self {
        Scalar {
            p,
            q: RationalFn::zero(),
        }
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        Self::from_rational(p.into())
    }

    /// `c * A^k`.
    pub fn monomial(c: impl Into<BigInt>, k: i64) -> Self {
        Self::from_laurent(LaurentPoly::monomial(c, k))
    }

    /// The variable `A`.
    pub fn a() -> Self {
        Self::monomial(1, 1)
    }

    /// The adjoined root `sqrt(Delta)`.
    pub fn sqrt_delta() -> Self {
        Scalar {
            p: RationalFn::zero(),
            q: RationalFn::one(),
        }
    }

    /// Rational part `p`.
    pub fn rational_part(&self) -> &RationalFn {
        &self.p
    }

    /// Coefficient `q` of `sqrt(Delta)`.
    pub fn root_part(&self) -> &RationalFn {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.p.is_one() && self.q.is_zero()
    }

    /// True when `q == 0`.
    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// `p^2 - q^2 Delta`, the norm down to `Q(A)`.
    pub fn norm(&self) -> RationalFn {
        let delta = RationalFn::from_laurent(delta_poly());
        &(&self.p * &self.p) - &(&(&self.q * &self.q) * &delta)
    }

    pub fn conjugate(&self) -> Self {
        Scalar {
            p: self.p.clone(),
            q: -&self.q,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm().inv().ok_or(Error::DivisionByZero)?;
        Ok(Scalar {
            p: &self.p * &n,
            q: -&(&self.q * &n),
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: i32) -> Self {
        let base = if e < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut acc = Scalar::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            k >>= 1;
            if k > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    /// `p(A) + q(A) sqrt(Delta(A))` on the principal square-root branch.
    pub fn eval(&self, a: Complex64) -> Result<Complex64> {
        let pole = || Error::PoleAtA(format!("{a}"));
        let p = self.p.eval(a).ok_or_else(pole)?;
        if self.q.is_zero() {
            return Ok(p);
        }
        let q = self.q.eval(a).ok_or_else(pole)?;
        let delta = delta_poly().eval(a);
        if delta.norm() < 1e-300 {
            return Err(pole());
        }
        Ok(p + q * delta.sqrt())
    }

    /// Exact `(p(a), q(a))` at a rational `A`, so the value is `p + q sqrt(Delta(a))`.
    pub fn eval_parts_rational(
        &self,
        a: &num_rational::BigRational,
    ) -> Result<(num_rational::BigRational, num_rational::BigRational)> {
        let pole = || Error::PoleAtA(a.to_string());
        Ok((
            self.p.eval_rational(a).ok_or_else(pole)?,
            self.q.eval_rational(a).ok_or_else(pole)?,
        ))
    }

    /// Canonical JSON form: `{"p": {"num": [[c, e], ...], "den": [...]}, "q": {...}}`
    /// with coefficients as decimal strings and terms in ascending exponent.
    pub fn to_json(&self) -> Value {
        fn poly(p: &LaurentPoly) -> Value {
            Value::Array(p.terms().map(|(c, e)| json!([c.to_string(), e])).collect())
        }
        fn rat(r: &RationalFn) -> Value {
            json!({ "num": poly(r.num()), "den": poly(r.den()) })
        }
        json!({ "p": rat(&self.p), "q": rat(&self.q) })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        fn bad(msg: &str) -> Error {
            Error::Syntax {
                position: 0,
                message: format!("scalar json: {msg}"),
            }
        }
        fn poly(v: &Value) -> Result<LaurentPoly> {
            let arr = v.as_array().ok_or_else(|| bad("term list expected"))?;
            let mut terms = Vec::with_capacity(arr.len());
            for t in arr {
                let pair = t.as_array().ok_or_else(|| bad("term pair expected"))?;
                if pair.len() != 2 {
                    return Err(bad("term pair expected"));
                }
                let c: BigInt = match &pair[0] {
                    Value::String(s) => s.parse().map_err(|_| bad("bad coefficient"))?,
                    Value::Number(n) => n.as_i64().ok_or_else(|| bad("bad coefficient"))?.into(),
                    _ => return Err(bad("bad coefficient")),
                };
                let e = match &pair[1] {
                    Value::String(s) => s.parse().map_err(|_| bad("bad exponent"))?,
                    Value::Number(n) => n.as_i64().ok_or_else(|| bad("bad exponent"))?,
                    _ => return Err(bad("bad exponent")),
                };
                terms.push((c, e));
            }
            Ok(LaurentPoly::from_terms(terms))
        }
        fn rat(v: &Value) -> Result<RationalFn> {
            let num = poly(v.get("num").ok_or_else(|| bad("missing num"))?)?;
            let den = poly(v.get("den").ok_or_else(|| bad("missing den"))?)?;
            RationalFn::checked_new(num, den).ok_or_else(|| bad("zero denominator"))
        }
        Ok(Scalar {
            p: rat(v.get("p").ok_or_else(|| bad("missing p"))?)?,
            q: rat(v.get("q").ok_or_else(|| bad("missing q"))?)?,
        })
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            p: &self.p + &rhs.p,
            q: &self.q + &rhs.q,
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar {
            p: &self.p - &rhs.p,
            q: &self.q - &rhs.q,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            p: -&self.p,
            q: -&self.q,
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.q.is_zero() && rhs.q.is_zero() {
            return Scalar::from_rational(&self.p * &rhs.p);
        }
        let delta = RationalFn::from_laurent(delta_poly());
        Scalar {
            p: &(&self.p * &rhs.p) + &(&(&self.q * &rhs.q) * &delta),
            q: &(&self.p * &rhs.q) + &(&self.q * &rhs.p),
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    /// Panics on division by zero; see [`Scalar::checked_div`].
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero scalar")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = &*self + &rhs;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl From<RationalFn> for Scalar {
    fn from(p: RationalFn) -> Self {
        Scalar::from_rational(p)
    }
}

impl From<LaurentPoly> for Scalar {
    fn from(p: LaurentPoly) -> Self {
        Scalar::from_laurent(p)
    }
}

impl From<i64> for Scalar {
    fn from(c: i64) -> Self {
        Scalar::from_int(c)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.p.is_zero(), self.q.is_zero()) {
            (_, true) => write!(f, "{}", self.p),
            (true, false) => write!(f, "[{}]*sqrt(Delta)", self.q),
            (false, false) => write!(f, "[{}] + [{}]*sqrt(Delta)", self.p, self.q),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_squared_is_delta() {
        let s = Scalar::sqrt_delta();
        assert_eq!(&s * &s, Scalar::from_laurent(delta_poly()));
        assert_eq!(delta_poly(), LaurentPoly::from_terms([(1, 4), (1, 0), (1, -4)]));
    }

    #[test]
    fn inverse_root_squared_is_inverse_delta() {
        let b = Scalar::sqrt_delta().inv().unwrap();
        let a = Scalar::from_laurent(delta_poly()).inv().unwrap();
        assert_eq!(&b * &b, a);
    }

    #[test]
    fn additive_identity() {
        let x = Scalar::new(
            RationalFn::new(LaurentPoly::monomial(3, -2), LaurentPoly::from_terms([(1, 0), (1, 4)])),
            RationalFn::from_int(-7),
        );
        assert_eq!(&x + &Scalar::zero(), x);
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(Scalar::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn json_roundtrip_of_mixed_value() {
        let x = &Scalar::sqrt_delta().inv().unwrap() + &Scalar::monomial(-5, 3);
        let back = Scalar::from_json(&x.to_json()).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn principal_branch_at_one() {
        let v = Scalar::sqrt_delta().eval(Complex64::new(1.0, 0.0)).unwrap();
        assert!((v.re - 3f64.sqrt()).abs() < 1e-12 && v.im.abs() < 1e-12);
    }

    #[test]
    fn pole_is_reported() {
        // 1/d has a pole where A^4 = -1.
        let d = Scalar::from_laurent(loop_poly());
        let a = Complex64::from_polar(1.0, std::f64::consts::PI / 4.0);
        assert!(matches!(d.inv().unwrap().eval(a), Err(Error::PoleAtA(_))));
    }
}
