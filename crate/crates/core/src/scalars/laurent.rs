//! Laurent polynomials in `A` with integer coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A finite sum `sum_k c_k A^k` with `c_k` integers and `k` possibly negative.
///
/// Stored densely from the lowest nonzero exponent; the first and last stored
/// coefficients are nonzero, and the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * A^exp`.
    pub fn monomial(c: impl Into<BigInt>, exp: i64) -> Self {
        Self::from_dense(exp, vec![c.into()])
    }

    /// Builds from `(coefficient, exponent)` pairs; repeated exponents add up.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (C, i64)>,
        C: Into<BigInt>,
    {
        let mut acc = LaurentPoly::zero();
        for (c, e) in terms {
            acc = &acc + &LaurentPoly::monomial(c, e);
        }
        acc
    }

    /// Builds from a dense coefficient vector starting at exponent `low`.
    pub fn from_dense(low: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = LaurentPoly { low, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent carrying a nonzero coefficient (0 for the zero polynomial).
    pub fn low(&self) -> i64 {
        self.low
    }

    /// Highest exponent carrying a nonzero coefficient (0 for the zero polynomial).
    pub fn high(&self) -> i64 {
        if self.coeffs.is_empty() {
            0
        } else {
            self.low + self.coeffs.len() as i64 - 1
        }
    }

    /// Dense coefficients starting at [`Self::low`].
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        let idx = exp - self.low;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Nonzero terms as `(coefficient, exponent)`, ascending exponent.
    pub fn terms(&self) -> impl Iterator<Item = (&BigInt, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (c, self.low + i as i64))
    }

    /// Multiplies by `A^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = LaurentPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitutes `A -> -A`.
    pub fn negate_variable(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if (self.low + i as i64).rem_euclid(2) == 1 {
                    -c
                } else {
                    c.clone()
                }
            })
            .collect();
        LaurentPoly::from_dense(self.low, coeffs)
    }

    pub fn eval(&self, a: Complex64) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        // Horner from the top, then scale by A^low.
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * a + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
        }
        acc * a.powi(self.low as i32)
    }

    /// Sum of `|c_k| |A|^k`, used as a scale for "numerically zero" decisions.
    pub(crate) fn abs_scale(&self, a: Complex64) -> f64 {
        let r = a.norm();
        self.terms()
            .map(|(c, e)| c.abs().to_f64().unwrap_or(f64::INFINITY) * r.powi(e as i32))
            .sum()
    }

    pub fn eval_rational(&self, a: &num_rational::BigRational) -> num_rational::BigRational {
        use num_rational::BigRational;
        if self.is_zero() {
            return BigRational::zero();
        }
        if a.is_zero() {
            return BigRational::from_integer(self.coeff(0));
        }
        // Homogeneous Horner: sum of c_j p^j q^(m-j) over the dense span.
        let (p, q) = (a.numer(), a.denom());
        let coeffs = self.coeffs();
        let m = coeffs.len() - 1;
        let mut acc = coeffs[m].clone();
        let mut q_pow = BigInt::one();
        for c in coeffs[..m].iter().rev() {
            q_pow *= q;
            acc = acc * p + c * &q_pow;
        }
        let mut den = q_pow;
        let low = self.low();
        let k = low.unsigned_abs() as usize;
        if low >= 0 {
            acc *= num_traits::pow(p.clone(), k);
            den *= num_traits::pow(q.clone(), k);
        } else {
            acc *= num_traits::pow(q.clone(), k);
            den *= num_traits::pow(p.clone(), k);
        }
        BigRational::new(acc, den)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let high = self.high().max(rhs.high());
        let mut coeffs = vec![BigInt::zero(); (high - low + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[(rhs.low - low) as usize + i] += c;
        }
        LaurentPoly::from_dense(low, coeffs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly::from_dense(self.low + rhs.low, coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LaurentPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.low.cmp(&other.low).then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (c, e) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "A")?,
                (1, false) => write!(f, "{mag}*A")?,
                (_, true) => write!(f, "A^{e}")?,
                (_, false) => write!(f, "{mag}*A^{e}")?,
            }
        }
        Ok(())
    }
}

/// Dense univariate polynomial helpers (ascending coefficients, no trailing zeros).
pub(crate) mod upoly {
    use super::*;

    pub fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }

    pub fn content(v: &[BigInt]) -> BigInt {
        v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
        let c = content(v);
        if c.is_zero() || c.is_one() {
            return v.to_vec();
        }
        v.iter().map(|x| x / &c).collect()
    }

    /// Pseudo-remainder of `a` by `b` (b nonzero).
    pub fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let lb = &b[db];
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            let shift = dr - db;
            for x in r.iter_mut() {
                *x *= lb;
            }
            for (i, bc) in b.iter().enumerate() {
                r[shift + i] -= &lr * bc;
            }
            r = trim(r);
            // keep growth in check
            let c = content(&r);
            if !c.is_zero() && !c.is_one() {
                r = r.iter().map(|x| x / &c).collect();
            }
        }
        r
    }

    const PRIME: u64 = (1 << 61) - 1;

    fn reduce_mod(v: &[BigInt]) -> Vec<u64> {
        let p = BigInt::from(PRIME);
        let mut out: Vec<u64> = v
            .iter()
            .map(|c| c.mod_floor(&p).to_u64().expect("reduced below the prime"))
            .collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }

    fn mul_mod(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % PRIME as u128) as u64
    }

    fn inv_mod(a: u64) -> u64 {
        let (mut base, mut e, mut acc) = (a, PRIME - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(acc, base);
            }
            base = mul_mod(base, base);
            e >>= 1;
        }
        acc
    }

    /// Monic gcd of the images modulo a fixed prime.
    fn gcd_mod(a: &[u64], b: &[u64]) -> Vec<u64> {
        let (mut x, mut y) = (a.to_vec(), b.to_vec());
        while !y.is_empty() {
            let inv = inv_mod(*y.last().expect("nonempty"));
            while x.len() >= y.len() {
                let f = mul_mod(*x.last().expect("nonempty"), inv);
                let shift = x.len() - y.len();
                for (i, c) in y.iter().enumerate() {
                    x[shift + i] = (x[shift + i] + PRIME - mul_mod(f, *c)) % PRIME;
                }
                while x.last() == Some(&0) {
                    x.pop();
                }
            }
            std::mem::swap(&mut x, &mut y);
        }
        let inv = inv_mod(*x.last().expect("gcd of nonzero images"));
        x.iter().map(|&c| mul_mod(c, inv)).collect()
    }

    /// Lifts a modular image to the symmetric range.
    fn lift(c: u64) -> BigInt {
        if c > PRIME / 2 {
            BigInt::from(c) - BigInt::from(PRIME)
        } else {
            BigInt::from(c)
        }
    }

    /// Quotient `a / b` when `b` divides `a` in `Z[x]`.
    pub fn try_div(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
        if a.len() < b.len() {
            return None;
        }
        let db = b.len() - 1;
        let mut r = a.to_vec();
        let mut q = vec![BigInt::zero(); a.len() - db];
        for k in (0..q.len()).rev() {
            let (coef, rem) = r[k + db].div_rem(&b[db]);
            if !rem.is_zero() {
                return None;
            }
            for (i, bc) in b.iter().enumerate() {
                r[k + i] -= &coef * bc;
            }
            q[k] = coef;
        }
        r.iter().all(|c| c.is_zero()).then(|| trim(q))
    }

    /// Primitive gcd over `Q[x]`, returned as a primitive integer polynomial
    /// with positive leading coefficient.
    ///
    /// A modular image decides most cases: when the prime misses the leading
    /// coefficients, the image's gcd degree bounds the true one from above.
    pub fn gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            let nonzero = if a.is_empty() { b } else { a };
            return positive(primitive(nonzero));
        }
        let (am, bm) = (reduce_mod(a), reduce_mod(b));
        if am.len() == a.len() && bm.len() == b.len() {
            let g = gcd_mod(&am, &bm);
            if g.len() == 1 {
                return vec![BigInt::one()];
            }
            // The true gcd, scaled to leading coefficient gcd(lc(a), lc(b)),
            // usually has coefficients well inside the symmetric range; a
            // candidate that divides both inputs has maximal degree.
            let lc = a[a.len() - 1].gcd(&b[b.len() - 1]);
            let lc_image = reduce_mod(std::slice::from_ref(&lc))[0];
            let candidate = primitive(&g.iter().map(|&c| lift(mul_mod(c, lc_image))).collect::<Vec<_>>());
            if try_div(&primitive(a), &candidate).is_some() && try_div(&primitive(b), &candidate).is_some() {
                return positive(candidate);
            }
        }
        prs_gcd(a, b)
    }

    fn positive(x: Vec<BigInt>) -> Vec<BigInt> {
        if x.last().is_some_and(|c| c.is_negative()) {
            x.iter().map(|c| -c).collect()
        } else {
            x
        }
    }

    pub(crate) fn prs_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut x = primitive(a);
        let mut y = primitive(b);
        if x.len() < y.len() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_empty() {
            if y.len() == 1 {
                return vec![BigInt::one()];
            }
            let r = prem(&x, &y);
            x = y;
            y = primitive(&r);
        }
        if x.last().is_some_and(|c| c.is_negative()) {
            x = x.iter().map(|c| -c).collect();
        }
        x
    }

    /// Exact quotient `a / b` in `Z[x]`; `b` must divide `a` and be primitive.
    pub fn div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if a.is_empty() {
            return Vec::new();
        }
        let db = b.len() - 1;
        let mut r = a.to_vec();
        let mut q = vec![BigInt::zero(); a.len() - db];
        for k in (0..q.len()).rev() {
            let coef = &r[k + db] / &b[db];
            for (i, bc) in b.iter().enumerate() {
                r[k + i] -= &coef * bc;
            }
            q[k] = coef;
        }
        debug_assert!(r.iter().all(|c| c.is_zero()), "inexact polynomial division");
        trim(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_gcd_agrees_with_remainder_sequences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut poly = |deg: usize| -> Vec<BigInt> {
            let mut v: Vec<BigInt> = (0..=deg).map(|_| BigInt::from(rng.gen_range(-9..=9))).collect();
            v[deg] = BigInt::from(rng.gen_range(1..=5));
            v
        };
        let mul = |x: &[BigInt], y: &[BigInt]| {
            (LaurentPoly::from_dense(0, x.to_vec()) * LaurentPoly::from_dense(0, y.to_vec()))
                .coeffs()
                .to_vec()
        };
        for k in 0..60 {
            let common = poly(k % 4);
            let a = mul(&mul(&poly(3), &common), &common);
            let b = mul(&poly(2 + k % 3), &common);
            assert_eq!(upoly::gcd(&a, &b), upoly::prs_gcd(&a, &b));
        }
    }

    #[test]
    fn canonical_form_trims_zeros() {
        let p = LaurentPoly::from_terms([(1, -2), (0, 0), (-1, -2), (3, 5)]);
        assert_eq!(p, LaurentPoly::monomial(3, 5));
        assert_eq!(p.low(), 5);
        let z = &p - &p;
        assert!(z.is_zero());
        assert_eq!(z, LaurentPoly::zero());
    }

    #[test]
    fn d_squared_minus_one() {
        let d = LaurentPoly::from_terms([(-1, 2), (-1, -2)]);
        let delta = &(&d * &d) - &LaurentPoly::one();
        assert_eq!(delta, LaurentPoly::from_terms([(1, 4), (1, 0), (1, -4)]));
    }

    #[test]
    fn gcd_of_products() {
        use upoly::*;
        let p = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        // (x+1)(x^2+1) and (x+1)(x-2)
        let f = p(&[1, 1, 1, 1]);
        let g = p(&[-2, -1, 1]);
        assert_eq!(gcd(&f, &g), p(&[1, 1]));
        assert_eq!(div_exact(&f, &p(&[1, 1])), p(&[1, 0, 1]));
    }

    #[test]
    fn display_reads_naturally() {
        let p = LaurentPoly::from_terms([(1, 4), (1, 0), (-2, -4)]);
        assert_eq!(p.to_string(), "A^4 + 1 - 2*A^-4");
    }
}
