//! Exact Gaussian elimination over `Scalar`, and over the specialization of
//! `Q(A)[√Δ]` at a rational value of `A`.
//!
//! Rank computed at a point never exceeds the generic rank, so a nonzero
//! determinant at a point certifies independence over the whole field.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalars::Scalar;

/// Ring operations on values that carry their own context.
pub trait Ring: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
}

/// The operations elimination needs.
pub trait Field: Ring {
    /// Inverse of a nonzero element.
    fn inv(&self) -> Self;
}

impl Ring for Scalar {
    fn zero_like(&self) -> Self {
        Scalar::zero()
    }
    fn one_like(&self) -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

impl Field for Scalar {
    fn inv(&self) -> Self {
        Scalar::inv(self).expect("pivot is nonzero")
    }
}

/// `p + q·√δ` for a fixed rational `δ`, with `√δ` formal; a field when `δ`
/// is not a square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointValue {
    pub p: BigRational,
    pub q: BigRational,
    delta: Arc<BigRational>,
}

impl PointValue {
    fn with(&self, p: BigRational, q: BigRational) -> Self {
        PointValue {
            p,
            q,
            delta: self.delta.clone(),
        }
    }

    /// The least `s > 0` such that `s·self` lies in `Z[√r]`, where
    /// `√δ = √r / den(δ)`.
    pub fn denominator(&self) -> BigInt {
        let q = &self.q / BigRational::from_integer(self.delta.denom().clone());
        self.p.denom().lcm(q.denom())
    }

    /// `s·self` in `Z[√r]`; `s` must be a multiple of [`Self::denominator`].
    pub fn scaled(&self, s: &BigInt) -> IntegralPoint {
        let s = BigRational::from_integer(s.clone());
        let p = &self.p * &s;
        let q = &self.q * &s / BigRational::from_integer(self.delta.denom().clone());
        debug_assert!(p.is_integer() && q.is_integer());
        IntegralPoint {
            p: p.to_integer(),
            q: q.to_integer(),
            radicand: Arc::new(self.delta.numer() * self.delta.denom()),
        }
    }
}

/// `p + q·√r` with integer `p`, `q`, `r` and `√r` formal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralPoint {
    pub p: BigInt,
    pub q: BigInt,
    radicand: Arc<BigInt>,
}

impl IntegralPoint {
    fn with(&self, p: BigInt, q: BigInt) -> Self {
        IntegralPoint {
            p,
            q,
            radicand: self.radicand.clone(),
        }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        self.with(&self.p * s, &self.q * s)
    }
}

impl Ring for IntegralPoint {
    fn zero_like(&self) -> Self {
        self.with(BigInt::zero(), BigInt::zero())
    }
    fn one_like(&self) -> Self {
        self.with(BigInt::one(), BigInt::zero())
    }
    fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        self.with(&self.p + &rhs.p, &self.q + &rhs.q)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.with(&self.p - &rhs.p, &self.q - &rhs.q)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.with(
            &self.p * &rhs.p + &self.q * &rhs.q * &*self.radicand,
            &self.p * &rhs.q + &self.q * &rhs.p,
        )
    }
}

impl Ring for PointValue {
    fn zero_like(&self) -> Self {
        self.with(BigRational::zero(), BigRational::zero())
    }
    fn one_like(&self) -> Self {
        self.with(BigRational::one(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        self.with(&self.p + &rhs.p, &self.q + &rhs.q)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.with(&self.p - &rhs.p, &self.q - &rhs.q)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.with(
            &self.p * &rhs.p + &self.q * &rhs.q * &*self.delta,
            &self.p * &rhs.q + &self.q * &rhs.p,
        )
    }
}

impl Field for PointValue {
    fn inv(&self) -> Self {
        let n = &self.p * &self.p - &self.q * &self.q * &*self.delta;
        self.with(&self.p / &n, -&self.q / &n)
    }
}

/// Specializes one scalar at `A = a`.
pub fn point_value(x: &Scalar, a: &BigRational) -> Result<PointValue> {
    let delta = Scalar::from_laurent(crate::scalars::delta_poly())
        .eval_parts_rational(a)?
        .0;
    let (p, q) = x.eval_parts_rational(a)?;
    Ok(PointValue {
        p,
        q,
        delta: Arc::new(delta),
    })
}

/// Specializes a matrix at `A = a`.
///
/// `a` must avoid poles of the entries and make `Δ(a)` a non-square, which
/// holds for the rationals used here (Δ is a positive non-square there).
pub fn specialize(m: &[Vec<Scalar>], a: &BigRational) -> Result<Vec<Vec<PointValue>>> {
    let delta = Arc::new(
        Scalar::from_laurent(crate::scalars::delta_poly())
            .eval_parts_rational(a)?
            .0,
    );
    m.iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let (p, q) = x.eval_parts_rational(a)?;
                    Ok(PointValue {
                        p,
                        q,
                        delta: delta.clone(),
                    })
                })
                .collect()
        })
        .collect()
}

/// The default specialization point `A = 7/5`.
pub fn sample_point() -> BigRational {
    BigRational::new(7.into(), 5.into())
}

/// Row-reduces in place; returns the pivot columns in order.
fn reduce<F: Field>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for j in c..cols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = m[r][j].mul(&f);
                    m[i][j] = m[i][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &[Vec<F>]) -> usize {
    reduce(&mut m.to_vec()).len()
}

/// Indices of a maximal set of linearly independent columns, chosen greedily
/// from the left.
pub fn independent_columns<F: Field>(m: &[Vec<F>]) -> Vec<usize> {
    reduce(&mut m.to_vec())
}

pub fn determinant<F: Field>(m: &[Vec<F>]) -> Option<F> {
    let n = m.len();
    let first = m.first()?.first()?.clone();
    let mut a = m.to_vec();
    let mut det = first.one_like();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Some(first.zero_like());
        };
        if p != c {
            a.swap(p, c);
            det = det.zero_like().sub(&det);
        }
        det = det.mul(&a[c][c]);
        let inv = a[c][c].inv();
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = a[i][c].mul(&inv);
                for j in c..n {
                    let t = a[c][j].mul(&f);
                    a[i][j] = a[i][j].sub(&t);
                }
            }
        }
    }
    Some(det)
}

/// Solves `m · x = b` for square nonsingular `m`; `b` has one column per
/// right-hand side.
pub fn solve<F: Field>(m: &[Vec<F>], b: &[Vec<F>]) -> Result<Vec<Vec<F>>> {
    let n = m.len();
    if b.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::ShapeMismatch(format!("{n}x? system")));
    }
    let k = b.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<F>> = m
        .iter()
        .zip(b)
        .map(|(r, rb)| r.iter().chain(rb.iter()).cloned().collect())
        .collect();
    let pivots = reduce(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return Err(Error::SingularBasis(format!("rank {} < {n}", pivots.len())));
    }
    Ok(aug.into_iter().map(|r| r[n..n + k].to_vec()).collect())
}

pub fn mat_mul<F: Field>(x: &[Vec<F>], y: &[Vec<F>]) -> Vec<Vec<F>> {
    let inner = y.len();
    x.iter()
        .map(|row| {
            (0..y.first().map_or(0, Vec::len))
                .map(|j| (0..inner).fold(row[0].zero_like(), |acc, k| acc.add(&row[k].mul(&y[k][j]))))
                .collect()
        })
        .collect()
}

pub fn identity(n: usize) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Scalar::one() } else { Scalar::zero() })
                .collect()
        })
        .collect()
}
