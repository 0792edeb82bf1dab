use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, rat, rat_to_f64};
use crate::error::{Error, Result};

/// An imaginary quadratic field E = Q(sqrt(delta)) with delta a negative
/// fundamental discriminant. Integral basis {1, w} with w = (delta + sqrt(delta)) / 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldE {
    delta: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

impl FieldE {
    pub fn new(delta: i64) -> Result<Self> {
        if delta >= 0 || !arith::is_fundamental_discriminant(delta) {
            return Err(Error::NotFundamental(delta));
        }
        Ok(FieldE { delta })
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    /// Tr(w) = delta.
    pub fn omega_trace(&self) -> i64 {
        self.delta
    }

    /// N(w) = (delta^2 - delta) / 4.
    pub fn omega_norm(&self) -> i64 {
        (self.delta * self.delta - self.delta) / 4
    }

    pub fn kronecker(&self, n: i64) -> i32 {
        arith::kronecker(self.delta, n)
    }

    pub fn factor_prime(&self, p: i64) -> Result<SplitType> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(match self.kronecker(p) {
            1 => SplitType::Split,
            -1 => SplitType::Inert,
            _ => SplitType::Ramified,
        })
    }

    /// Number of roots of unity in E.
    pub fn mu_order(&self) -> u32 {
        match self.delta {
            -3 => 6,
            -4 => 4,
            _ => 2,
        }
    }

    /// Generator of mu_E: zeta_6 = 2 + w for delta = -3, i = 2 + w for delta = -4, else -1.
    pub fn mu_generator(&self) -> QuadElem {
        match self.delta {
            -3 | -4 => QuadElem::from_ints(self.delta, 2, 1),
            _ => QuadElem::from_ints(self.delta, -1, 0),
        }
    }

    /// All roots of unity u^0, u^1, ... for the generator u.
    pub fn units(&self) -> Vec<QuadElem> {
        let g = self.mu_generator();
        let mut out = vec![self.one()];
        for _ in 1..self.mu_order() {
            let next = out.last().unwrap() * &g;
            out.push(next);
        }
        out
    }

    pub fn one(&self) -> QuadElem {
        QuadElem::from_ints(self.delta, 1, 0)
    }

    pub fn zero(&self) -> QuadElem {
        QuadElem::from_ints(self.delta, 0, 0)
    }

    pub fn omega(&self) -> QuadElem {
        QuadElem::from_ints(self.delta, 0, 1)
    }

    pub fn int(&self, n: i64) -> QuadElem {
        QuadElem::from_ints(self.delta, n, 0)
    }

    pub fn elem(&self, x: i64, y: i64) -> QuadElem {
        QuadElem::from_ints(self.delta, x, y)
    }

    /// sqrt(delta) = 2w - delta.
    pub fn sqrt_delta(&self) -> QuadElem {
        QuadElem::from_ints(self.delta, -self.delta, 2)
    }

    /// Complex value of w under the embedding with positive imaginary part.
    pub fn omega_complex(&self) -> Complex64 {
        Complex64::new(self.delta as f64 / 2.0, ((-self.delta) as f64).sqrt() / 2.0)
    }
}

/// x + y*w with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    delta: i64,
    pub x: BigRational,
    pub y: BigRational,
}

impl fmt::Debug for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})w", self.x, self.y)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl QuadElem {
    pub fn new(delta: i64, x: BigRational, y: BigRational) -> Self {
        QuadElem { delta, x, y }
    }

    pub fn from_ints(delta: i64, x: i64, y: i64) -> Self {
        QuadElem { delta, x: rat(x), y: rat(y) }
    }

    pub fn from_rational(delta: i64, x: BigRational) -> Self {
        QuadElem { delta, x, y: BigRational::zero() }
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    pub fn conj(&self) -> QuadElem {
        // conj(w) = delta - w
        QuadElem {
            delta: self.delta,
            x: &self.x + &self.y * rat(self.delta),
            y: -&self.y,
        }
    }

    pub fn trace(&self) -> BigRational {
        &self.x * rat(2) + &self.y * rat(self.delta)
    }

    pub fn norm(&self) -> BigRational {
        let nw = (self.delta * self.delta - self.delta) / 4;
        &self.x * &self.x + &self.x * &self.y * rat(self.delta) + &self.y * &self.y * rat(nw)
    }

    pub fn inv(&self) -> Option<QuadElem> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(QuadElem { delta: self.delta, x: c.x / &n, y: c.y / n })
    }

    pub fn pow(&self, e: u32) -> QuadElem {
        let one = QuadElem::from_ints(self.delta, 1, 0);
        arith::pow_generic(self, e as u64, &one, &|a: &QuadElem, b: &QuadElem| a * b)
    }

    pub fn scale(&self, c: &BigRational) -> QuadElem {
        QuadElem { delta: self.delta, x: &self.x * c, y: &self.y * c }
    }

    /// Coordinates (u, v) with self = u + v*sqrt(delta).
    pub fn sqrt_coords(&self) -> (BigRational, BigRational) {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let u = &self.x + &self.y * rat(self.delta) * &half;
        let v = &self.y * half;
        (u, v)
    }

    /// Inverse of `sqrt_coords`: u + v*sqrt(delta) = (u - v*delta) + 2v*w.
    pub fn from_sqrt_coords(delta: i64, u: BigRational, v: BigRational) -> QuadElem {
        QuadElem {
            delta,
            x: &u - &v * rat(delta),
            y: v * rat(2),
        }
    }

    /// Integer coordinates, if integral and small enough.
    pub fn to_i64_pair(&self) -> Option<(i64, i64)> {
        if !self.is_integral() {
            return None;
        }
        Some((self.x.numer().to_i64()?, self.y.numer().to_i64()?))
    }

    pub fn to_complex(&self) -> Complex64 {
        let w = Complex64::new(self.delta as f64 / 2.0, ((-self.delta) as f64).sqrt() / 2.0);
        Complex64::new(rat_to_f64(&self.x), 0.0) + w * rat_to_f64(&self.y)
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        num_integer::Integer::lcm(self.x.denom(), self.y.denom())
    }

    pub fn is_negative_rational(&self) -> bool {
        self.y.is_zero() && self.x.is_negative()
    }
}

fn mul_impl(a: &QuadElem, b: &QuadElem) -> QuadElem {
    debug_assert_eq!(a.delta, b.delta);
    let d = a.delta;
    let nw = (d * d - d) / 4;
    let yy = &a.y * &b.y;
    QuadElem {
        delta: d,
        x: &a.x * &b.x - &yy * rat(nw),
        y: &a.x * &b.y + &a.y * &b.x + yy * rat(d),
    }
}

impl<'a> Mul<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: &'a QuadElem) -> QuadElem {
        mul_impl(self, rhs)
    }
}

impl Mul for QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: QuadElem) -> QuadElem {
        mul_impl(&self, &rhs)
    }
}

impl<'a> Add<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: &'a QuadElem) -> QuadElem {
        QuadElem { delta: self.delta, x: &self.x + &rhs.x, y: &self.y + &rhs.y }
    }
}

impl Add for QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: QuadElem) -> QuadElem {
        &self + &rhs
    }
}

impl<'a> Sub<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: &'a QuadElem) -> QuadElem {
        QuadElem { delta: self.delta, x: &self.x - &rhs.x, y: &self.y - &rhs.y }
    }
}

impl Sub for QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: QuadElem) -> QuadElem {
        &self - &rhs
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem { delta: self.delta, x: -self.x, y: -self.y }
    }
}

impl<'a> Neg for &'a QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem { delta: self.delta, x: -&self.x, y: -&self.y }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_relations() {
        for d in [-3, -4, -7, -8, -15, -20, -163] {
            let e = FieldE::new(d).unwrap();
            let w = e.omega();
            assert_eq!(w.trace(), rat(d));
            assert_eq!(w.norm(), rat(e.omega_norm()));
            let s = e.sqrt_delta();
            assert_eq!(&s * &s, e.int(d));
        }
    }

    #[test]
    fn units_have_norm_one() {
        for d in [-3, -4, -7] {
            let e = FieldE::new(d).unwrap();
            let us = e.units();
            assert_eq!(us.len() as u32, e.mu_order());
            for u in &us {
                assert_eq!(u.norm(), rat(1));
            }
            let g = e.mu_generator();
            assert!(g.pow(e.mu_order()).is_one());
        }
    }

    #[test]
    fn rejects_non_fundamental() {
        assert!(FieldE::new(-12).is_err());
        assert!(FieldE::new(5).is_err());
        assert!(FieldE::new(-16).is_err());
    }

    #[test]
    fn split_types() {
        let e = FieldE::new(-4).unwrap();
        assert_eq!(e.factor_prime(5).unwrap(), SplitType::Split);
        assert_eq!(e.factor_prime(2).unwrap(), SplitType::Ramified);
        assert_eq!(e.factor_prime(3).unwrap(), SplitType::Inert);
        let e = FieldE::new(-163).unwrap();
        assert_eq!(e.factor_prime(2).unwrap(), SplitType::Inert);
        assert!(e.factor_prime(9).is_err());
    }
}
