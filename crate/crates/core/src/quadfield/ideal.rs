use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::elem::{FieldE, QuadElem, SplitType};
use crate::arith::{self, xgcd};
use crate::error::{Error, Result};

/// A nonzero fractional ideal scale * (Z a + Z (b + w)) with a > 0, 0 <= b < a
/// and a | N(b + w). The triple is canonical, so derived equality is ideal equality.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QIdeal {
    delta: i64,
    a: i64,
    b: i64,
    scale: Ratio<i64>,
}

impl fmt::Debug for QIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.scale)
    }
}

impl fmt::Display for QIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Hermite basis {(A, 0), (B, C)} (coordinates on 1, w) of the Z-span of `vs`.
fn hnf2(vs: &[(i128, i128)]) -> Option<(i128, i128, i128)> {
    let mut cur: Option<(i128, i128)> = None;
    let mut xs: Vec<i128> = Vec::new();
    for &(x, y) in vs {
        if y == 0 {
            if x != 0 {
                xs.push(x);
            }
            continue;
        }
        match cur {
            None => cur = Some((x, y)),
            Some((wx, wy)) => {
                let (g, s, t) = xgcd(wy, y);
                let nx = s * wx + t * x;
                let ox = (y / g) * wx - (wy / g) * x;
                if ox != 0 {
                    xs.push(ox);
                }
                cur = Some((nx, g));
            }
        }
    }
    let (mut bx, mut c) = cur?;
    if c < 0 {
        bx = -bx;
        c = -c;
    }
    let mut a: i128 = 0;
    for x in xs {
        a = a.gcd(&x);
    }
    if a == 0 {
        return None;
    }
    Some((a, bx.rem_euclid(a), c))
}

impl QIdeal {
    /// The ideal scale * (Z a + Z (b + w)); checks the ideal condition.
    pub fn new(field: FieldE, a: i64, b: i64, scale: Ratio<i64>) -> Result<Self> {
        if a <= 0 || *scale.numer() <= 0 {
            return Err(Error::InvalidArgument(format!("bad ideal data a={a} scale={scale}")));
        }
        let b = b.rem_euclid(a);
        let d = field.delta() as i128;
        let nb = (b as i128) * (b as i128) + d * (b as i128) + (d * d - d) / 4;
        if nb % (a as i128) != 0 {
            return Err(Error::InvalidArgument(format!("a={a} does not divide N(b + w) for b={b}")));
        }
        Ok(QIdeal { delta: field.delta(), a, b, scale })
    }

    pub fn unit(field: FieldE) -> Self {
        QIdeal { delta: field.delta(), a: 1, b: 0, scale: Ratio::one() }
    }

    pub fn field(&self) -> FieldE {
        FieldE::new(self.delta).expect("stored discriminant is fundamental")
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn scale(&self) -> Ratio<i64> {
        self.scale
    }

    /// Build from the Hermite basis {(A, 0), (B, C)} of an integral ideal lattice.
    fn from_lattice(delta: i64, a: i128, b: i128, c: i128, denom: i128) -> Self {
        let aa = a / c;
        let bb = (b / c).rem_euclid(aa);
        let scale = Ratio::new(c as i64, denom as i64);
        QIdeal { delta, a: aa as i64, b: bb as i64, scale }
    }

    /// Ideal generated over o_E by the given nonzero elements.
    pub fn from_generators(field: FieldE, gens: &[QuadElem]) -> Result<Self> {
        let mut den = BigInt::one();
        for g in gens {
            den = den.lcm(&g.denominator());
        }
        let denr = BigRational::from_integer(den.clone());
        let w = field.omega();
        let mut vs = Vec::new();
        for g in gens {
            for h in [g.clone(), g * &w] {
                let s = h.scale(&denr);
                let x = s.x.to_integer().to_i128().ok_or_else(overflow)?;
                let y = s.y.to_integer().to_i128().ok_or_else(overflow)?;
                vs.push((x, y));
            }
        }
        let (a, b, c) = hnf2(&vs).ok_or(Error::ZeroIdeal)?;
        let d = den.to_i128().ok_or_else(overflow)?;
        Ok(Self::from_lattice(field.delta(), a, b, c, d))
    }

    pub fn principal(alpha: &QuadElem) -> Result<Self> {
        let field = FieldE::new(alpha.delta())?;
        Self::from_generators(field, std::slice::from_ref(alpha))
    }

    pub fn from_int(field: FieldE, n: i64) -> Self {
        QIdeal { delta: field.delta(), a: 1, b: 0, scale: Ratio::from_integer(n.abs()) }
    }

    /// Z-basis {scale * a, scale * (b + w)}.
    pub fn basis(&self) -> [QuadElem; 2] {
        let s = BigRational::new(BigInt::from(*self.scale.numer()), BigInt::from(*self.scale.denom()));
        let f = self.field();
        [f.int(self.a).scale(&s), f.elem(self.b, 1).scale(&s)]
    }

    pub fn norm(&self) -> BigRational {
        let s = BigRational::new(BigInt::from(*self.scale.numer()), BigInt::from(*self.scale.denom()));
        &s * &s * BigRational::from_integer(BigInt::from(self.a))
    }

    /// Norm of an integral ideal.
    pub fn norm_int(&self) -> i64 {
        assert!(self.is_integral(), "norm_int on fractional ideal");
        let s = *self.scale.numer();
        s * s * self.a
    }

    pub fn is_integral(&self) -> bool {
        self.scale.is_integer()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.a == 1 && self.scale.is_one()
    }

    /// Hermite basis (A, B, C) of an integral ideal: lattice spanned by A and B + C w.
    pub fn hnf(&self) -> (i64, i64, i64) {
        assert!(self.is_integral(), "hnf on fractional ideal");
        let c = *self.scale.numer();
        (c * self.a, c * self.b, c)
    }

    /// Primitive part (scale dropped); same ideal class.
    pub fn primitive(&self) -> Self {
        QIdeal { scale: Ratio::one(), ..*self }
    }

    pub fn mul(&self, other: &QIdeal) -> QIdeal {
        debug_assert_eq!(self.delta, other.delta);
        let d = self.delta as i128;
        let nw = (d * d - d) / 4;
        let (a1, b1) = (self.a as i128, self.b as i128);
        let (a2, b2) = (other.a as i128, other.b as i128);
        // (b1 + w)(b2 + w) = b1 b2 - N(w) + (b1 + b2 + delta) w
        let vs = [
            (a1 * a2, 0),
            (a1 * b2, a1),
            (a2 * b1, a2),
            (b1 * b2 - nw, b1 + b2 + d),
        ];
        let (a, b, c) = hnf2(&vs).expect("product of nonzero ideals");
        let prim = Self::from_lattice(self.delta, a, b, c, 1);
        QIdeal { scale: prim.scale * self.scale * other.scale, ..prim }
    }

    pub fn pow(&self, e: u32) -> QIdeal {
        let one = QIdeal { a: 1, b: 0, scale: Ratio::one(), ..*self };
        arith::pow_generic(self, e as u64, &one, &|x: &QIdeal, y: &QIdeal| x.mul(y))
    }

    pub fn conj(&self) -> QIdeal {
        let b = (-self.b - self.delta).rem_euclid(self.a);
        QIdeal { b, ..*self }
    }

    /// I^{-1} = conj(I) / N(I).
    pub fn inv(&self) -> QIdeal {
        let c = self.conj();
        // N(I) = scale^2 a, and conj(I) = scale * P' with P' of norm a; P' conj(P') = a o.
        QIdeal { scale: Ratio::one() / (self.scale * Ratio::from_integer(self.a)), ..c }
    }

    pub fn div(&self, other: &QIdeal) -> QIdeal {
        self.mul(&other.inv())
    }

    /// Whether self divides other (other is contained in self).
    pub fn divides(&self, other: &QIdeal) -> bool {
        other.div(self).is_integral()
    }

    pub fn contains(&self, z: &QuadElem) -> bool {
        let s = BigRational::new(BigInt::from(*self.scale.numer()), BigInt::from(*self.scale.denom()));
        let zz = z.scale(&s.recip());
        if !zz.y.is_integer() {
            return false;
        }
        let r = &zz.x - &zz.y * BigRational::from_integer(BigInt::from(self.b));
        if !r.is_integer() {
            return false;
        }
        (r.to_integer() % BigInt::from(self.a)).is_zero()
    }

    /// Sum I + J (the gcd for integral ideals).
    pub fn add(&self, other: &QIdeal) -> QIdeal {
        let field = self.field();
        let mut gens = self.basis().to_vec();
        gens.extend(other.basis());
        QIdeal::from_generators(field, &gens).expect("nonzero")
    }

    /// Exponent of the prime `p` in the factorisation of self.
    pub fn valuation(&self, p: &QIdeal) -> i32 {
        let num = QIdeal { scale: Ratio::from_integer(*self.scale.numer()), ..*self };
        let den = QIdeal::from_int(self.field(), *self.scale.denom());
        integral_valuation(&num, p) - integral_valuation(&den, p)
    }

    /// Factorisation into prime ideals with nonzero exponents, sorted by (norm, a, b).
    pub fn factor(&self) -> Vec<(QIdeal, i32)> {
        let field = self.field();
        let n = self.norm();
        let mut primes: Vec<i64> = Vec::new();
        for part in [n.numer(), n.denom()] {
            let v = part.to_i64().expect("norm fits in i64");
            for (p, _) in arith::factorize(v) {
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
        }
        primes.sort();
        let mut out = Vec::new();
        for p in primes {
            for pp in primes_above(field, p) {
                let v = self.valuation(&pp);
                if v != 0 {
                    out.push((pp, v));
                }
            }
        }
        out
    }

    /// Whether the integral ideal is coprime to the integral ideal `m`.
    pub fn coprime_to(&self, m: &QIdeal) -> bool {
        self.add(m).is_unit_ideal()
    }
}

fn integral_valuation(i: &QIdeal, p: &QIdeal) -> i32 {
    let pinv = p.inv();
    let mut cur = *i;
    let mut v = 0;
    loop {
        let next = cur.mul(&pinv);
        if !next.is_integral() {
            return v;
        }
        cur = next;
        v += 1;
    }
}

fn overflow() -> Error {
    Error::Unsupported("coordinate overflow".into())
}

/// Prime ideals above the rational prime p, sorted by (norm, b).
pub fn primes_above(field: FieldE, p: i64) -> Vec<QIdeal> {
    let d = field.delta() as i128;
    let nw = (d * d - d) / 4;
    match field.factor_prime(p).expect("p prime") {
        SplitType::Inert => vec![QIdeal { delta: field.delta(), a: 1, b: 0, scale: Ratio::from_integer(p) }],
        _ => {
            let pp = p as i128;
            let mut roots = Vec::new();
            for b in 0..pp {
                if (b * b + d * b + nw).rem_euclid(pp) == 0 {
                    roots.push(b as i64);
                }
            }
            roots
                .into_iter()
                .map(|b| QIdeal { delta: field.delta(), a: p, b, scale: Ratio::one() })
                .collect()
        }
    }
}

/// All prime ideals of norm at most `bound`, sorted by (norm, b).
pub fn primes_up_to_norm(field: FieldE, bound: i64) -> Vec<QIdeal> {
    let mut out = Vec::new();
    for p in arith::primes_up_to(bound) {
        for pp in primes_above(field, p) {
            if pp.norm_int() <= bound {
                out.push(pp);
            }
        }
    }
    out.sort_by_key(|q| (q.norm_int(), q.a, q.b));
    out
}

impl QIdeal {
    /// Residue degree of a prime ideal: 1 or 2.
    pub fn residue_degree(&self) -> u32 {
        if self.a == 1 {
            2
        } else {
            1
        }
    }

    /// The rational prime below a prime ideal.
    pub fn prime_below(&self) -> i64 {
        let n = self.norm_int();
        arith::factorize(n)[0].0
    }

    pub fn is_negative_free(&self) -> bool {
        !self.scale.is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn unit_is_identity() {
        let e = FieldE::new(-15).unwrap();
        let p = primes_above(e, 2)[0];
        assert_eq!(p.mul(&QIdeal::unit(e)), p);
    }

    #[test]
    fn split_prime_product() {
        for d in [-4, -7, -15, -23, -163] {
            let e = FieldE::new(d).unwrap();
            for p in [2, 3, 5, 7, 11, 13, 41, 43] {
                let ps = primes_above(e, p);
                if ps.len() == 2 {
                    assert_eq!(ps[0].mul(&ps[1]), QIdeal::from_int(e, p), "d={d} p={p}");
                    assert_eq!(ps[0].conj(), ps[1]);
                }
                for q in &ps {
                    assert_eq!(q.mul(&q.inv()), QIdeal::unit(e));
                }
            }
        }
    }

    #[test]
    fn ramified_square() {
        let e = FieldE::new(-20).unwrap();
        let p2 = primes_above(e, 2);
        assert_eq!(p2.len(), 1);
        assert_eq!(p2[0].pow(2), QIdeal::from_int(e, 2));
        let p5 = primes_above(e, 5)[0];
        assert_eq!(p5.pow(2), QIdeal::from_int(e, 5));
    }

    #[test]
    fn norm_is_multiplicative() {
        let e = FieldE::new(-23).unwrap();
        let ps = primes_up_to_norm(e, 50);
        for a in &ps {
            for b in &ps {
                assert_eq!(a.mul(b).norm(), a.norm() * b.norm());
            }
        }
    }

    #[test]
    fn principal_and_membership() {
        let e = FieldE::new(-15).unwrap();
        let theta = e.elem(8, 1);
        assert_eq!(theta.norm(), rat(4));
        let i = QIdeal::principal(&theta).unwrap();
        assert_eq!(i.norm(), rat(4));
        assert!(i.contains(&theta));
        assert!(!i.contains(&e.one()));
        let p = primes_above(e, 2)[0];
        assert!(p.pow(2) == i || p.conj().pow(2) == i);
    }

    #[test]
    fn factorisation_round_trip() {
        let e = FieldE::new(-35).unwrap();
        let z = e.elem(12, 5);
        let i = QIdeal::principal(&z).unwrap();
        let f = i.factor();
        let mut prod = QIdeal::unit(e);
        for (p, v) in &f {
            for _ in 0..*v {
                prod = prod.mul(p);
            }
        }
        assert_eq!(prod, i);
        let frac = i.div(&QIdeal::from_int(e, 6));
        let f2 = frac.factor();
        let mut prod = QIdeal::unit(e);
        for (p, v) in &f2 {
            let q = if *v > 0 { *p } else { p.inv() };
            for _ in 0..v.abs() {
                prod = prod.mul(&q);
            }
        }
        assert_eq!(prod, frac);
    }
}
