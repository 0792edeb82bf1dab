//! Rationality fields K of degree at most 3 and their exact discriminants.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::algebra::ValueAlgebra;
use super::kummer::{cyclotomic_degree, is_nth_power, value_field_degree};
use crate::arith::{big_squarefree_part, mod_inv};
use crate::error::{Error, Result};

/// Totally real field K given by a monic integer polynomial, with its discriminant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalityField {
    pub degree: u32,
    /// Coefficients, constant term first; monic.
    pub poly: Vec<BigInt>,
    pub disc: BigInt,
}

impl Serialize for RationalityField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RationalityField", 3)?;
        st.serialize_field("degree", &self.degree.to_string())?;
        let coeffs: Vec<String> = self.poly.iter().map(|c| c.to_string()).collect();
        st.serialize_field("poly", &coeffs)?;
        st.serialize_field("disc", &self.disc.to_string())?;
        st.end()
    }
}

impl fmt::Display for RationalityField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.poly.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = !a.is_one() || k == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl RationalityField {
    pub fn rational() -> Self {
        RationalityField { degree: 1, poly: vec![BigInt::zero(), BigInt::one()], disc: BigInt::one() }
    }

    /// Q(sqrt(n)) for a positive non-square integer n.
    pub fn quadratic(n: &BigInt) -> Result<Self> {
        if !n.is_positive() || is_square(n) {
            return Err(Error::Inconsistent(format!("radicand {n} does not give a real quadratic field")));
        }
        let s = big_squarefree_part(n);
        let four = BigInt::from(4);
        let disc = if s.mod_floor(&four) == BigInt::one() { s } else { s * four };
        Ok(RationalityField { degree: 2, poly: vec![-n.clone(), BigInt::zero(), BigInt::one()], disc })
    }

    /// Field generated by a root of a monic integer polynomial of degree 1, 2 or 3,
    /// which must be irreducible with only real roots.
    pub fn from_poly(poly: &[BigInt]) -> Result<Self> {
        if poly.last().map(|c| c.is_one()) != Some(true) {
            return Err(Error::InvalidArgument("polynomial must be monic".into()));
        }
        match poly.len() - 1 {
            1 => Ok(Self::rational()),
            2 => {
                let d = &poly[1] * &poly[1] - BigInt::from(4) * &poly[0];
                let mut k = Self::quadratic(&d)?;
                k.poly = poly.to_vec();
                Ok(k)
            }
            3 => {
                let f = [poly[0].clone(), poly[1].clone(), poly[2].clone()];
                if !cubic_integer_roots(&f).is_empty() {
                    return Err(Error::Inconsistent("cubic is reducible".into()));
                }
                let d = cubic_disc(&f);
                if !d.is_positive() {
                    return Err(Error::Inconsistent("cubic field is not totally real".into()));
                }
                let (_, disc) = cubic_field_disc(&f)?;
                Ok(RationalityField { degree: 3, poly: poly.to_vec(), disc })
            }
            n => Err(Error::Unsupported(format!("rationality field of degree {n}"))),
        }
    }
}

fn is_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let r = n.sqrt();
        &r * &r == *n
    }
}

/// Discriminant of x^3 + a x^2 + b x + c, with f = [c, b, a].
pub fn cubic_disc(f: &[BigInt; 3]) -> BigInt {
    let (c, b, a) = (&f[0], &f[1], &f[2]);
    a * a * b * b - BigInt::from(4) * b * b * b - BigInt::from(4) * a * a * a * c - BigInt::from(27) * c * c
        + BigInt::from(18) * a * b * c
}

fn cubic_integer_roots(f: &[BigInt; 3]) -> Vec<BigInt> {
    // rational roots are integers dividing c
    let eval = |x: &BigInt| x * x * x + &f[2] * x * x + &f[1] * x + &f[0];
    if f[0].is_zero() {
        return vec![BigInt::zero()];
    }
    let c = f[0].abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= c {
        if (&c % &d).is_zero() {
            for q in [d.clone(), &c / &d] {
                for s in [q.clone(), -q] {
                    if eval(&s).is_zero() && !out.contains(&s) {
                        out.push(s);
                    }
                }
            }
        }
        d += 1;
    }
    out
}

/// Primes p with p^2 | n.
fn square_divisor_primes(n: &BigInt) -> Result<Vec<u64>> {
    let mut m = n.abs().to_u128().ok_or_else(|| Error::Unsupported("discriminant too large to factor".into()))?;
    let mut out = Vec::new();
    let mut p: u128 = 2;
    while p * p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if e >= 2 {
                out.push(p as u64);
            }
        }
        p += 1;
    }
    // the cofactor has at most two prime factors, all at least p
    let r = num_integer::Roots::sqrt(&m);
    if m > 1 && r * r == m {
        out.push(r as u64);
    }
    Ok(out)
}

// Elements of Q[x]/(f) in the power basis.
struct Cubic {
    f: [BigInt; 3],
}

impl Cubic {
    fn mul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut prod = vec![BigRational::zero(); 5];
        for i in 0..3 {
            for j in 0..3 {
                prod[i + j] += &a[i] * &b[j];
            }
        }
        for k in (3..5).rev() {
            let c = std::mem::take(&mut prod[k]);
            for t in 0..3 {
                prod[k - 3 + t] -= &c * BigRational::from_integer(self.f[t].clone());
            }
        }
        prod.truncate(3);
        prod
    }

    fn theta_pow(&self, k: usize) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); 3];
        v[k] = BigRational::one();
        v
    }

    /// Characteristic polynomial coefficients (trace, second symmetric, norm).
    fn char_coeffs(&self, x: &[BigRational]) -> [BigRational; 3] {
        let cols: Vec<Vec<BigRational>> = (0..3).map(|j| self.mul(x, &self.theta_pow(j))).collect();
        let m = |i: usize, j: usize| &cols[j][i];
        let tr = m(0, 0) + m(1, 1) + m(2, 2);
        let minor = |i: usize, j: usize| m(i, i) * m(j, j) - m(i, j) * m(j, i);
        let s2 = minor(0, 1) + minor(0, 2) + minor(1, 2);
        let det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
        [tr, s2, det]
    }

    fn is_integral(&self, x: &[BigRational]) -> bool {
        self.char_coeffs(x).iter().all(|c| c.is_integer())
    }

    fn trace(&self, x: &[BigRational]) -> BigRational {
        self.char_coeffs(x)[0].clone()
    }
}

/// Z-basis of the module spanned by rational vectors of length 3.
fn module_basis(vs: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let den = vs.iter().flatten().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let dr = BigRational::from_integer(den.clone());
    let mut rows: Vec<Vec<BigInt>> = vs.iter().map(|v| v.iter().map(|c| (c * &dr).to_integer()).collect()).collect();
    // row-style Hermite reduction, column by column
    let mut basis = Vec::new();
    for col in 0..3 {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            for &i in &nz {
                if i != piv {
                    let q = rows[i][col].div_floor(&rows[piv][col]);
                    let pr = rows[piv].clone();
                    for (x, y) in rows[i].iter_mut().zip(&pr) {
                        *x -= &q * y;
                    }
                }
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| !rows[i][col].is_zero()) {
            basis.push(rows.remove(i));
        }
    }
    basis
        .into_iter()
        .map(|r| r.into_iter().map(|c| BigRational::new(c, den.clone())).collect())
        .collect()
}

// polynomials over F_p, constant term first
fn ptrim(mut a: Vec<i64>) -> Vec<i64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn pdivmod(a: &[i64], b: &[i64], p: i64) -> (Vec<i64>, Vec<i64>) {
    let mut r = ptrim(a.to_vec());
    let b = ptrim(b.to_vec());
    let inv = mod_inv(*b.last().unwrap(), p).unwrap();
    let mut q = vec![0i64; r.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = (*r.last().unwrap() as i128 * inv as i128).rem_euclid(p as i128) as i64;
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = ((r[shift + i] as i128 - c as i128 * bi as i128).rem_euclid(p as i128)) as i64;
        }
        r = ptrim(r);
    }
    (ptrim(q), r)
}

fn pgcd(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
    let (mut a, mut b) = (ptrim(a.to_vec()), ptrim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = pdivmod(&a, &b, p);
        a = b;
        b = r;
    }
    if a.is_empty() {
        return a;
    }
    let inv = mod_inv(*a.last().unwrap(), p).unwrap();
    a.iter().map(|&c| (c as i128 * inv as i128).rem_euclid(p as i128) as i64).collect()
}

fn pmul(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as i128 + x as i128 * y as i128).rem_euclid(p as i128)) as i64;
        }
    }
    ptrim(out)
}

/// Dedekind's criterion for Z[x]/(f) at a prime p > 3 (f monic cubic, f = [c, b, a]).
/// Returns None if Z[theta] is p-maximal, else the polynomial U with U(theta)/p integral
/// and not in Z[theta], together with deg Z.
pub fn dedekind(f: &[BigInt; 3], p: u64) -> Option<(Vec<i64>, usize)> {
    let pi = p as i64;
    let pb = BigInt::from(p);
    let fm: Vec<i64> = f
        .iter()
        .map(|c| c.mod_floor(&pb).to_i64().unwrap())
        .chain(std::iter::once(1))
        .collect();
    let df: Vec<i64> = (1..4).map(|k| (fm[k] * k as i64).rem_euclid(pi)).collect();
    let gd = pgcd(&fm, &df, pi);
    let (g, _) = pdivmod(&fm, &gd, pi);
    let (h, _) = pdivmod(&fm, &g, pi);
    // F = (g h - f) / p over Z with the lifts in [0, p)
    let gh: Vec<BigInt> = {
        let mut out = vec![BigInt::zero(); g.len() + h.len() - 1];
        for (i, &x) in g.iter().enumerate() {
            for (j, &y) in h.iter().enumerate() {
                out[i + j] += BigInt::from(x) * BigInt::from(y);
            }
        }
        out
    };
    let fz: Vec<BigInt> = f.iter().cloned().chain(std::iter::once(BigInt::one())).collect();
    let ff: Vec<i64> = (0..4)
        .map(|k| {
            let v = gh.get(k).cloned().unwrap_or_default() - &fz[k];
            debug_assert!((&v % &pb).is_zero());
            (v / &pb).mod_floor(&pb).to_i64().unwrap()
        })
        .collect();
    let z = pgcd(&pgcd(&ff, &g, pi), &h, pi);
    if z.len() <= 1 {
        return None;
    }
    let (u, _) = pdivmod(&fm, &z, pi);
    debug_assert_eq!(pmul(&u, &z, pi), ptrim(fm.clone()));
    Some((u, z.len() - 1))
}

/// (index of Z[theta], field discriminant) for the cubic x^3 + a x^2 + b x + c.
pub fn cubic_field_disc(f: &[BigInt; 3]) -> Result<(BigInt, BigInt)> {
    let d = cubic_disc(f);
    let cubic = Cubic { f: f.clone() };
    let mut basis: Vec<Vec<BigRational>> = (0..3).map(|k| cubic.theta_pow(k)).collect();
    let mut index = BigInt::one();
    for p in square_divisor_primes(&d)? {
        let pr = BigRational::from_integer(p.into());
        if p > 3 {
            match dedekind(f, p) {
                None => continue,
                Some((u, degz)) => {
                    let mut ut: Vec<BigRational> = (0..3).map(|_| BigRational::zero()).collect();
                    let mut extra = Vec::new();
                    for (k, &c) in u.iter().enumerate() {
                        let t = cubic.theta_pow(0);
                        let mut pw = t;
                        for _ in 0..k {
                            pw = cubic.mul(&pw, &cubic.theta_pow(1));
                        }
                        for (x, y) in ut.iter_mut().zip(pw) {
                            *x += y * BigRational::from_integer(c.into());
                        }
                    }
                    let mut cur: Vec<BigRational> = ut.iter().map(|c| c / &pr).collect();
                    for _ in 0..degz {
                        debug_assert!(cubic.is_integral(&cur));
                        extra.push(cur.clone());
                        cur = cubic.mul(&cur, &cubic.theta_pow(1));
                    }
                    let mut all = basis.clone();
                    all.extend(extra);
                    let nb = module_basis(&all);
                    index *= BigInt::from(p).pow(degz as u32);
                    basis = nb;
                }
            }
        }
        while let Some(x) = enlarge(&cubic, &basis, p)? {
            let mut all = basis.clone();
            all.push(x);
            basis = module_basis(&all);
            index *= p;
        }
    }
    let (q, r) = d.div_rem(&(&index * &index));
    if !r.is_zero() {
        return Err(Error::Inconsistent("index squared does not divide the discriminant".into()));
    }
    Ok((index, q))
}

/// An integral element of (1/p) O not in O, for the order O with the given basis.
fn enlarge(cubic: &Cubic, basis: &[Vec<BigRational>], p: u64) -> Result<Option<Vec<BigRational>>> {
    let pi = p as i64;
    let pb = BigInt::from(p);
    // integral elements x = sum c_i w_i / p satisfy Tr(x w_j) in Z
    let mut tmat = vec![vec![0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let t = cubic.trace(&cubic.mul(&basis[i], &basis[j]));
            tmat[i][j] = t.to_integer().mod_floor(&pb).to_i64().unwrap();
        }
    }
    let kernel = left_kernel_mod_p(&tmat, pi);
    let k = kernel.len() as u32;
    if k == 0 {
        return Ok(None);
    }
    let count = (p as u128).pow(k) / (p as u128 - 1).max(1);
    if count > 20_000_000 {
        return Err(Error::Unsupported(format!("index search at p = {p}")));
    }
    // projective points of the kernel: last nonzero coefficient equal to 1
    for lead in 0..kernel.len() {
        let free = lead as u32;
        for idx in 0..(p as u128).pow(free) {
            let mut coeffs = vec![0i64; kernel.len()];
            coeffs[lead] = 1;
            let mut t = idx;
            for c in coeffs.iter_mut().take(lead) {
                *c = (t % p as u128) as i64;
                t /= p as u128;
            }
            let mut c = [0i64; 3];
            for (a, v) in coeffs.iter().zip(&kernel) {
                for i in 0..3 {
                    c[i] = ((c[i] as i128 + *a as i128 * v[i] as i128).rem_euclid(pi as i128)) as i64;
                }
            }
            let mut x = vec![BigRational::zero(); 3];
            for (ci, w) in c.iter().zip(basis) {
                if *ci != 0 {
                    for (xi, wi) in x.iter_mut().zip(w) {
                        *xi += wi * BigRational::new((*ci).into(), pb.clone());
                    }
                }
            }
            if cubic.is_integral(&x) {
                return Ok(Some(x));
            }
        }
    }
    Ok(None)
}

/// Basis of {c : c T = 0 mod p}.
fn left_kernel_mod_p(t: &[Vec<i64>], p: i64) -> Vec<Vec<i64>> {
    // solve T^t c = 0
    let n = t.len();
    let mut m: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| t[i][j].rem_euclid(p)).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(r) = (row..n).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, r);
        let inv = mod_inv(m[row][col], p).unwrap();
        for x in m[row].iter_mut() {
            *x = (*x as i128 * inv as i128).rem_euclid(p as i128) as i64;
        }
        for r2 in 0..n {
            if r2 != row && m[r2][col] != 0 {
                let f = m[r2][col];
                let pr = m[row].clone();
                for (x, y) in m[r2].iter_mut().zip(&pr) {
                    *x = ((*x as i128 - f as i128 * *y as i128).rem_euclid(p as i128)) as i64;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0i64; n];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (-m[r][free]).rem_euclid(p);
        }
        out.push(v);
    }
    out
}

fn integer_poly(q: &[BigRational]) -> Result<Vec<BigInt>> {
    q.iter()
        .map(|c| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::Inconsistent("minimal polynomial is not integral".into()))
            }
        })
        .collect()
}

/// K for L = E(zeta_r): the real subfield of degree d, generated by zeta + zeta^-1
/// or by sqrt(D)(zeta - zeta^-1).
fn real_subfield_of_base(alg: &ValueAlgebra, d: u32) -> Result<RationalityField> {
    let z = alg.zeta_pow(1);
    let zi = alg.zeta_pow(-1);
    let s = alg.from_quad(&alg.field().sqrt_delta());
    for c in [alg.add(&z, &zi), alg.mul(&s, &alg.sub(&z, &zi))] {
        let mp = alg.min_poly(&c);
        if mp.len() as u32 - 1 == d {
            return RationalityField::from_poly(&integer_poly(&mp)?);
        }
    }
    Err(Error::Inconsistent(format!("no real generator of degree {d} in E(zeta_{})", alg.r())))
}

/// Rationality field of the form attached to a character whose values live in `alg`.
/// `norms[i]` is beta_i times its complex conjugate, a rational number.
pub fn rationality_field(alg: &ValueAlgebra, norms: &[BigRational]) -> Result<RationalityField> {
    let d = value_field_degree(alg)?;
    if d > 3 {
        return Err(Error::Unsupported(format!("rationality field of degree {d}")));
    }
    if d == 1 {
        return Ok(RationalityField::rational());
    }
    if cyclotomic_degree(alg.field(), alg.r()) == d {
        return real_subfield_of_base(alg, d as u32);
    }
    // [E(zeta_r) : E] = 1 and one radical survives
    let base = ValueAlgebra::base(*alg.field(), alg.r())?;
    let mut pick = None;
    for (i, rad) in alg.radicals().iter().enumerate() {
        if rad.n as u64 == d && !is_nth_power(&base, &rad.gamma, rad.n)? {
            pick = Some(i);
            break;
        }
    }
    let i = pick.ok_or_else(|| Error::Inconsistent("no radical of the expected degree".into()))?;
    let gamma = base
        .to_quad(&alg.radicals()[i].gamma)
        .ok_or_else(|| Error::Inconsistent("radicand not in E".into()))?;
    let c = &norms[i];
    let tr = gamma.trace();
    let delta = BigRational::from_integer(alg.field().delta().into());
    // sqrt(D) (gamma - conj gamma), rational
    let s = {
        let (_, v) = gamma.sqrt_coords();
        BigRational::from_integer(2.into()) * v * &delta
    };
    let as_int = |q: BigRational| -> Result<BigInt> {
        if q.is_integer() {
            Ok(q.to_integer())
        } else {
            Err(Error::Unsupported("non-integral radicand".into()))
        }
    };
    let two = BigRational::from_integer(2.into());
    let three = BigRational::from_integer(3.into());
    if d == 2 {
        // (beta + conj beta)^2 = Tr gamma + 2c, else (sqrt(D)(beta - conj beta))^2 = D (Tr gamma - 2c)
        let r1 = as_int(&tr + &two * c)?;
        if r1.is_positive() && !is_square(&r1) {
            return RationalityField::quadratic(&r1);
        }
        let r2 = as_int(&delta * (&tr - &two * c))?;
        return RationalityField::quadratic(&r2);
    }
    // beta + conj beta is a root of x^3 - 3c x - Tr gamma
    let p1 = vec![as_int(-&tr)?, as_int(-(&three * c))?, BigInt::zero(), BigInt::one()];
    match RationalityField::from_poly(&p1) {
        Ok(k) => Ok(k),
        Err(_) => {
            // sqrt(D)(beta - conj beta) is a root of x^3 + 3cD x - D s
            let p2 = vec![as_int(-(&delta * &s))?, as_int(&three * c * &delta)?, BigInt::zero(), BigInt::one()];
            RationalityField::from_poly(&p2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::FieldE;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn cubic(c: i64, b: i64, a: i64) -> [BigInt; 3] {
        [c.into(), b.into(), a.into()]
    }

    /// Coefficients of k^3 f(x / k).
    fn scaled(f: &[BigInt; 3], k: i64) -> [BigInt; 3] {
        let k = BigInt::from(k);
        [&f[0] * &k * &k * &k, &f[1] * &k * &k, &f[2] * &k]
    }

    /// Coefficients of f(x + s).
    fn shifted(f: &[BigInt; 3], s: i64) -> [BigInt; 3] {
        let s = BigInt::from(s);
        let (c, b, a) = (&f[0], &f[1], &f[2]);
        [
            &s * &s * &s + a * &s * &s + b * &s + c,
            BigInt::from(3) * &s * &s + BigInt::from(2) * a * &s + b,
            BigInt::from(3) * &s + a,
        ]
    }

    fn maximal_everywhere_below(f: &[BigInt; 3], bound: u64) -> bool {
        // the field discriminant is the discriminant of the order found;
        // check that no prime below the bound enlarges it further
        let (index, _) = cubic_field_disc(f).unwrap();
        if !index.is_one() {
            return true;
        }
        let cb = Cubic { f: f.clone() };
        let basis: Vec<Vec<BigRational>> = (0..3).map(|k| cb.theta_pow(k)).collect();
        crate::arith::primes_up_to(bound as i64)
            .into_iter()
            .all(|p| enlarge(&cb, &basis, p as u64).unwrap().is_none())
    }

    #[test]
    fn table_cubics() {
        let k = RationalityField::from_poly(&big(&[-3, -6, 0, 1])).unwrap();
        assert_eq!(k.disc, BigInt::from(621));
        assert_eq!(k.to_string(), "x^3 - 6x - 3");
        assert_eq!(cubic_disc(&cubic(-1, -9, 0)), BigInt::from(2889));
        let k = RationalityField::from_poly(&big(&[-1, -9, 0, 1])).unwrap();
        assert_eq!(k.disc, BigInt::from(321));
        let (index, _) = cubic_field_disc(&cubic(-1, -9, 0)).unwrap();
        assert_eq!(index, BigInt::from(3));
    }

    #[test]
    fn scaled_cyclotomic_cubics() {
        let f = cubic(-1, -2, 1); // zeta_7 + zeta_7^-1
        assert_eq!(cubic_field_disc(&f).unwrap(), (BigInt::one(), BigInt::from(49)));
        for k in [2, 3, 101, 6, 35] {
            let g = scaled(&f, k);
            let (index, disc) = cubic_field_disc(&g).unwrap();
            assert_eq!(disc, BigInt::from(49), "k={k}");
            assert_eq!(index, BigInt::from(k).pow(3));
        }
        let f9 = cubic(1, -3, 0); // zeta_9 + zeta_9^-1
        assert_eq!(cubic_field_disc(&f9).unwrap().1, BigInt::from(81));
        assert_eq!(cubic_field_disc(&scaled(&f9, 7)).unwrap().1, BigInt::from(81));
    }

    #[test]
    fn dedekind_criterion() {
        // x^3 - 6x - 3: 621 = 3^3 * 23, p = 3 handled by search
        assert!(dedekind(&cubic(-3, -6, 0), 5).is_none());
        let g = scaled(&cubic(-1, -2, 1), 11);
        let (u, degz) = dedekind(&g, 11).unwrap();
        assert!(degz >= 1);
        assert!(!u.is_empty());
        assert!(maximal_everywhere_below(&cubic(-3, -6, 0), 100));
        assert!(maximal_everywhere_below(&cubic(-1, -2, 1), 100));
    }

    #[test]
    fn quadratic_fields() {
        assert_eq!(RationalityField::quadratic(&BigInt::from(5)).unwrap().disc, BigInt::from(5));
        assert_eq!(RationalityField::quadratic(&BigInt::from(20)).unwrap().disc, BigInt::from(5));
        assert_eq!(RationalityField::quadratic(&BigInt::from(24)).unwrap().disc, BigInt::from(24));
        assert_eq!(RationalityField::quadratic(&BigInt::from(163)).unwrap().disc, BigInt::from(652));
        assert!(RationalityField::quadratic(&BigInt::from(9)).is_err());
        assert!(RationalityField::quadratic(&BigInt::from(-3)).is_err());
        let k = RationalityField::from_poly(&big(&[-1, -1, 1])).unwrap();
        assert_eq!(k.disc, BigInt::from(5));
    }

    #[test]
    fn real_subfields_of_cyclotomic_value_fields() {
        let cases = [(-163, 4, 652), (-163, 6, 489), (-15, 6, 5), (-20, 4, 5), (-3, 9, 81), (-7, 7, 49), (-4, 8, 8)];
        for (d, r, disc) in cases {
            let alg = ValueAlgebra::base(FieldE::new(d).unwrap(), r).unwrap();
            let k = rationality_field(&alg, &[]).unwrap();
            assert_eq!(k.disc, BigInt::from(disc), "D={d} r={r}");
        }
        let alg = ValueAlgebra::base(FieldE::new(-15).unwrap(), 2).unwrap();
        assert_eq!(rationality_field(&alg, &[]).unwrap(), RationalityField::rational());
        let alg = ValueAlgebra::base(FieldE::new(-15).unwrap(), 5).unwrap();
        assert!(matches!(rationality_field(&alg, &[]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn serialises_with_string_integers() {
        let k = RationalityField::from_poly(&big(&[-3, -6, 0, 1])).unwrap();
        let v = serde_json::to_value(&k).unwrap();
        assert_eq!(v["disc"], "621");
        assert_eq!(v["poly"][1], "-6");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]
        #[test]
        fn field_disc_is_invariant(a in -6i64..6, b in -30i64..0, c in -30i64..30, k in 2i64..8, s in -5i64..5) {
            let f = cubic(c, b, a);
            prop_assume!(cubic_integer_roots(&f).is_empty());
            prop_assume!(cubic_disc(&f).is_positive());
            let (index, disc) = cubic_field_disc(&f).unwrap();
            let m4 = disc.mod_floor(&BigInt::from(4));
            prop_assert!(m4.is_zero() || m4.is_one());
            prop_assert_eq!(&disc * &index * &index, cubic_disc(&f));
            prop_assert_eq!(&cubic_field_disc(&scaled(&f, k)).unwrap().1, &disc);
            prop_assert_eq!(&cubic_field_disc(&shifted(&f, s)).unwrap().1, &disc);
        }
    }
}
