//! The presented algebra E ⊗ Q(zeta_r)[beta_1..beta_g] holding psi-values.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{cyclotomic_poly, euler_phi, first_dependency};
use crate::chargroup::Angle;
use crate::error::{Error, Result};
use crate::quadfield::{FieldE, QuadElem};

/// Element of a [`ValueAlgebra`]: integer numerators over a common positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgElem {
    num: Vec<BigInt>,
    den: BigInt,
}

impl AlgElem {
    fn normalised(mut num: Vec<BigInt>, mut den: BigInt) -> AlgElem {
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if num.iter().all(|c| c.is_zero()) {
            return AlgElem { num, den: BigInt::one() };
        }
        if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den = den / g;
        }
        AlgElem { num, den }
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Rational coordinates on the monomial basis.
    pub fn coords(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    pub fn from_coords(coords: &[BigRational]) -> AlgElem {
        let den = coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coords.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        AlgElem::normalised(num, den)
    }

    /// Largest bit length among numerators and denominator.
    pub fn bits(&self) -> u64 {
        self.num.iter().map(|c| c.bits()).max().unwrap_or(0).max(self.den.bits())
    }
}

impl fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.num.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]/{}", self.den)
    }
}

/// A radical beta with beta^n = gamma, gamma in E(zeta_r).
#[derive(Debug, Clone)]
pub struct Radical {
    pub n: u32,
    pub gamma: AlgElem,
    /// beta embeds as the principal n-th root of gamma times exp(2 pi i s / n).
    pub root_choice: u32,
}

/// Q-algebra with basis w^a zeta^b beta^c (a < 2, b < phi(r), c_i < n_i).
#[derive(Debug)]
pub struct ValueAlgebra {
    field: FieldE,
    r: u32,
    phi: usize,
    radicals: Vec<Radical>,
    dim: usize,
    // products of basis elements, scaled by table_den
    table: Vec<Vec<Vec<(usize, BigInt)>>>,
    table_den: BigInt,
    basis_complex: Vec<Complex64>,
    zeta_pows: Vec<AlgElem>,
    // when E lies in Q(zeta_r): zeta^b w written in the zeta-basis, for each b < phi;
    // elements are then kept with zero w-coordinates (the distinguished factor)
    omega_zeta: Option<Vec<Vec<BigRational>>>,
}

impl ValueAlgebra {
    /// E ⊗ Q(zeta_r) with no radicals.
    pub fn base(field: FieldE, r: u32) -> Result<Arc<ValueAlgebra>> {
        ValueAlgebra::new(field, r, Vec::new())
    }

    /// Base algebra of `field` and `r` with radicals adjoined; each gamma must be
    /// an element of the base algebra.
    pub fn new(field: FieldE, r: u32, radicals: Vec<Radical>) -> Result<Arc<ValueAlgebra>> {
        if r == 0 {
            return Err(Error::InvalidArgument("r must be positive".into()));
        }
        let phi = euler_phi(r as i64) as usize;
        let base_dim = 2 * phi;
        for rad in &radicals {
            if rad.n == 0 {
                return Err(Error::InvalidArgument("radical exponent must be positive".into()));
            }
            if rad.gamma.dim() != base_dim {
                return Err(Error::InvalidArgument("radicand is not in the base field".into()));
            }
            if rad.gamma.is_zero() {
                return Err(Error::InvalidArgument("radicand is zero".into()));
            }
        }
        let dim = base_dim * radicals.iter().map(|r| r.n as usize).product::<usize>();
        let delta = field.delta();
        let cyclo = cyclotomic_poly(r);

        // base products as integer vectors: index a + 2b
        let trace = BigInt::from(delta);
        let norm = BigInt::from((delta * delta - delta) / 4);
        let base_product = |i: usize, j: usize| -> Vec<BigInt> {
            let (a1, b1) = (i % 2, i / 2);
            let (a2, b2) = (j % 2, j / 2);
            // w^(a1+a2) as (c0, c1) in basis 1, w
            let (w0, w1) = match a1 + a2 {
                0 => (BigInt::one(), BigInt::zero()),
                1 => (BigInt::zero(), BigInt::one()),
                _ => (-norm.clone(), trace.clone()),
            };
            // zeta^(b1+b2) reduced mod Phi_r
            let mut z = vec![BigInt::zero(); 2 * phi];
            z[b1 + b2] = BigInt::one();
            for k in (phi..2 * phi).rev() {
                if z[k].is_zero() {
                    continue;
                }
                let c = std::mem::take(&mut z[k]);
                for (t, &pc) in cyclo.iter().enumerate().take(phi) {
                    z[k - phi + t] -= &c * pc;
                }
            }
            let mut out = vec![BigInt::zero(); base_dim];
            for b in 0..phi {
                if !z[b].is_zero() {
                    out[2 * b] += &w0 * &z[b];
                    out[2 * b + 1] += &w1 * &z[b];
                }
            }
            out
        };
        let mut base_table = vec![vec![Vec::new(); base_dim]; base_dim];
        for i in 0..base_dim {
            for j in 0..base_dim {
                base_table[i][j] = base_product(i, j);
            }
        }
        let base_mul = |x: &[BigRational], y: &[BigRational]| -> Vec<BigRational> {
            let mut out = vec![BigRational::zero(); base_dim];
            for (i, xi) in x.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                for (j, yj) in y.iter().enumerate() {
                    if yj.is_zero() {
                        continue;
                    }
                    let c = xi * yj;
                    for (k, t) in base_table[i][j].iter().enumerate() {
                        if !t.is_zero() {
                            out[k] += &c * BigRational::from_integer(t.clone());
                        }
                    }
                }
            }
            out
        };

        // full table over Q
        let ns: Vec<usize> = radicals.iter().map(|r| r.n as usize).collect();
        let omega_zeta = if r as i64 % delta == 0 {
            Some(omega_in_zeta(delta, r, phi, &base_mul))
        } else {
            None
        };
        let mut radicals = radicals;
        if let Some(oz) = &omega_zeta {
            for rad in &mut radicals {
                rad.gamma = AlgElem::from_coords(&reduce_coords(&rad.gamma.coords(), oz, base_dim));
            }
        }
        let gammas: Vec<Vec<BigRational>> = radicals.iter().map(|r| r.gamma.coords()).collect();
        let split = |k: usize| -> (usize, Vec<usize>) {
            let mut m = k / base_dim;
            let mut digits = Vec::with_capacity(ns.len());
            for &n in &ns {
                digits.push(m % n);
                m /= n;
            }
            (k % base_dim, digits)
        };
        let join = |f: usize, digits: &[usize]| -> usize {
            let mut m = 0;
            for (d, &n) in digits.iter().zip(&ns).rev() {
                m = m * n + d;
            }
            f + base_dim * m
        };
        let mut rat_table: Vec<Vec<Vec<(usize, BigRational)>>> = vec![vec![Vec::new(); dim]; dim];
        let mut den = BigInt::one();
        for i in 0..dim {
            let (fi, di) = split(i);
            for j in i..dim {
                let (fj, dj) = split(j);
                let mut coeff: Vec<BigRational> =
                    base_table[fi][fj].iter().map(|t| BigRational::from_integer(t.clone())).collect();
                let mut digits = Vec::with_capacity(ns.len());
                for (t, (&a, &b)) in di.iter().zip(&dj).enumerate() {
                    let s = a + b;
                    if s >= ns[t] {
                        coeff = base_mul(&coeff, &gammas[t]);
                        digits.push(s - ns[t]);
                    } else {
                        digits.push(s);
                    }
                }
                let mut entry = Vec::new();
                for (f, c) in coeff.into_iter().enumerate() {
                    if !c.is_zero() {
                        den = den.lcm(c.denom());
                        entry.push((join(f, &digits), c));
                    }
                }
                rat_table[i][j] = entry.clone();
                rat_table[j][i] = entry;
            }
        }
        let dr = BigRational::from_integer(den.clone());
        let table = rat_table
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| e.into_iter().map(|(k, c)| (k, (c * &dr).to_integer())).collect())
                    .collect()
            })
            .collect();

        // complex images of the basis
        let w = field.omega_complex();
        let zeta = Angle::new(1, r as i64).to_complex();
        let mut betas = Vec::new();
        for (rad, g) in radicals.iter().zip(&gammas) {
            let gc = base_complex(g, w, zeta);
            let root = gc.powf(1.0 / rad.n as f64);
            let twist = Angle::new(rad.root_choice as i64, rad.n as i64).to_complex();
            betas.push(root * twist);
        }
        let mut basis_complex = Vec::with_capacity(dim);
        for k in 0..dim {
            let (f, digits) = split(k);
            let mut v = zeta.powu((f / 2) as u32);
            if f % 2 == 1 {
                v *= w;
            }
            for (b, &d) in betas.iter().zip(&digits) {
                v *= b.powu(d as u32);
            }
            basis_complex.push(v);
        }

        let mut alg = ValueAlgebra {
            field,
            r,
            phi,
            radicals,
            dim,
            table,
            table_den: den,
            basis_complex,
            zeta_pows: Vec::new(),
            omega_zeta,
        };
        let mut zp = Vec::with_capacity(r as usize);
        let mut cur = alg.one();
        let z = if phi >= 2 {
            alg.basis(2)
        } else {
            alg.from_int(if r == 2 { -1 } else { 1 })
        };
        for _ in 0..r {
            zp.push(cur.clone());
            cur = alg.mul(&cur, &z);
        }
        alg.zeta_pows = zp;
        Ok(Arc::new(alg))
    }

    pub fn field(&self) -> &FieldE {
        &self.field
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn phi(&self) -> usize {
        self.phi
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Q-dimension of the algebra of normal forms.
    pub fn effective_dim(&self) -> usize {
        if self.omega_zeta.is_some() {
            self.dim / 2
        } else {
            self.dim
        }
    }

    pub fn base_dim(&self) -> usize {
        2 * self.phi
    }

    pub fn radicals(&self) -> &[Radical] {
        &self.radicals
    }

    pub fn zero(&self) -> AlgElem {
        AlgElem { num: vec![BigInt::zero(); self.dim], den: BigInt::one() }
    }

    pub fn one(&self) -> AlgElem {
        self.basis(0)
    }

    pub fn basis(&self, k: usize) -> AlgElem {
        let mut e = self.zero();
        e.num[k] = BigInt::one();
        self.reduce(e)
    }

    /// Whether E sits inside Q(zeta_r), so that w is rewritten in powers of zeta.
    pub fn is_reduced(&self) -> bool {
        self.omega_zeta.is_some()
    }

    /// Normal form: with E inside Q(zeta_r), replace w by its image in Q(zeta_r).
    pub fn reduce(&self, a: AlgElem) -> AlgElem {
        match &self.omega_zeta {
            Some(oz) if a.num.iter().skip(1).step_by(2).any(|c| !c.is_zero()) => {
                let c = reduce_coords(&a.coords(), oz, self.base_dim());
                AlgElem::from_coords(&c)
            }
            _ => a,
        }
    }

    /// Coordinates that may be nonzero in normal form.
    fn live_coords(&self) -> Vec<usize> {
        (0..self.dim).filter(|k| self.omega_zeta.is_none() || k % 2 == 0).collect()
    }

    pub fn from_int(&self, n: i64) -> AlgElem {
        self.from_rational(&BigRational::from_integer(n.into()))
    }

    pub fn from_rational(&self, q: &BigRational) -> AlgElem {
        let mut num = vec![BigInt::zero(); self.dim];
        num[0] = q.numer().clone();
        AlgElem::normalised(num, q.denom().clone())
    }

    pub fn from_quad(&self, z: &QuadElem) -> AlgElem {
        debug_assert_eq!(z.delta(), self.field.delta());
        let mut c = vec![BigRational::zero(); self.dim];
        c[0] = z.x.clone();
        c[1] = z.y.clone();
        self.reduce(AlgElem::from_coords(&c))
    }

    /// The E-part of an element lying in E, if it does.
    pub fn to_quad(&self, a: &AlgElem) -> Option<QuadElem> {
        let d = self.field.delta();
        let Some(oz) = &self.omega_zeta else {
            if a.num.iter().skip(2).any(|c| !c.is_zero()) {
                return None;
            }
            let c = a.coords();
            return Some(QuadElem::new(d, c[0].clone(), c[1].clone()));
        };
        // a = x + y w with w = oz[0]
        let c = a.coords();
        let w = &oz[0];
        let k = (2..w.len()).find(|&k| !w[k].is_zero())?;
        let y = &c[k] / &w[k];
        let x = &c[0] - &y * &w[0];
        let z = QuadElem::new(d, x, y);
        (self.from_quad(&z) == *a).then_some(z)
    }

    /// zeta_r^k.
    pub fn zeta_pow(&self, k: i64) -> AlgElem {
        self.zeta_pows[k.rem_euclid(self.r as i64) as usize].clone()
    }

    /// exp(2 pi i t) as an element, when its order divides lcm(r, |mu_E|).
    pub fn root_of_unity(&self, t: &Angle) -> Option<AlgElem> {
        let n = t.denom();
        let r = self.r as i64;
        if r % n == 0 {
            return Some(self.zeta_pow(t.numer() * (r / n)));
        }
        let mu = self.field.mu_order() as i64;
        let w = num_integer::lcm(r, mu);
        if w % n != 0 {
            return None;
        }
        // 1/w = a/r + b/mu with a*(w/r) + b*(w/mu) = 1
        let (g, a, b) = crate::arith::xgcd((w / r) as i128, (w / mu) as i128);
        debug_assert_eq!(g, 1);
        let k = t.numer() * (w / n);
        let ua = self.zeta_pow((a as i64).rem_euclid(r) * k);
        let gen = self.from_quad(&self.field.mu_generator());
        let ub = self.pow(&gen, ((b as i64).rem_euclid(mu) * k).rem_euclid(mu) as u64);
        Some(self.mul(&ua, &ub))
    }

    /// beta_i.
    pub fn beta(&self, i: usize) -> AlgElem {
        let stride = self.base_dim() * self.radicals[..i].iter().map(|r| r.n as usize).product::<usize>();
        if self.radicals[i].n == 1 {
            return self.lift(&self.radicals[i].gamma);
        }
        self.basis(stride)
    }

    /// Embed an element of the base algebra.
    pub fn lift(&self, a: &AlgElem) -> AlgElem {
        let mut num = a.num.clone();
        num.resize(self.dim, BigInt::zero());
        self.reduce(AlgElem { num, den: a.den.clone() })
    }

    /// Base-algebra part of an element with no radical components.
    pub fn to_base(&self, a: &AlgElem) -> Option<AlgElem> {
        let bd = self.base_dim();
        if a.num[bd..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(AlgElem::normalised(a.num[..bd].to_vec(), a.den.clone()))
    }

    pub fn add(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        if a.den == b.den {
            let num = a.num.iter().zip(&b.num).map(|(x, y)| x + y).collect();
            return AlgElem::normalised(num, a.den.clone());
        }
        let l = a.den.lcm(&b.den);
        let fa = &l / &a.den;
        let fb = &l / &b.den;
        let num = a.num.iter().zip(&b.num).map(|(x, y)| x * &fa + y * &fb).collect();
        AlgElem::normalised(num, l)
    }

    pub fn neg(&self, a: &AlgElem) -> AlgElem {
        AlgElem { num: a.num.iter().map(|x| -x).collect(), den: a.den.clone() }
    }

    pub fn sub(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &AlgElem, q: &BigRational) -> AlgElem {
        let num = a.num.iter().map(|x| x * q.numer()).collect();
        AlgElem::normalised(num, &a.den * q.denom())
    }

    pub fn mul(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        let mut out = vec![BigInt::zero(); self.dim];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, t) in &self.table[i][j] {
                    out[*k] += &xy * t;
                }
            }
        }
        AlgElem::normalised(out, &a.den * &b.den * &self.table_den)
    }

    pub fn pow(&self, a: &AlgElem, mut e: u64) -> AlgElem {
        let mut result = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// Matrix of multiplication by a; column j is a * basis_j.
    pub fn mul_matrix(&self, a: &AlgElem) -> Vec<Vec<BigRational>> {
        let mut m = vec![vec![BigRational::zero(); self.dim]; self.dim];
        for j in 0..self.dim {
            let col = self.mul(a, &self.basis(j)).coords();
            for (i, c) in col.into_iter().enumerate() {
                m[i][j] = c;
            }
        }
        m
    }

    /// Inverse, if a is not a zero divisor.
    pub fn inv(&self, a: &AlgElem) -> Option<AlgElem> {
        let live = self.live_coords();
        let m = self.mul_matrix(a);
        let sub: Vec<Vec<BigRational>> = live.iter().map(|&i| live.iter().map(|&j| m[i][j].clone()).collect()).collect();
        let mut rhs = vec![BigRational::zero(); live.len()];
        rhs[0] = BigRational::one();
        let x = solve(sub, rhs)?;
        let mut c = vec![BigRational::zero(); self.dim];
        for (&i, v) in live.iter().zip(x) {
            c[i] = v;
        }
        Some(AlgElem::from_coords(&c))
    }

    /// Minimal polynomial over Q (constant term first, monic).
    pub fn min_poly(&self, a: &AlgElem) -> Vec<BigRational> {
        let mut powers = vec![self.one().coords()];
        let mut cur = self.one();
        loop {
            cur = self.mul(&cur, a);
            powers.push(cur.coords());
            if let Some(dep) = first_dependency(&powers) {
                return dep;
            }
        }
    }

    /// Complex conjugation on the base algebra: zeta -> zeta^-1, w -> D - w.
    pub fn conj_base(&self, a: &AlgElem) -> Option<AlgElem> {
        let bd = self.base_dim();
        if a.num[bd..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        let wbar = self.from_quad(&self.field.omega().conj());
        let mut out = self.zero();
        for b in 0..self.phi {
            let z = self.zeta_pow(-(b as i64));
            let c0 = &a.num[2 * b];
            let c1 = &a.num[2 * b + 1];
            if !c0.is_zero() {
                out = self.add(&out, &self.scale(&z, &BigRational::from_integer(c0.clone())));
            }
            if !c1.is_zero() {
                let t = self.mul(&z, &wbar);
                out = self.add(&out, &self.scale(&t, &BigRational::from_integer(c1.clone())));
            }
        }
        Some(AlgElem::normalised(out.num, &out.den * &a.den))
    }

    /// Image under the distinguished embedding.
    pub fn to_complex(&self, a: &AlgElem) -> Complex64 {
        let den = big_to_f64(&a.den);
        let mut s = Complex64::new(0.0, 0.0);
        for (c, b) in a.num.iter().zip(&self.basis_complex) {
            if !c.is_zero() {
                s += b * (big_to_f64(c) / den);
            }
        }
        s
    }

    /// Images of the basis under every ring homomorphism to C: w to either root,
    /// zeta to any primitive r-th root, beta_i to any n_i-th root of the image of gamma_i.
    pub fn all_embeddings(&self) -> Vec<Vec<Complex64>> {
        let d = self.field.delta() as f64;
        let sq = (-d).sqrt();
        let ws = [Complex64::new(d / 2.0, sq / 2.0), Complex64::new(d / 2.0, -sq / 2.0)];
        let r = self.r as i64;
        let ks: Vec<i64> = (0..r.max(1)).filter(|&k| num_integer::gcd(k, r) == 1).collect();
        let ks = if ks.is_empty() { vec![0] } else { ks };
        let mut out = Vec::new();
        for (wi, w) in ws.into_iter().enumerate() {
            for &k in &ks {
                let zeta = Angle::new(k, r).to_complex();
                // in normal form w is a polynomial in zeta, so one choice of w per zeta
                let w = match &self.omega_zeta {
                    Some(_) if wi == 1 => continue,
                    Some(oz) => base_complex(&oz[0], w, zeta),
                    None => w,
                };
                let gammas: Vec<Complex64> =
                    self.radicals.iter().map(|rad| base_complex(&rad.gamma.coords(), w, zeta)).collect();
                let count: usize = self.radicals.iter().map(|r| r.n as usize).product();
                for idx in 0..count {
                    let mut m = idx;
                    let mut betas = Vec::with_capacity(self.radicals.len());
                    for (rad, g) in self.radicals.iter().zip(&gammas) {
                        let s = m % rad.n as usize;
                        m /= rad.n as usize;
                        let root = g.powf(1.0 / rad.n as f64);
                        betas.push(root * Angle::new(s as i64, rad.n as i64).to_complex());
                    }
                    let bd = self.base_dim();
                    let basis: Vec<Complex64> = (0..self.dim)
                        .map(|kk| {
                            let f = kk % bd;
                            let mut mm = kk / bd;
                            let mut v = zeta.powu((f / 2) as u32);
                            if f % 2 == 1 {
                                v *= w;
                            }
                            for (b, rad) in betas.iter().zip(&self.radicals) {
                                v *= b.powu((mm % rad.n as usize) as u32);
                                mm /= rad.n as usize;
                            }
                            v
                        })
                        .collect();
                    out.push(basis);
                }
            }
        }
        out
    }

    /// Image of a under a basis image table from [`ValueAlgebra::all_embeddings`].
    pub fn embed_with(&self, a: &AlgElem, basis: &[Complex64]) -> Complex64 {
        let den = big_to_f64(&a.den);
        let mut s = Complex64::new(0.0, 0.0);
        for (c, b) in a.num.iter().zip(basis) {
            if !c.is_zero() {
                s += b * (big_to_f64(c) / den);
            }
        }
        s
    }

    pub fn basis_complex(&self) -> &[Complex64] {
        &self.basis_complex
    }
}

/// zeta^b w in the zeta-basis of the base algebra, for b < phi, using the
/// Gauss sum sqrt(D) = sum_a (D/a) zeta_|D|^a.
fn omega_in_zeta<F>(delta: i64, r: u32, phi: usize, base_mul: &F) -> Vec<Vec<BigRational>>
where
    F: Fn(&[BigRational], &[BigRational]) -> Vec<BigRational>,
{
    let bd = 2 * phi;
    let mut zeta = vec![BigRational::zero(); bd];
    zeta[2] = BigRational::one();
    let mut zp = vec![BigRational::zero(); bd];
    zp[0] = BigRational::one();
    let mut pows = Vec::with_capacity(r as usize);
    for _ in 0..r {
        pows.push(zp.clone());
        zp = base_mul(&zp, &zeta);
    }
    let q = delta.abs();
    let step = r as i64 / q;
    let mut w = vec![BigRational::zero(); bd];
    w[0] = BigRational::new(delta.into(), 2.into());
    let half = BigRational::new(1.into(), 2.into());
    for a in 1..q {
        let k = crate::arith::kronecker(delta, a);
        if k != 0 {
            for (x, y) in w.iter_mut().zip(&pows[((a * step) % r as i64) as usize]) {
                *x += y * &half * BigRational::from_integer(k.into());
            }
        }
    }
    (0..phi).map(|b| base_mul(&pows[b], &w)).collect()
}

/// Replace each w zeta^b by its zeta-expansion; works blockwise on radical monomials.
fn reduce_coords(c: &[BigRational], oz: &[Vec<BigRational>], bd: usize) -> Vec<BigRational> {
    let mut out = c.to_vec();
    for k in (1..c.len()).step_by(2) {
        if c[k].is_zero() {
            continue;
        }
        out[k] = BigRational::zero();
        let block = k - k % bd;
        let b = (k % bd) / 2;
        for (f, v) in oz[b].iter().enumerate() {
            if !v.is_zero() {
                out[block + f] += &c[k] * v;
            }
        }
    }
    out
}

fn base_complex(coords: &[BigRational], w: Complex64, zeta: Complex64) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (k, c) in coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut v = zeta.powu((k / 2) as u32);
        if k % 2 == 1 {
            v *= w;
        }
        s += v * crate::arith::rat_to_f64(c);
    }
    s
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        let shift = x.bits().saturating_sub(1000);
        (x >> shift).to_f64().unwrap() * 2f64.powi(shift as i32)
    })
}

/// Solve m x = rhs over Q; None if m is singular.
pub(crate) fn solve(mut m: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        let inv = m[col][col].recip();
        for j in col..n {
            m[col][j] = &m[col][j] * &inv;
        }
        rhs[col] = &rhs[col] * &inv;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..n {
                    let t = &f * &m[col][j];
                    m[r][j] = &m[r][j] - t;
                }
                let t = &f * &rhs[col];
                rhs[r] = &rhs[r] - t;
            }
        }
    }
    Some(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_elem(alg: &ValueAlgebra, rng: &mut ChaCha8Rng) -> AlgElem {
        let c: Vec<BigRational> = (0..alg.dim())
            .map(|_| BigRational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=3).into()))
            .collect();
        AlgElem::from_coords(&c)
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= 1e-9 * (1.0 + a.norm().max(b.norm()))
    }

    fn presentations() -> Vec<Arc<ValueAlgebra>> {
        let mut out = Vec::new();
        for (d, r) in [(-15, 1), (-15, 2), (-20, 4), (-15, 6), (-3, 9), (-7, 7), (-4, 12)] {
            out.push(ValueAlgebra::base(FieldE::new(d).unwrap(), r).unwrap());
        }
        // E(sqrt(gamma)) and E(i)(beta1, beta2)
        let e = FieldE::new(-23).unwrap();
        let b = ValueAlgebra::base(e.clone(), 2).unwrap();
        let g = b.from_quad(&e.elem(1, 1));
        out.push(ValueAlgebra::new(e, 2, vec![Radical { n: 3, gamma: g, root_choice: 1 }]).unwrap());
        let e = FieldE::new(-84).unwrap();
        let b = ValueAlgebra::base(e.clone(), 4).unwrap();
        let g1 = b.mul(&b.zeta_pow(1), &b.from_quad(&e.elem(3, 1)));
        let g2 = b.from_quad(&e.elem(-1, 2));
        out.push(
            ValueAlgebra::new(
                e,
                4,
                vec![Radical { n: 2, gamma: g1, root_choice: 0 }, Radical { n: 2, gamma: g2, root_choice: 1 }],
            )
            .unwrap(),
        );
        out
    }

    #[test]
    fn dimensions() {
        let e = FieldE::new(-15).unwrap();
        assert_eq!(ValueAlgebra::base(e.clone(), 4).unwrap().dim(), 4);
        assert_eq!(ValueAlgebra::base(e.clone(), 12).unwrap().dim(), 8);
        let ps = presentations();
        assert_eq!(ps[7].dim(), 6);
        assert_eq!(ps[8].dim(), 16);
    }

    #[test]
    fn ring_axioms_and_embedding() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for alg in presentations() {
            for _ in 0..100 {
                let a = random_elem(&alg, &mut rng);
                let b = random_elem(&alg, &mut rng);
                let c = random_elem(&alg, &mut rng);
                let ab = alg.mul(&a, &b);
                assert_eq!(ab, alg.mul(&b, &a));
                assert_eq!(alg.mul(&ab, &c), alg.mul(&a, &alg.mul(&b, &c)));
                assert_eq!(alg.mul(&a, &alg.add(&b, &c)), alg.add(&ab, &alg.mul(&a, &c)));
                assert_eq!(alg.mul(&a, &alg.one()), a);
                assert!(close(alg.to_complex(&ab), alg.to_complex(&a) * alg.to_complex(&b)));
                assert!(close(alg.to_complex(&alg.add(&a, &c)), alg.to_complex(&a) + alg.to_complex(&c)));
            }
        }
    }

    #[test]
    fn every_embedding_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for alg in presentations() {
            let embs = alg.all_embeddings();
            assert_eq!(embs.len(), alg.effective_dim());
            for _ in 0..10 {
                let a = random_elem(&alg, &mut rng);
                let b = random_elem(&alg, &mut rng);
                let ab = alg.mul(&a, &b);
                for e in &embs {
                    assert!(close(alg.embed_with(&ab, e), alg.embed_with(&a, e) * alg.embed_with(&b, e)));
                }
            }
        }
    }

    #[test]
    fn roots_of_unity_and_radicals() {
        for alg in presentations() {
            let r = alg.r() as i64;
            assert_eq!(alg.pow(&alg.zeta_pow(1), r as u64), alg.one());
            assert!(close(alg.to_complex(&alg.zeta_pow(1)), Angle::new(1, r).to_complex()));
            for (i, rad) in alg.radicals().iter().enumerate() {
                assert_eq!(alg.pow(&alg.beta(i), rad.n as u64), alg.lift(&rad.gamma));
            }
        }
        let e3 = FieldE::new(-3).unwrap();
        let alg = ValueAlgebra::base(e3, 2).unwrap();
        let z6 = alg.root_of_unity(&Angle::new(1, 6)).unwrap();
        assert!(close(alg.to_complex(&z6), Angle::new(1, 6).to_complex()));
        assert!(alg.root_of_unity(&Angle::new(1, 4)).is_none());
        let alg = ValueAlgebra::base(FieldE::new(-4).unwrap(), 3).unwrap();
        let z12 = alg.root_of_unity(&Angle::new(5, 12)).unwrap();
        assert!(close(alg.to_complex(&z12), Angle::new(5, 12).to_complex()));
    }

    #[test]
    fn field_inside_cyclotomic_is_identified() {
        let e = FieldE::new(-4).unwrap();
        let alg = ValueAlgebra::base(e, 4).unwrap();
        assert!(alg.is_reduced());
        let i = alg.from_quad(&e.mu_generator());
        assert!(i == alg.zeta_pow(1) || i == alg.zeta_pow(3));
        assert_eq!(alg.all_embeddings().len(), 2);
        assert_eq!(alg.to_quad(&alg.zeta_pow(1)).map(|z| alg.from_quad(&z)), Some(alg.zeta_pow(1)));
        let x = alg.add(&alg.from_int(3), &alg.zeta_pow(1));
        assert_eq!(alg.mul(&x, &alg.inv(&x).unwrap()), alg.one());
        for d in [-3, -7, -8, -15] {
            let e = FieldE::new(d).unwrap();
            let r = (-d) as u32 * if d == -3 { 2 } else { 1 };
            let alg = ValueAlgebra::base(e, r).unwrap();
            let w = alg.from_quad(&e.omega());
            let wc = alg.to_complex(&w);
            assert!((wc - e.omega_complex()).norm() < 1e-9, "d={d}");
            // w^2 = D w - N
            let n = (d * d - d) / 4;
            assert_eq!(alg.mul(&w, &w), alg.sub(&alg.scale(&w, &BigRational::from_integer(d.into())), &alg.from_int(n)));
            for emb in alg.all_embeddings() {
                let (a, b) = (alg.add(&w, &alg.zeta_pow(1)), alg.zeta_pow(2));
                let lhs = alg.embed_with(&alg.mul(&a, &b), &emb);
                assert!((lhs - alg.embed_with(&a, &emb) * alg.embed_with(&b, &emb)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn inverse_and_min_poly() {
        let e = FieldE::new(-20).unwrap();
        let alg = ValueAlgebra::base(e.clone(), 4).unwrap();
        let x = alg.add(&alg.zeta_pow(1), &alg.from_quad(&e.elem(1, 1)));
        let xi = alg.inv(&x).unwrap();
        assert_eq!(alg.mul(&x, &xi), alg.one());
        // zeta + zeta^-1 = 0 for r = 4; sqrt(D)(zeta - zeta^-1) = -2 sqrt(20)
        let z = alg.zeta_pow(1);
        let zi = alg.zeta_pow(-1);
        let s = alg.from_quad(&e.sqrt_delta());
        let y = alg.mul(&s, &alg.sub(&z, &zi));
        let mp = alg.min_poly(&y);
        assert_eq!(mp, vec![BigRational::from_integer((-80).into()), BigRational::zero(), BigRational::one()]);
        assert_eq!(alg.conj_base(&y).unwrap(), y);
        // E ⊗ Q(i) for E = Q(i) has zero divisors
        let e4 = FieldE::new(-4).unwrap();
        let alg = ValueAlgebra::base(e4.clone(), 4).unwrap();
        let i_e = alg.from_quad(&e4.mu_generator());
        assert!(alg.inv(&alg.sub(&i_e, &alg.zeta_pow(1))).is_none());
    }
}
