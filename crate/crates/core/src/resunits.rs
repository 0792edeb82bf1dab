//! Unit groups (o/m)^x of residue rings of E as explicit finite abelian groups.
//!
//! Each prime power P^e dividing m contributes a Teichmuller factor of order
//! q - 1 and the one-unit group (1 + P) / (1 + P^e), presented by the
//! filtration generators 1 + pi^k u_j and reduced with a Smith normal form.
//! The local pieces are glued with CRT idempotents.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith::{self, smith_normal_form, unimodular_inverse};
use crate::error::{Error, Result};
use crate::quadfield::{FieldE, QIdeal, QuadElem};

/// A residue x + y w, stored reduced.
pub type Residue = (i64, i64);

/// Arithmetic in o/m for an integral ideal m with Hermite basis {A, B + C w}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueRing {
    delta: i128,
    nw: i128,
    a: i128,
    b: i128,
    c: i128,
}

impl ResidueRing {
    pub fn new(m: &QIdeal) -> Self {
        let (a, b, c) = m.hnf();
        let d = m.delta() as i128;
        ResidueRing { delta: d, nw: (d * d - d) / 4, a: a as i128, b: b as i128, c: c as i128 }
    }

    /// Number of residues, N(m).
    pub fn size(&self) -> u64 {
        (self.a * self.c) as u64
    }

    /// Generator of m intersected with Z.
    pub fn rational_generator(&self) -> i64 {
        self.a as i64
    }

    pub fn reduce(&self, x: i128, y: i128) -> Residue {
        let q = y.div_euclid(self.c);
        let y = y - q * self.c;
        let x = (x - q * self.b).rem_euclid(self.a);
        (x as i64, y as i64)
    }

    pub fn one(&self) -> Residue {
        self.reduce(1, 0)
    }

    pub fn mul(&self, u: Residue, v: Residue) -> Residue {
        let (x1, y1) = (u.0 as i128, u.1 as i128);
        let (x2, y2) = (v.0 as i128, v.1 as i128);
        let yy = y1 * y2;
        self.reduce(x1 * x2 - self.nw * yy, x1 * y2 + x2 * y1 + self.delta * yy)
    }

    pub fn pow(&self, u: Residue, e: u64) -> Residue {
        arith::pow_generic(&u, e, &self.one(), &|a: &Residue, b: &Residue| self.mul(*a, *b))
    }

    pub fn is_one(&self, u: Residue) -> bool {
        self.reduce(u.0 as i128 - 1, u.1 as i128) == (0, 0)
    }

    pub fn sub_one(&self, u: Residue) -> Residue {
        self.reduce(u.0 as i128 - 1, u.1 as i128)
    }

    /// Residue of an element whose denominator is a rational integer prime to m.
    pub fn from_elem(&self, z: &QuadElem) -> Option<Residue> {
        let den = z.denominator();
        let den = den.to_i128()?;
        let inv = if den == 1 { 1 } else { arith::mod_inv((den % self.a) as i64, self.a as i64)? as i128 };
        let x = (&z.x * num_rational::BigRational::from_integer(den.into())).to_integer();
        let y = (&z.y * num_rational::BigRational::from_integer(den.into())).to_integer();
        let xm = (x % num_bigint::BigInt::from(self.a * self.c)).to_i128()?;
        let ym = (y % num_bigint::BigInt::from(self.a * self.c)).to_i128()?;
        let r = self.reduce(xm, ym);
        Some(self.mul(r, self.reduce(inv, 0)))
    }

    pub fn to_elem(&self, r: Residue) -> QuadElem {
        QuadElem::from_ints(self.delta as i64, r.0, r.1)
    }

    /// All residues, x-coordinate fastest.
    pub fn residues(&self) -> impl Iterator<Item = Residue> + '_ {
        (0..self.c).flat_map(move |y| (0..self.a).map(move |x| (x as i64, y as i64)))
    }
}

/// Reduction o -> o/P = F_q for a prime P.
#[derive(Debug, Clone, Copy)]
struct ResidueField {
    p: i128,
    /// w = -b mod P for degree one primes
    b: i128,
    inert: bool,
    delta: i128,
    nw: i128,
}

impl ResidueField {
    fn new(prime: &QIdeal) -> Self {
        let d = prime.delta() as i128;
        let p = prime.prime_below() as i128;
        ResidueField { p, b: prime.b() as i128, inert: prime.residue_degree() == 2, delta: d, nw: (d * d - d) / 4 }
    }

    fn q(&self) -> u64 {
        if self.inert {
            (self.p * self.p) as u64
        } else {
            self.p as u64
        }
    }

    fn of(&self, x: i128, y: i128) -> Residue {
        if self.inert {
            (x.rem_euclid(self.p) as i64, y.rem_euclid(self.p) as i64)
        } else {
            ((x - self.b * y).rem_euclid(self.p) as i64, 0)
        }
    }

    fn mul(&self, u: Residue, v: Residue) -> Residue {
        let (x1, y1) = (u.0 as i128, u.1 as i128);
        let (x2, y2) = (v.0 as i128, v.1 as i128);
        if self.inert {
            let yy = y1 * y2;
            self.of(x1 * x2 - self.nw * yy, x1 * y2 + x2 * y1 + self.delta * yy)
        } else {
            ((x1 * x2).rem_euclid(self.p) as i64, 0)
        }
    }

    fn pow(&self, u: Residue, e: u64) -> Residue {
        arith::pow_generic(&u, e, &(1, 0), &|a: &Residue, b: &Residue| self.mul(*a, *b))
    }

    fn elements(&self) -> Vec<Residue> {
        let p = self.p as i64;
        if self.inert {
            (0..p).flat_map(|y| (0..p).map(move |x| (x, y))).collect()
        } else {
            (0..p).map(|x| (x, 0)).collect()
        }
    }

    /// Smallest generator of F_q^x in the order of `elements`.
    fn generator(&self) -> Residue {
        let q = self.q();
        let ls: Vec<u64> = arith::factorize((q - 1) as i64).into_iter().map(|(l, _)| l as u64).collect();
        self.elements()
            .into_iter()
            .filter(|&z| z != (0, 0))
            .find(|&z| ls.iter().all(|&l| self.pow(z, (q - 1) / l) != (1, 0)))
            .expect("F_q^x is cyclic")
    }
}

/// The factor of (o/m)^x at one prime power P^e.
#[derive(Debug, Clone)]
struct LocalPart {
    e: u32,
    ring: ResidueRing,
    field: ResidueField,
    p: i64,
    /// N(pi) = p^v * u
    v: u32,
    u_inv: i64,
    pi_conj: Residue,
    /// generator of F_q^x, its Teichmuller lift and inverse of the lift
    h: Residue,
    teich: Residue,
    teich_inv: Residue,
    /// filtration generators 1 + pi^k u_j and their inverses, level-major
    fil: Vec<Residue>,
    fil_inv: Vec<Residue>,
    /// SNF data: coordinates = digits * v mod d
    snf_v: Vec<Vec<i128>>,
    snf_d: Vec<u64>,
    /// generators of the nontrivial SNF factors (index into snf_d, residue)
    one_unit_gens: Vec<(usize, Residue)>,
}

impl LocalPart {
    fn new(prime: QIdeal, e: u32) -> Self {
        let pe = prime.pow(e);
        let ring = ResidueRing::new(&pe);
        let field = ResidueField::new(&prime);
        let p = prime.prime_below();
        let f = prime.residue_degree();
        let (pi, v) = uniformiser(&prime);
        let np = pi.norm().to_integer().to_i64().expect("small norm");
        let u = np / p.pow(v);
        let u_inv = arith::mod_inv(u.rem_euclid(p), p).expect("unit part");
        let pic = pi.conj();
        let (pcx, pcy) = pic.to_i64_pair().expect("integral");
        let (pix, piy) = pi.to_i64_pair().expect("integral");
        let q = field.q();
        let h = field.generator();
        let teich = ring.pow(ring.reduce(h.0 as i128, h.1 as i128), q.pow(e - 1));
        let teich_inv = ring.pow(teich, q - 2 + u64::from(q == 2));
        let pi_r = ring.reduce(pix as i128, piy as i128);
        let basis: Vec<Residue> = if f == 2 { vec![(1, 0), (0, 1)] } else { vec![(1, 0)] };
        let unit_order = q.pow(e - 1);
        let mut fil = Vec::new();
        let mut fil_inv = Vec::new();
        for k in 1..e {
            let pk = ring.pow(pi_r, k as u64);
            for uj in &basis {
                let t = ring.mul(pk, ring.reduce(uj.0 as i128, uj.1 as i128));
                let g = ring.reduce(t.0 as i128 + 1, t.1 as i128);
                fil.push(g);
                fil_inv.push(ring.pow(g, unit_order - 1));
            }
        }
        let mut lp = LocalPart {
            e,
            ring,
            field,
            p,
            v,
            u_inv,
            pi_conj: (pcx, pcy),
            h,
            teich,
            teich_inv,
            fil,
            fil_inv,
            snf_v: Vec::new(),
            snf_d: Vec::new(),
            one_unit_gens: Vec::new(),
        };
        lp.build_snf();
        lp
    }

    fn f(&self) -> usize {
        if self.field.inert {
            2
        } else {
            1
        }
    }

    /// Digits of z in 1 + P^k at level k: coordinates of (z - 1) / pi^k mod P.
    fn level_digits(&self, z: Residue, k: u32) -> Vec<i64> {
        let p = self.p as i128;
        let vk = self.v * k;
        let modulus = p.pow(vk + 1);
        let red = |x: i128| x.rem_euclid(modulus);
        // exact multiplication modulo p^(vk+1) coordinatewise
        let mulm = |a: (i128, i128), b: (i128, i128)| {
            let yy = red(a.1 * b.1);
            (
                red(red(a.0 * b.0) - red(self.field.nw * yy)),
                red(red(a.0 * b.1) + red(a.1 * b.0) + red(self.field.delta * yy)),
            )
        };
        let mut acc = (red(z.0 as i128 - 1), red(z.1 as i128));
        let pc = (red(self.pi_conj.0 as i128), red(self.pi_conj.1 as i128));
        for _ in 0..k {
            acc = mulm(acc, pc);
        }
        let div = p.pow(vk);
        debug_assert!(acc.0 % div == 0 && acc.1 % div == 0);
        let w = (acc.0 / div, acc.1 / div);
        let r = self.field.of(w.0, w.1);
        let s = arith::mod_pow(self.u_inv, k as u64, self.p);
        let r = self.field.mul(r, (s, 0));
        if self.field.inert {
            vec![r.0, r.1]
        } else {
            vec![r.0]
        }
    }

    /// Digit vector of z in 1 + P with respect to the filtration generators.
    fn digits(&self, mut z: Residue) -> Vec<i64> {
        let f = self.f();
        let mut out = Vec::with_capacity(self.fil.len());
        for k in 1..self.e {
            let ds = self.level_digits(z, k);
            for (j, &c) in ds.iter().enumerate() {
                let idx = (k as usize - 1) * f + j;
                if c != 0 {
                    z = self.ring.mul(z, self.ring.pow(self.fil_inv[idx], c as u64));
                }
            }
            out.extend(ds);
        }
        debug_assert!(self.ring.is_one(z));
        out
    }

    fn build_snf(&mut self) {
        let n = self.fil.len();
        if n == 0 {
            return;
        }
        let p = self.p as i128;
        let mut rel = vec![vec![0i128; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            let gp = self.ring.pow(self.fil[i], self.p as u64);
            let ds = self.digits(gp);
            for (j, d) in ds.iter().enumerate() {
                row[j] = -(*d as i128);
            }
            row[i] += p;
        }
        let (_u, d, v) = smith_normal_form(&rel);
        let vinv = unimodular_inverse(&v);
        let group_order = self.field.q().pow(self.e - 1) as i128;
        self.snf_d = (0..n).map(|i| d[i][i].unsigned_abs() as u64).collect();
        for i in 0..n {
            if self.snf_d[i] <= 1 {
                continue;
            }
            let mut g = self.ring.one();
            for j in 0..n {
                let ex = vinv[i][j].rem_euclid(group_order) as u64;
                if ex != 0 {
                    g = self.ring.mul(g, self.ring.pow(self.fil[j], ex));
                }
            }
            self.one_unit_gens.push((i, g));
        }
        self.snf_v = v;
    }

    fn has_teich(&self) -> bool {
        self.field.q() > 2
    }

    /// Orders of the local factors: Teichmuller first, then one-unit factors.
    fn orders(&self) -> Vec<u64> {
        let mut out = Vec::new();
        if self.has_teich() {
            out.push(self.field.q() - 1);
        }
        out.extend(self.one_unit_gens.iter().map(|&(i, _)| self.snf_d[i]));
        out
    }

    fn generators(&self) -> Vec<Residue> {
        let mut out = Vec::new();
        if self.has_teich() {
            out.push(self.teich);
        }
        out.extend(self.one_unit_gens.iter().map(|&(_, g)| g));
        out
    }

    fn is_unit(&self, x: i128, y: i128) -> bool {
        self.field.of(x, y) != (0, 0)
    }

    fn dlog(&self, z: Residue) -> Vec<u64> {
        let z = self.ring.reduce(z.0 as i128, z.1 as i128);
        let mut out = Vec::new();
        let mut z1 = z;
        if self.has_teich() {
            let q = self.field.q();
            let r = self.field.of(z.0 as i128, z.1 as i128);
            let a = arith::bsgs(&self.h, &r, q - 1, &(1, 0), |x: &Residue, y: &Residue| self.field.mul(*x, *y), |x| *x)
                .expect("residue is a power of the generator");
            out.push(a);
            z1 = self.ring.mul(z, self.ring.pow(self.teich_inv, a));
        }
        if !self.one_unit_gens.is_empty() {
            let ds = self.digits(z1);
            let n = ds.len();
            for &(i, _) in &self.one_unit_gens {
                let mut c: i128 = 0;
                for (j, d) in ds.iter().enumerate().take(n) {
                    c += (*d as i128) * self.snf_v[j][i];
                }
                out.push(c.rem_euclid(self.snf_d[i] as i128) as u64);
            }
        }
        out
    }
}

/// An element of P \ P^2 (or p for inert P), with v = v_p(N(pi)).
fn uniformiser(prime: &QIdeal) -> (QuadElem, u32) {
    let field = prime.field();
    let p = prime.prime_below();
    if prime.residue_degree() == 2 {
        return (field.int(p), 2);
    }
    let b = prime.b();
    let cand = field.elem(b, 1);
    let n = cand.norm().to_integer().to_i64().expect("small");
    if n % (p * p) != 0 || prime.conj() == *prime {
        (cand, 1)
    } else {
        (field.elem(b + p, 1), 1)
    }
}

/// Description of the image of (Z/M)^x in (o/m)^x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalImage {
    /// M
    pub modulus: i64,
    /// generators of (Z/M)^x and their discrete logs in (o/m)^x
    pub generators: Vec<i64>,
    pub dlogs: Vec<Vec<u64>>,
    /// order of the image subgroup
    pub image_order: u64,
    pub injective: bool,
}

/// Cyclic decomposition of (o/m)^x with explicit generators.
#[derive(Debug, Clone)]
pub struct UnitsStructure {
    field: FieldE,
    modulus: QIdeal,
    ring: ResidueRing,
    locals: Vec<LocalPart>,
    /// (generator residue mod m, order); trivial factors omitted
    pub factors: Vec<(Residue, u64)>,
    pub total_order: u64,
    /// roots of unity u of E with u = 1 mod m
    pub torsion_meet: Vec<QuadElem>,
}

impl UnitsStructure {
    pub fn new(field: FieldE, m: &QIdeal) -> Result<Self> {
        if !m.is_integral() {
            return Err(Error::NotIntegral);
        }
        let ring = ResidueRing::new(m);
        let fac = m.factor();
        let locals: Vec<LocalPart> = fac.iter().map(|(p, e)| LocalPart::new(*p, *e as u32)).collect();
        let mut idempotents = Vec::new();
        for (i, (p, e)) in fac.iter().enumerate() {
            if fac.len() == 1 {
                idempotents.push(ring.one());
                continue;
            }
            let j = p.pow(*e as u32);
            let rest = fac
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .fold(QIdeal::unit(field), |acc, (_, (q, f))| acc.mul(&q.pow(*f as u32)));
            idempotents.push(ring.reduce_pair(crt_idempotent(&rest, &j)));
        }
        let mut factors = Vec::new();
        for (lp, id) in locals.iter().zip(&idempotents) {
            for (g, o) in lp.generators().into_iter().zip(lp.orders()) {
                if o <= 1 {
                    continue;
                }
                // 1 + id (g - 1)
                let gm = ring.reduce(g.0 as i128 - 1, g.1 as i128);
                let t = ring.mul(gm, *id);
                factors.push((ring.reduce(t.0 as i128 + 1, t.1 as i128), o));
            }
        }
        let total_order = factors.iter().map(|f| f.1).product();
        let torsion_meet = field
            .units()
            .into_iter()
            .filter(|u| {
                let r = ring.from_elem(u).expect("units are integral");
                ring.is_one(r)
            })
            .collect();
        Ok(UnitsStructure { field, modulus: *m, ring, locals, factors, total_order, torsion_meet })
    }

    pub fn field(&self) -> FieldE {
        self.field
    }

    pub fn modulus(&self) -> &QIdeal {
        &self.modulus
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    pub fn orders(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.1).collect()
    }

    pub fn generators(&self) -> Vec<QuadElem> {
        self.factors.iter().map(|f| self.ring.to_elem(f.0)).collect()
    }

    /// Group exponent.
    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1u64, |acc, f| acc.lcm(&f.1))
    }

    /// Invariant factors d_1 | d_2 | ... (trivial ones omitted).
    pub fn invariants(&self) -> Vec<u64> {
        invariant_factors(&self.orders())
    }

    pub fn is_unit_residue(&self, r: Residue) -> bool {
        self.locals.iter().all(|lp| lp.is_unit(r.0 as i128, r.1 as i128))
    }

    pub fn residue(&self, z: &QuadElem) -> Option<Residue> {
        self.ring.from_elem(z)
    }

    /// Exponent vector of z on the generators.
    pub fn dlog(&self, z: &QuadElem) -> Result<Vec<u64>> {
        let r = self.ring.from_elem(z).ok_or(Error::NotAUnit)?;
        self.dlog_residue(r)
    }

    pub fn dlog_residue(&self, r: Residue) -> Result<Vec<u64>> {
        if !self.is_unit_residue(r) {
            return Err(Error::NotAUnit);
        }
        let mut out = Vec::with_capacity(self.factors.len());
        for lp in &self.locals {
            let orders = lp.orders();
            for (c, o) in lp.dlog(r).into_iter().zip(orders) {
                if o > 1 {
                    out.push(c);
                }
            }
        }
        Ok(out)
    }

    /// Product of generators with the given exponents.
    pub fn rebuild(&self, exps: &[u64]) -> Residue {
        let mut acc = self.ring.one();
        for (&(g, o), &e) in self.factors.iter().zip(exps) {
            acc = self.ring.mul(acc, self.ring.pow(g, e % o));
        }
        acc
    }

    /// Image of (Z/M)^x for M = N(m).
    pub fn rational_image(&self) -> RationalImage {
        self.rational_image_mod(self.ring.size() as i64)
    }

    /// Image of the integers prime to n; `injective` says whether the image in
    /// (o/m)^x determines the class mod n.
    pub fn rational_image_mod(&self, n: i64) -> RationalImage {
        let a = self.ring.rational_generator();
        let big = arith::lcm(n.max(1), a.max(1));
        let generators = zmod_unit_generators(big);
        let dlogs: Vec<Vec<u64>> = generators
            .iter()
            .map(|&g| self.dlog_residue(self.ring.reduce(g as i128, 0)).expect("coprime integer"))
            .collect();
        let image_order = subgroup_order(&self.orders(), &dlogs);
        RationalImage { modulus: n, generators, dlogs, image_order, injective: n <= 1 || a % n == 0 }
    }

    /// All unit residues, by brute force.
    pub fn brute_force_units(&self) -> Vec<Residue> {
        self.ring.residues().filter(|&r| self.is_unit_residue(r)).collect()
    }
}

impl ResidueRing {
    fn reduce_pair(&self, v: (i128, i128)) -> Residue {
        self.reduce(v.0, v.1)
    }
}

/// e in I with 1 - e in J, for coprime integral ideals I, J.
fn crt_idempotent(i: &QIdeal, j: &QIdeal) -> (i128, i128) {
    let (ia, ib, ic) = i.hnf();
    let (ja, jb, jc) = j.hnf();
    let cols = [(ia as i128, 0i128), (ib as i128, ic as i128), (ja as i128, 0), (jb as i128, jc as i128)];
    let m = vec![cols.iter().map(|c| c.0).collect::<Vec<_>>(), cols.iter().map(|c| c.1).collect::<Vec<_>>()];
    let (u, d, v) = smith_normal_form(&m);
    // M c = (1, 0): w = (U t) / d, c = V w
    let ut = [u[0][0], u[1][0]];
    let w = [ut[0] / d[0][0], ut[1] / d[1][1]];
    debug_assert_eq!(d[0][0].abs() * d[1][1].abs(), 1);
    let c: Vec<i128> = (0..4).map(|k| v[k][0] * w[0] + v[k][1] * w[1]).collect();
    (c[0] * cols[0].0 + c[1] * cols[1].0, c[1] * cols[1].1)
}

/// Generators of (Z/n)^x, one per cyclic factor of the CRT decomposition.
pub fn zmod_unit_generators(n: i64) -> Vec<i64> {
    zmod_units(n).into_iter().map(|(g, _)| g).collect()
}

/// Per prime power p^e of n: local generators mod p^e with their orders.
fn zmod_components(n: i64) -> Vec<(i64, u32, Vec<(i64, u64)>)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    for (p, e) in arith::factorize(n) {
        let pe = p.pow(e);
        let mut local = Vec::new();
        if p == 2 {
            if e >= 2 {
                local.push((pe - 1, 2));
            }
            if e >= 3 {
                local.push((5, 1u64 << (e - 2)));
            }
        } else {
            let phi = (pe / p * (p - 1)) as u64;
            let ls: Vec<u64> = arith::factorize(phi as i64).into_iter().map(|(l, _)| l as u64).collect();
            let g = (2..pe)
                .find(|&g| g % p != 0 && ls.iter().all(|&l| arith::mod_pow(g, phi / l, pe) != 1))
                .expect("primitive root");
            local.push((g, phi));
        }
        out.push((p, e, local));
    }
    out
}

/// (generator, order) pairs for (Z/n)^x: a primitive root for each odd prime
/// power and -1, 5 for powers of two, each lifted to be 1 at the other primes.
pub fn zmod_units(n: i64) -> Vec<(i64, u64)> {
    let mut out = Vec::new();
    for (p, e, local) in zmod_components(n) {
        let pe = p.pow(e);
        let rest = n / pe;
        for (g, o) in local {
            let lifted = if rest == 1 {
                g
            } else {
                let inv = arith::mod_inv(rest % pe, pe).expect("coprime");
                let t = ((g - 1).rem_euclid(pe) as i128 * inv as i128 % pe as i128) as i64;
                (1 + t * rest).rem_euclid(n)
            };
            out.push((lifted, o));
        }
    }
    out
}

/// Discrete log in (Z/n)^x with respect to `zmod_units(n)`.
pub fn zmod_dlog(n: i64, a: i64) -> Option<Vec<u64>> {
    let a = a.rem_euclid(n.max(1));
    if arith::gcd(a, n) != 1 {
        return None;
    }
    let mut out = Vec::new();
    for (p, e, local) in zmod_components(n) {
        let pe = p.pow(e);
        let ar = a % pe;
        let mul = |x: &i64, y: &i64| ((*x as i128 * *y as i128) % pe as i128) as i64;
        if p == 2 {
            if e == 1 {
                continue;
            }
            let s = u64::from(ar % 4 != 1);
            out.push(s);
            if e >= 3 {
                let t = if s == 1 { pe - ar } else { ar };
                out.push(arith::bsgs(&5i64, &t, 1u64 << (e - 2), &1i64, mul, |x| *x)?);
            }
        } else {
            let (g, o) = local[0];
            out.push(arith::bsgs(&g, &ar, o, &1i64, mul, |x| *x)?);
        }
    }
    Some(out)
}

/// Order of the subgroup of prod Z/orders generated by `vectors`.
pub fn subgroup_order(orders: &[u64], vectors: &[Vec<u64>]) -> u64 {
    let n = orders.len();
    if n == 0 {
        return 1;
    }
    let total: u64 = orders.iter().product();
    let mut rows: Vec<Vec<i128>> = vectors.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
    for (i, &o) in orders.iter().enumerate() {
        let mut r = vec![0i128; n];
        r[i] = o as i128;
        rows.push(r);
    }
    let (_, d, _) = smith_normal_form(&rows);
    let quotient: u64 = (0..n).map(|i| d[i][i].unsigned_abs() as u64).product();
    total / quotient
}

/// Invariant factors of a product of cyclic groups.
pub fn invariant_factors(orders: &[u64]) -> Vec<u64> {
    let n = orders.len();
    if n == 0 {
        return Vec::new();
    }
    let mut m = vec![vec![0i128; n]; n];
    for (i, &o) in orders.iter().enumerate() {
        m[i][i] = o as i128;
    }
    let (_, d, _) = smith_normal_form(&m);
    let mut out: Vec<u64> = (0..n).map(|i| d[i][i].unsigned_abs() as u64).filter(|&x| x > 1).collect();
    out.sort();
    out
}

/// p-primary invariants (sorted ascending) of a finite abelian group given by
/// the counts c_k = #{g : g^(p^k) = 1}, k = 0, 1, ....
pub fn primary_invariants_from_counts(p: u64, counts: &[u64]) -> Vec<u64> {
    // number of cyclic factors of order >= p^k is log_p(c_k / c_{k-1})
    let mut ge: Vec<u32> = Vec::new();
    for k in 1..counts.len() {
        let mut r = counts[k] / counts[k - 1];
        let mut t = 0;
        while r > 1 {
            r /= p;
            t += 1;
        }
        ge.push(t);
    }
    let mut out = Vec::new();
    for k in 0..ge.len() {
        let next = ge.get(k + 1).copied().unwrap_or(0);
        for _ in 0..ge[k].saturating_sub(next) {
            out.push(p.pow(k as u32 + 1));
        }
    }
    out.sort();
    out
}

/// Brute-force p-primary structure of (o/m)^x from element orders.
pub fn brute_force_primary(s: &UnitsStructure, p: u64) -> Vec<u64> {
    let ring = s.ring();
    let units = s.brute_force_units();
    let mut max_k = 0;
    let mut hist: HashMap<u32, u64> = HashMap::new();
    let total = units.len() as u64;
    let mut cofactor = total;
    while cofactor % p == 0 {
        cofactor /= p;
    }
    for u in units {
        // p-part of u: u^cofactor, then count squarings until 1
        let mut x = ring.pow(u, cofactor);
        let mut k = 0;
        while !ring.is_one(x) {
            x = ring.pow(x, p);
            k += 1;
        }
        max_k = max_k.max(k);
        *hist.entry(k).or_insert(0) += 1;
    }
    let mut counts = Vec::new();
    let mut acc = 0;
    for k in 0..=max_k {
        acc += hist.get(&k).copied().unwrap_or(0);
        counts.push(acc);
    }
    primary_invariants_from_counts(p, &counts)
}

/// p-primary invariants of a product of cyclic groups.
pub fn primary_part(orders: &[u64], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = orders
        .iter()
        .map(|&o| {
            let mut q = 1;
            let mut o = o;
            while o % p == 0 {
                o /= p;
                q *= p;
            }
            q
        })
        .filter(|&q| q > 1)
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::primes_above;

    fn brute_unit_count(s: &UnitsStructure) -> u64 {
        s.brute_force_units().len() as u64
    }

    #[test]
    fn orders_match_brute_force() {
        for d in [-3i64, -4, -7, -8, -15, -20, -24, -163] {
            let e = FieldE::new(d).unwrap();
            for n in 1..=30i64 {
                let m = QIdeal::from_int(e, n);
                let s = UnitsStructure::new(e, &m).unwrap();
                assert_eq!(s.total_order, brute_unit_count(&s), "d={d} n={n}");
            }
            for p in [2i64, 3, 5, 7] {
                for pp in primes_above(e, p) {
                    for k in 1..=4 {
                        let m = pp.pow(k);
                        let s = UnitsStructure::new(e, &m).unwrap();
                        assert_eq!(s.total_order, brute_unit_count(&s));
                    }
                }
            }
        }
    }

    #[test]
    fn generators_have_stated_orders_and_dlog_round_trips() {
        for d in [-4i64, -15, -24, -35] {
            let e = FieldE::new(d).unwrap();
            for n in [4i64, 9, 12, 35, 40] {
                let m = QIdeal::from_int(e, n);
                let s = UnitsStructure::new(e, &m).unwrap();
                let ring = s.ring();
                for &(g, o) in &s.factors {
                    assert!(ring.is_one(ring.pow(g, o)));
                    for (l, _) in arith::factorize(o as i64) {
                        assert!(!ring.is_one(ring.pow(g, o / l as u64)));
                    }
                }
                for u in s.brute_force_units().into_iter().take(300) {
                    let v = s.dlog_residue(u).unwrap();
                    assert_eq!(s.rebuild(&v), u);
                }
            }
        }
    }

    #[test]
    fn odd_different_matches_rational_units() {
        let e = FieldE::new(-35).unwrap();
        let m = QIdeal::principal(&e.sqrt_delta()).unwrap();
        let s = UnitsStructure::new(e, &m).unwrap();
        assert_eq!(s.invariants(), invariant_factors(&[4, 6]));
        let img = s.rational_image();
        assert!(img.injective);
        assert_eq!(img.image_order, s.total_order);
        // theta = (1 + sqrt(-35)) / 2 = 18 + w is 18 mod sqrt(-35)
        let theta = e.elem(18, 1);
        assert_eq!(s.dlog(&theta).unwrap(), s.dlog(&e.int(18)).unwrap());
        assert_eq!(arith::kronecker(-35, 18), -1);
    }

    #[test]
    fn dyadic_injectivity() {
        let e = FieldE::new(-4).unwrap();
        let p = primes_above(e, 2)[0];
        for j in 1..=6 {
            let s = UnitsStructure::new(e, &p.pow(j)).unwrap();
            assert_eq!(s.rational_image_mod(4).injective, j >= 3, "j={j}");
        }
        let e = FieldE::new(-8).unwrap();
        let p = primes_above(e, 2)[0];
        for j in 1..=8 {
            let s = UnitsStructure::new(e, &p.pow(j)).unwrap();
            assert_eq!(s.rational_image_mod(8).injective, j >= 5, "j={j}");
        }
    }

    #[test]
    fn inert_two_cubed() {
        let e = FieldE::new(-3).unwrap();
        let s = UnitsStructure::new(e, &QIdeal::from_int(e, 8)).unwrap();
        assert_eq!(s.total_order, 48);
        let mut inv = primary_part(&s.orders(), 2);
        inv.extend(primary_part(&s.orders(), 3));
        inv.sort();
        assert_eq!(inv, vec![2, 2, 3, 4]);
    }

    #[test]
    fn torsion_meet_cases() {
        let e = FieldE::new(-3).unwrap();
        let s = UnitsStructure::new(e, &QIdeal::from_int(e, 3)).unwrap();
        assert_eq!(s.torsion_meet.len(), 1);
        let s = UnitsStructure::new(e, &QIdeal::principal(&e.sqrt_delta()).unwrap()).unwrap();
        assert!(s.torsion_meet.len() > 1);
        let e = FieldE::new(-23).unwrap();
        let s = UnitsStructure::new(e, &QIdeal::from_int(e, 15)).unwrap();
        assert_eq!(s.torsion_meet.len(), 1);
    }

    #[test]
    fn zmod_dlog_round_trip() {
        for n in [3i64, 4, 8, 15, 16, 20, 45, 63, 100, 163] {
            let gens = zmod_units(n);
            for a in 1..n {
                if arith::gcd(a, n) != 1 {
                    continue;
                }
                let v = zmod_dlog(n, a).unwrap();
                let mut acc = 1i64;
                for ((g, _), e) in gens.iter().zip(&v) {
                    acc = acc * arith::mod_pow(*g, *e, n) % n;
                }
                assert_eq!(acc, a % n, "n={n} a={a}");
            }
        }
    }
}
