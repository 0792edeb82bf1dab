//! Characters of finite abelian groups with exact root-of-unity values.
//!
//! A value exp(2 pi i c / n) is stored as the angle c/n mod 1.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::quadfield::{FieldE, QIdeal, QuadElem};
use crate::resunits::{zmod_dlog, zmod_units, Residue, UnitsStructure};

/// A root of unity exp(2 pi i t), t in [0, 1).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Angle(Ratio<i64>);

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({})", self.0)
    }
}

impl Angle {
    pub fn new(num: i64, den: i64) -> Self {
        let r = Ratio::new(num.rem_euclid(den), den);
        Angle(r)
    }

    pub fn zero() -> Self {
        Angle(Ratio::zero())
    }

    pub fn half() -> Self {
        Angle::new(1, 2)
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Multiplicative order of the root of unity.
    pub fn order(&self) -> u64 {
        *self.0.denom() as u64
    }

    /// +1 / -1 for angles 0 and 1/2.
    pub fn as_sign(&self) -> Option<i32> {
        if self.is_zero() {
            Some(1)
        } else if *self == Angle::half() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn from_sign(s: i32) -> Self {
        if s < 0 {
            Angle::half()
        } else {
            Angle::zero()
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let t = 2.0 * std::f64::consts::PI * (*self.0.numer() as f64) / (*self.0.denom() as f64);
        Complex64::new(t.cos(), t.sin())
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, o: Angle) -> Angle {
        let s = self.0 + o.0;
        Angle(s - Ratio::from_integer(s.floor().to_integer()))
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        if self.is_zero() {
            self
        } else {
            Angle(Ratio::one() - self.0)
        }
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, o: Angle) -> Angle {
        self + (-o)
    }
}

impl Mul<i64> for Angle {
    type Output = Angle;
    fn mul(self, k: i64) -> Angle {
        Angle::new(self.numer() * k.rem_euclid(self.denom()), self.denom())
    }
}

/// A character of (o/m)^x given by exponents on the generators of a structure.
#[derive(Clone)]
pub struct GroupChar {
    structure: Arc<UnitsStructure>,
    exps: Vec<u64>,
}

impl fmt::Debug for GroupChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupChar(m={:?}, exps={:?}, orders={:?})", self.structure.modulus(), self.exps, self.structure.orders())
    }
}

impl PartialEq for GroupChar {
    fn eq(&self, o: &Self) -> bool {
        self.structure.modulus() == o.structure.modulus() && self.exps == o.exps
    }
}

impl Eq for GroupChar {}

impl GroupChar {
    pub fn new(structure: Arc<UnitsStructure>, exps: Vec<u64>) -> Result<Self> {
        let orders = structure.orders();
        if exps.len() != orders.len() {
            return Err(Error::InvalidArgument("exponent vector length".into()));
        }
        let exps = exps.iter().zip(&orders).map(|(c, o)| c % o).collect();
        Ok(GroupChar { structure, exps })
    }

    pub fn trivial(structure: Arc<UnitsStructure>) -> Self {
        let n = structure.orders().len();
        GroupChar { structure, exps: vec![0; n] }
    }

    /// The character with prescribed values on the generators.
    pub fn from_generator_values(structure: Arc<UnitsStructure>, values: &[Angle]) -> Result<Self> {
        let orders = structure.orders();
        let mut exps = Vec::with_capacity(orders.len());
        for (v, &o) in values.iter().zip(&orders) {
            let c = v.ratio() * Ratio::from_integer(o as i64);
            if !c.is_integer() {
                return Err(Error::Inconsistent(format!("value {v:?} has order not dividing {o}")));
            }
            exps.push(c.to_integer() as u64);
        }
        GroupChar::new(structure, exps)
    }

    pub fn structure(&self) -> &Arc<UnitsStructure> {
        &self.structure
    }

    pub fn modulus(&self) -> &QIdeal {
        self.structure.modulus()
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn order(&self) -> u64 {
        self.exps
            .iter()
            .zip(self.structure.orders())
            .fold(1u64, |acc, (&c, o)| acc.lcm(&(o / o.gcd(&c))))
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&c| c == 0)
    }

    pub fn value_on_dlog(&self, v: &[u64]) -> Angle {
        let mut acc = Angle::zero();
        for ((&c, &e), o) in self.exps.iter().zip(v).zip(self.structure.orders()) {
            let k = ((c as u128 * e as u128) % o as u128) as i64;
            acc = acc + Angle::new(k, o as i64);
        }
        acc
    }

    pub fn eval_residue(&self, r: Residue) -> Result<Angle> {
        let v = self.structure.dlog_residue(r)?;
        Ok(self.value_on_dlog(&v))
    }

    pub fn eval(&self, z: &QuadElem) -> Result<Angle> {
        let v = self.structure.dlog(z)?;
        Ok(self.value_on_dlog(&v))
    }

    pub fn eval_int(&self, a: i64) -> Result<Angle> {
        let r = self.structure.ring().reduce(a as i128, 0);
        self.eval_residue(r)
    }

    pub fn mul(&self, o: &GroupChar) -> GroupChar {
        assert_eq!(self.modulus(), o.modulus());
        let exps = self
            .exps
            .iter()
            .zip(&o.exps)
            .zip(self.structure.orders())
            .map(|((a, b), d)| (a + b) % d)
            .collect();
        GroupChar { structure: self.structure.clone(), exps }
    }

    pub fn inverse(&self) -> GroupChar {
        let exps = self.exps.iter().zip(self.structure.orders()).map(|(&a, d)| (d - a) % d).collect();
        GroupChar { structure: self.structure.clone(), exps }
    }

    pub fn pow(&self, k: u64) -> GroupChar {
        let exps = self
            .exps
            .iter()
            .zip(self.structure.orders())
            .map(|(&a, d)| ((a as u128 * k as u128) % d as u128) as u64)
            .collect();
        GroupChar { structure: self.structure.clone(), exps }
    }

    pub fn is_trivial_on(&self, elems: &[QuadElem]) -> Result<bool> {
        for z in elems {
            if !self.eval(z)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// eta^Z: the Dirichlet character a -> eta(a mod m) modulo M = N(m).
    pub fn restrict_to_z(&self) -> DirichletChar {
        let m = self.structure.ring().size() as i64;
        DirichletChar::from_fn(m, |a| self.eval_int(a).expect("integer prime to N(m)"))
    }

    /// Whether eta(a) = chi_E(a) for all integers a prime to |Delta| N(m),
    /// checked on generators.
    pub fn restricts_to_kronecker(&self) -> bool {
        let d = self.structure.field().delta();
        let m = self.structure.ring().size() as i64;
        let big = arith::lcm(d.abs(), m.max(1));
        zmod_units(big).iter().all(|&(g, _)| {
            self.eval_int(g).expect("coprime") == Angle::from_sign(arith::kronecker(d, g))
        })
    }

    /// The character a -> eta(a mod m) on (o/m')^x for a multiple m' of m.
    pub fn inflate(&self, big: Arc<UnitsStructure>) -> Result<GroupChar> {
        if !self.modulus().divides(big.modulus()) {
            return Err(Error::InvalidArgument("inflation target is not a multiple".into()));
        }
        let values: Vec<Angle> = big
            .generators()
            .iter()
            .map(|g| self.eval(g))
            .collect::<Result<_>>()?;
        GroupChar::from_generator_values(big, &values)
    }

    /// Whether eta is trivial on the kernel of (o/m)^x -> (o/m')^x.
    pub fn factors_through(&self, small: &QIdeal) -> bool {
        let ring = self.structure.ring();
        let (a, _, c) = self.modulus().hnf();
        let (a2, b2, c2) = small.hnf();
        let (ia, jc) = (a / a2, c / c2);
        // residues of m' mod m: i A' + j (B' + C' w)
        for j in 0..jc.max(1) {
            for i in 0..ia.max(1) {
                let x = i as i128 * a2 as i128 + j as i128 * b2 as i128 + 1;
                let y = j as i128 * c2 as i128;
                let r = ring.reduce(x, y);
                if !self.structure.is_unit_residue(r) {
                    continue;
                }
                if !self.eval_residue(r).expect("unit").is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// The character of (o/m')^x inducing self, for m' | m through which self factors.
    pub fn push_down(&self, small: Arc<UnitsStructure>) -> Result<GroupChar> {
        if !small.modulus().divides(self.modulus()) || !self.factors_through(small.modulus()) {
            return Err(Error::NotExtendable);
        }
        let ring = self.structure.ring();
        let (a2, b2, c2) = small.modulus().hnf();
        let mut values = Vec::new();
        for g in small.factors.iter().map(|f| f.0) {
            // lift g to a unit mod m by adding elements of m'
            let mut found = None;
            'search: for j in 0..64i128 {
                for i in 0..64i128 {
                    let x = g.0 as i128 + i * a2 as i128 + j * b2 as i128;
                    let y = g.1 as i128 + j * c2 as i128;
                    let r = ring.reduce(x, y);
                    if self.structure.is_unit_residue(r) {
                        found = Some(r);
                        break 'search;
                    }
                }
            }
            let r = found.ok_or_else(|| Error::Inconsistent("no unit lift".into()))?;
            values.push(self.eval_residue(r)?);
        }
        GroupChar::from_generator_values(small, &values)
    }

    /// Smallest m' | m such that self factors through (o/m')^x, by descending
    /// prime by prime.
    pub fn conductor(&self) -> QIdeal {
        let field = self.structure.field();
        let mut cur = *self.modulus();
        loop {
            let mut moved = false;
            for (p, _) in cur.factor() {
                let smaller = cur.div(&p);
                if self.factors_through(&smaller) {
                    cur = smaller;
                    moved = true;
                    break;
                }
            }
            if !moved {
                break;
            }
        }
        if cur.is_unit_ideal() {
            QIdeal::unit(field)
        } else {
            cur
        }
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == *self.modulus()
    }
}

/// Order conditions for character enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderConstraint {
    Any,
    Divides(u64),
    Equals(u64),
}

impl OrderConstraint {
    fn bound(&self) -> Option<u64> {
        match *self {
            OrderConstraint::Any => None,
            OrderConstraint::Divides(r) | OrderConstraint::Equals(r) => Some(r),
        }
    }

    pub fn accepts(&self, order: u64) -> bool {
        match *self {
            OrderConstraint::Any => true,
            OrderConstraint::Divides(r) => r % order == 0,
            OrderConstraint::Equals(r) => order == r,
        }
    }
}

/// All characters of the structure subject to the order constraint, in
/// lexicographic order of exponent vectors.
pub fn all_chars(structure: &Arc<UnitsStructure>, constraint: OrderConstraint) -> Vec<GroupChar> {
    let orders = structure.orders();
    // exponent steps: c_i must be a multiple of d_i / gcd(d_i, r)
    let steps: Vec<u64> = orders
        .iter()
        .map(|&d| match constraint.bound() {
            Some(r) => d / d.gcd(&r),
            None => 1,
        })
        .collect();
    let counts: Vec<u64> = orders.iter().zip(&steps).map(|(d, s)| d / s).collect();
    let total: u64 = counts.iter().product();
    let mut out = Vec::new();
    for idx in 0..total {
        let mut rem = idx;
        let mut exps = vec![0u64; orders.len()];
        for i in (0..orders.len()).rev() {
            exps[i] = (rem % counts[i]) * steps[i];
            rem /= counts[i];
        }
        let ch = GroupChar { structure: structure.clone(), exps };
        if constraint.accepts(ch.order()) {
            out.push(ch);
        }
    }
    out
}

/// Modulus characters eta on (o/m)^x trivial on the torsion meet with
/// eta^Z = chi_E; if `weight` is given, also eta(u) = u^(-weight) on mu_E.
pub fn enumerate_eta(structure: &Arc<UnitsStructure>, constraint: OrderConstraint, weight: Option<u32>) -> Vec<GroupChar> {
    let field = structure.field();
    let units = field.units();
    let w = field.mu_order() as i64;
    all_chars(structure, constraint)
        .into_iter()
        .filter(|eta| eta.is_trivial_on(&structure.torsion_meet).unwrap_or(false))
        .filter(|eta| eta.restricts_to_kronecker())
        .filter(|eta| match weight {
            None => true,
            Some(l) => units.iter().enumerate().all(|(k, u)| {
                // u = g^k with g of order w; u^(-l) has angle -k l / w
                eta.eval(u).map(|a| a == Angle::new(-(k as i64) * l as i64, w)).unwrap_or(false)
            }),
        })
        .collect()
}

/// Convenience: structure and enumeration in one step.
pub fn enumerate_eta_for(field: FieldE, m: &QIdeal, constraint: OrderConstraint, weight: Option<u32>) -> Result<Vec<GroupChar>> {
    let s = Arc::new(UnitsStructure::new(field, m)?);
    Ok(enumerate_eta(&s, constraint, weight))
}

/// A Dirichlet character mod q, by exponents on `zmod_units(q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirichletChar {
    modulus: i64,
    exps: Vec<u64>,
}

impl DirichletChar {
    pub fn trivial(q: i64) -> Self {
        DirichletChar { modulus: q.max(1), exps: vec![0; zmod_units(q.max(1)).len()] }
    }

    pub fn from_fn<F: Fn(i64) -> Angle>(q: i64, f: F) -> Self {
        let q = q.max(1);
        let exps = zmod_units(q)
            .iter()
            .map(|&(g, o)| {
                let c = f(g).ratio() * Ratio::from_integer(o as i64);
                assert!(c.is_integer(), "value order does not divide generator order");
                c.to_integer() as u64
            })
            .collect();
        DirichletChar { modulus: q, exps }
    }

    /// a -> (d / a) for a fundamental discriminant d, modulo |d|.
    pub fn kronecker(d: i64) -> Self {
        DirichletChar::from_fn(d.abs(), |a| Angle::from_sign(arith::kronecker(d, a)))
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn orders(&self) -> Vec<u64> {
        zmod_units(self.modulus).iter().map(|g| g.1).collect()
    }

    /// None when gcd(a, q) > 1.
    pub fn eval(&self, a: i64) -> Option<Angle> {
        if self.modulus == 1 {
            return Some(Angle::zero());
        }
        let v = zmod_dlog(self.modulus, a)?;
        let mut acc = Angle::zero();
        for ((&c, e), o) in self.exps.iter().zip(v).zip(self.orders()) {
            acc = acc + Angle::new(((c as u128 * e as u128) % o as u128) as i64, o as i64);
        }
        Some(acc)
    }

    /// Value as an integer for quadratic characters; 0 off the unit group.
    pub fn eval_sign(&self, a: i64) -> i32 {
        match self.eval(a) {
            None => 0,
            Some(t) => t.as_sign().expect("quadratic character"),
        }
    }

    pub fn order(&self) -> u64 {
        self.exps.iter().zip(self.orders()).fold(1u64, |acc, (&c, o)| acc.lcm(&(o / o.gcd(&c))))
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&c| c == 0)
    }

    /// The same character viewed modulo a multiple of the modulus.
    pub fn lift(&self, q: i64) -> Self {
        assert_eq!(q % self.modulus, 0);
        DirichletChar::from_fn(q, |a| self.eval(a).expect("coprime"))
    }

    pub fn mul(&self, o: &DirichletChar) -> DirichletChar {
        let q = arith::lcm(self.modulus, o.modulus);
        DirichletChar::from_fn(q, |a| self.eval(a).unwrap() + o.eval(a).unwrap())
    }

    /// Equality as characters on integers prime to both moduli.
    pub fn same_as(&self, o: &DirichletChar) -> bool {
        let q = arith::lcm(self.modulus, o.modulus);
        zmod_units(q).iter().all(|&(g, _)| self.eval(g) == o.eval(g))
    }

    pub fn conductor(&self) -> i64 {
        let q = self.modulus;
        let mut f = q;
        loop {
            let mut moved = false;
            for (p, _) in arith::factorize(f) {
                let g = f / p;
                // trivial on {a = 1 mod g}
                let ok = (0..q / g).all(|k| {
                    let a = 1 + k * g;
                    arith::gcd(a, q) != 1 || self.eval(a).unwrap().is_zero()
                });
                if ok {
                    f = g;
                    moved = true;
                    break;
                }
            }
            if !moved {
                return f;
            }
        }
    }

    /// The primitive character inducing self.
    pub fn primitive(&self) -> DirichletChar {
        let f = self.conductor();
        DirichletChar::from_fn(f, |a| {
            // any lift of a mod f prime to the modulus
            let mut b = a;
            while arith::gcd(b, self.modulus) != 1 {
                b += f;
            }
            self.eval(b).unwrap()
        })
    }
}

/// All quadratic Dirichlet characters (including the trivial one) whose
/// conductor is supported on `support`, each modulo its conductor, sorted by
/// (conductor, values).
pub fn quad_dirichlet_chars(support: &[i64]) -> Vec<DirichletChar> {
    let mut basics: Vec<Vec<i64>> = Vec::new();
    for &p in support {
        if p == 2 {
            basics.push(vec![-4, 8, -8]);
        } else if p > 2 {
            let pstar = if p % 4 == 1 { p } else { -p };
            basics.push(vec![pstar]);
        }
    }
    let mut discs: Vec<i64> = vec![1];
    for opts in &basics {
        let mut next = discs.clone();
        for &d in &discs {
            for &o in opts {
                next.push(d * o);
            }
        }
        discs = next;
    }
    let mut out: Vec<DirichletChar> = discs
        .into_iter()
        .map(|d| if d == 1 { DirichletChar::trivial(1) } else { DirichletChar::kronecker(d) })
        .collect();
    out.sort_by_key(|c| (c.modulus, c.exps.clone()));
    out
}
