use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::elem::{FieldE, QuadElem, SplitType};
use super::ideal::{primes_above, QIdeal};
use crate::arith;
use crate::error::{Error, Result};

/// Positive definite binary quadratic form a x^2 + b x y + c y^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Form {
    pub fn disc(&self) -> i64 {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        i64::try_from(b * b - 4 * a * c).expect("discriminant fits in i64")
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }

    pub fn reduce(&self) -> Form {
        let d = self.disc() as i128;
        let (mut a, mut b) = (self.a as i128, self.b as i128);
        let mut c;
        loop {
            // bring b into (-a, a]
            let two_a = 2 * a;
            let mut nb = b.rem_euclid(two_a);
            if nb > a {
                nb -= two_a;
            }
            b = nb;
            c = (b * b - d) / (4 * a);
            if a > c {
                a = c;
                b = -b;
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            break;
        }
        Form { a: a as i64, b: b as i64, c: c as i64 }
    }

    pub fn principal(delta: i64) -> Form {
        let b = delta.rem_euclid(2);
        Form { a: 1, b, c: (b - delta) / 4 }
    }
}

/// Form (a, 2b + delta, N(b + w) / a) of the primitive part of an ideal.
pub fn form_of_ideal(i: &QIdeal) -> Form {
    let d = i.delta();
    let a = i.a();
    let bb = 2 * i.b() + d;
    let c = ((bb as i128 * bb as i128 - d as i128) / (4 * a as i128)) as i64;
    Form { a, b: bb, c }
}

/// Primitive ideal Z a + Z ((B - delta)/2 + w) attached to a form.
pub fn ideal_of_form(field: FieldE, f: &Form) -> QIdeal {
    let b = (f.b - field.delta()) / 2;
    QIdeal::new(field, f.a, b, Ratio::from_integer(1)).expect("form gives an ideal")
}

pub fn compose(field: FieldE, f: &Form, g: &Form) -> Form {
    let i = ideal_of_form(field, f).mul(&ideal_of_form(field, g));
    form_of_ideal(&i).reduce()
}

/// All reduced forms of discriminant delta, sorted.
pub fn reduced_forms(delta: i64) -> Vec<Form> {
    let mut out = Vec::new();
    let amax = ((-delta) / 3).sqrt() + 1;
    for a in 1..=amax {
        for b in -a + 1..=a {
            if (b - delta).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - delta;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = Form { a, b, c };
            if f.is_reduced() && arith::gcd(arith::gcd(a, b), c) == 1 {
                out.push(f);
            }
        }
    }
    out.sort();
    out
}

pub fn class_number(delta: i64) -> u64 {
    reduced_forms(delta).len() as u64
}

/// Generator of a principal ideal, or None. Canonical choice among associates:
/// sign normalised so that y > 0 (or x > 0 when y = 0), then smallest (y, |x|).
pub fn is_principal(i: &QIdeal) -> Option<QuadElem> {
    let field = i.field();
    let d = field.delta();
    if form_of_ideal(i).reduce() != Form::principal(d) {
        return None;
    }
    // I = (1/t) J with J integral
    let t = *i.scale().denom();
    let j = QIdeal::new(field, i.a(), i.b(), Ratio::from_integer(*i.scale().numer())).ok()?;
    let n = BigInt::from(j.norm_int());
    let ad = BigInt::from(-d);
    let four_n = &n * 4;
    let ymax = Roots::sqrt(&(&four_n / &ad));
    let mut best: Option<(BigInt, BigInt, QuadElem)> = None;
    let mut y = BigInt::from(0);
    while y <= ymax {
        let disc: BigInt = &four_n - &ad * &y * &y;
        if !disc.is_negative() {
            let s = Roots::sqrt(&disc);
            if &s * &s == disc {
                for sg in [s.clone(), -s.clone()] {
                    // 2x + d y = sg
                    let num: BigInt = &sg - BigInt::from(d) * &y;
                    if (&num % 2u32) != BigInt::from(0) {
                        continue;
                    }
                    let x: BigInt = num / 2;
                    let alpha = QuadElem::new(d, x.clone().into(), y.clone().into());
                    if !j.contains(&alpha) {
                        continue;
                    }
                    let (x, yy, alpha) = if y.is_positive() || x.is_positive() {
                        (x, y.clone(), alpha)
                    } else {
                        (-x, y.clone(), -alpha)
                    };
                    let key = (yy.clone(), x.abs());
                    let better = match &best {
                        None => true,
                        Some((by, bx, _)) => key < (by.clone(), bx.abs()),
                    };
                    if better {
                        best = Some((yy, x, alpha));
                    }
                }
            }
        }
        if best.is_some() {
            break;
        }
        y += 1;
    }
    let alpha = best?.2;
    Some(alpha.scale(&arith::rat_frac(1, t)))
}

/// Shortest nonzero element of an ideal lattice under the norm form (Lagrange reduction).
fn shortest_element(i: &QIdeal) -> QuadElem {
    let [mut u, mut v] = i.basis();
    let half = arith::rat_frac(1, 2);
    loop {
        if v.norm() < u.norm() {
            std::mem::swap(&mut u, &mut v);
        }
        let b = (&u * &v.conj()).trace() * &half;
        let nu = u.norm();
        if b.abs() * arith::rat(2) <= nu {
            return u;
        }
        v = &v - &u.scale(&(b / nu).round());
    }
}

/// I = alpha J with N(J) bounded in terms of Delta alone.
fn reduce_ideal(i: &QIdeal) -> (QuadElem, QIdeal) {
    // I J1 = (g1) and J1 J2 = (g2), so I = (g1 / g2) J2
    let g1 = shortest_element(i);
    let j1 = QIdeal::principal(&g1).expect("nonzero").div(i);
    let g2 = shortest_element(&j1);
    let j2 = QIdeal::principal(&g2).expect("nonzero").div(&j1);
    (&g1 * &g2.inv().expect("nonzero"), j2)
}

/// Canonical associate, matching the choice made by [`is_principal`].
fn canonical_associate(z: &QuadElem, units: &[QuadElem]) -> QuadElem {
    units
        .iter()
        .map(|u| {
            let w = u * z;
            if w.y.is_negative() || (w.y.is_zero() && w.x.is_negative()) {
                -w
            } else {
                w
            }
        })
        .min_by(|a, b| (&a.y, a.x.abs(), -&a.x).cmp(&(&b.y, b.x.abs(), -&b.x)))
        .expect("units are nonempty")
}

/// A generator of t^n, computed without forming t^n, whose entries grow like N(t)^n.
fn power_generator(t: &QIdeal, n: u32) -> Option<QuadElem> {
    let field = t.field();
    let mut alpha = field.one();
    let mut j = QIdeal::unit(field);
    for _ in 0..n {
        let (beta, k) = reduce_ideal(&j.mul(t));
        alpha = &alpha * &beta;
        j = k;
    }
    let g = is_principal(&j)?;
    Some(canonical_associate(&(&alpha * &g), &field.units()))
}

/// Cyclic decomposition of Cl(E) with prime-ideal generators coprime to a modulus.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    field: FieldE,
    pub h: u64,
    /// Orders d_1 | d_2 | ... of the cyclic factors (trivial factors omitted).
    pub orders: Vec<u32>,
    pub gens: Vec<QIdeal>,
    /// t_i^{n_i} = theta_i o_E.
    pub thetas: Vec<QuadElem>,
    pub exponent: u32,
    pub coprime_to: QIdeal,
    table: HashMap<Form, Vec<u32>>,
}

/// Options for choosing class-group generators.
#[derive(Debug, Clone, Copy, Default)]
pub struct GeneratorChoice {
    /// Skip this many candidate primes before the greedy selection, to obtain
    /// alternate representatives.
    pub skip: usize,
}

fn candidate_primes(field: FieldE, coprime_to: &QIdeal, count: usize, skip: usize) -> Vec<QIdeal> {
    let mut unramified = Vec::new();
    let mut ramified = Vec::new();
    let mut bound = 64;
    loop {
        unramified.clear();
        ramified.clear();
        for p in arith::primes_up_to(bound) {
            let st = field.factor_prime(p).unwrap();
            if st == SplitType::Inert {
                continue;
            }
            for q in primes_above(field, p) {
                if !q.coprime_to(coprime_to) {
                    continue;
                }
                if st == SplitType::Ramified {
                    ramified.push(q);
                } else {
                    unramified.push(q);
                }
            }
        }
        if unramified.len() >= count + skip || bound > 1 << 16 {
            break;
        }
        bound *= 2;
    }
    let mut out: Vec<QIdeal> = unramified.into_iter().skip(skip).collect();
    out.extend(ramified);
    out
}

impl ClassGroup {
    pub fn new(field: FieldE, coprime_to: &QIdeal) -> Result<Self> {
        Self::with_choice(field, coprime_to, GeneratorChoice::default())
    }

    pub fn with_choice(field: FieldE, coprime_to: &QIdeal, choice: GeneratorChoice) -> Result<Self> {
        if !coprime_to.is_integral() {
            return Err(Error::NotIntegral);
        }
        let d = field.delta();
        let h = class_number(d);
        let principal = Form::principal(d);
        let mut subgroup: HashMap<Form, Vec<u32>> = HashMap::new();
        subgroup.insert(principal, Vec::new());
        let mut gens: Vec<QIdeal> = Vec::new();
        let mut orders: Vec<u32> = Vec::new();
        let mut pool = 48usize;
        while (subgroup.len() as u64) < h {
            let cands = candidate_primes(field, coprime_to, pool, choice.skip);
            // order of each candidate in G / H and in G
            let mut best_image = 0u32;
            let mut info = Vec::with_capacity(cands.len());
            for q in &cands {
                let f = form_of_ideal(q).reduce();
                let mut cur = f;
                let mut k = 1u32;
                let mut image_order = None;
                loop {
                    if image_order.is_none() && subgroup.contains_key(&cur) {
                        image_order = Some(k);
                    }
                    if cur == principal {
                        break;
                    }
                    cur = compose(field, &cur, &f);
                    k += 1;
                }
                let io = image_order.unwrap();
                best_image = best_image.max(io);
                info.push((io, k));
            }
            let pick = info.iter().position(|&(io, ord)| io == best_image && ord == best_image);
            let Some(idx) = pick else {
                if pool > 4096 {
                    return Err(Error::Unsupported(format!(
                        "no prime basis of Cl for discriminant {d} among small primes"
                    )));
                }
                pool *= 4;
                continue;
            };
            if best_image <= 1 {
                return Err(Error::Inconsistent("candidate primes do not generate Cl".into()));
            }
            let q = cands[idx];
            let f = form_of_ideal(&q).reduce();
            let mut next = HashMap::with_capacity(subgroup.len() * best_image as usize);
            for (g, v) in &subgroup {
                let mut cur = *g;
                for k in 0..best_image {
                    let mut w = v.clone();
                    w.push(k);
                    next.insert(cur, w);
                    cur = compose(field, &cur, &f);
                }
            }
            subgroup = next;
            gens.push(q);
            orders.push(best_image);
        }
        // ascending orders
        let mut perm: Vec<usize> = (0..gens.len()).collect();
        perm.sort_by_key(|&i| orders[i]);
        let gens: Vec<QIdeal> = perm.iter().map(|&i| gens[i]).collect();
        let orders: Vec<u32> = perm.iter().map(|&i| orders[i]).collect();
        let table: HashMap<Form, Vec<u32>> = subgroup
            .into_iter()
            .map(|(f, v)| (f, perm.iter().map(|&i| v[i]).collect()))
            .collect();
        let mut thetas = Vec::with_capacity(gens.len());
        for (t, &n) in gens.iter().zip(&orders) {
            let th = power_generator(t, n).ok_or_else(|| Error::Inconsistent("t^n not principal".into()))?;
            thetas.push(th);
        }
        let exponent = orders.iter().fold(1u32, |acc, &n| arith::lcm(acc as i64, n as i64) as u32);
        Ok(ClassGroup { field, h, orders, gens, thetas, exponent, coprime_to: *coprime_to, table })
    }

    pub fn field(&self) -> FieldE {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.orders.len() <= 1
    }

    /// Exponent vector of the class of `i` on the generators.
    pub fn class_dlog(&self, i: &QIdeal) -> Vec<u32> {
        let f = form_of_ideal(i).reduce();
        self.table.get(&f).cloned().expect("every class is in the table")
    }

    /// Invariant factors (trivial ones omitted).
    pub fn invariants(&self) -> &[u32] {
        &self.orders
    }
}

/// Invariant factors of Cl(E) computed from the relation lattice of prime forms of
/// norm below sqrt(|delta|/3), independent of reduced-form counting.
pub fn class_group_by_relations(field: FieldE) -> Vec<u64> {
    let d = field.delta();
    let bound = ((-d) / 3).sqrt() + 1;
    let principal = Form::principal(d);
    let mut subgroup: HashMap<Form, Vec<i64>> = HashMap::new();
    subgroup.insert(principal, Vec::new());
    let mut rels: Vec<Vec<i64>> = Vec::new();
    let mut ngens = 0usize;
    for p in arith::primes_up_to(bound) {
        if field.factor_prime(p).unwrap() == SplitType::Inert {
            continue;
        }
        let q = primes_above(field, p)[0];
        let f = form_of_ideal(&q).reduce();
        let mut cur = f;
        let mut k = 1i64;
        while !subgroup.contains_key(&cur) {
            cur = compose(field, &cur, &f);
            k += 1;
        }
        if k == 1 {
            continue;
        }
        let coords = subgroup[&cur].clone();
        let mut row: Vec<i64> = coords.iter().map(|c| -c).collect();
        row.push(k);
        rels.push(row);
        ngens += 1;
        let mut next = HashMap::new();
        for (g, v) in &subgroup {
            let mut c = *g;
            for e in 0..k {
                let mut w = v.clone();
                w.push(e);
                next.insert(c, w);
                c = compose(field, &c, &f);
            }
        }
        subgroup = next;
    }
    if ngens == 0 {
        return Vec::new();
    }
    let m: Vec<Vec<i128>> = rels
        .iter()
        .map(|r| (0..ngens).map(|j| *r.get(j).unwrap_or(&0) as i128).collect())
        .collect();
    let (_, dm, _) = arith::smith_normal_form(&m);
    let mut inv: Vec<u64> = (0..ngens).map(|i| dm[i][i].unsigned_abs() as u64).filter(|&x| x > 1).collect();
    inv.sort();
    inv
}

/// Exponent of Cl(E) from reduced forms: the lcm of element orders.
pub fn class_group_exponent(delta: i64) -> u32 {
    let field = FieldE::new(delta).expect("fundamental");
    let inv = class_group_by_relations(field);
    inv.last().map(|&x| x as u32).unwrap_or(1)
}

/// Fundamental discriminants delta with |delta| <= bound, optionally filtered by the
/// class-group exponent, ordered by |delta|.
pub fn enumerate_discriminants(bound: i64, exponent_filter: Option<u32>) -> Vec<i64> {
    let mut out = Vec::new();
    for n in 3..=bound {
        let d = -n;
        if !arith::is_fundamental_discriminant(d) {
            continue;
        }
        if let Some(e) = exponent_filter {
            if class_group_exponent(d) != e {
                continue;
            }
        }
        out.push(d);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use num_traits::ToPrimitive;

    fn theta_norm_check(cg: &ClassGroup) -> bool {
        cg.gens.iter().zip(&cg.orders).zip(&cg.thetas).all(|((t, &n), th)| {
            th.norm() == t.norm().pow(n as i32) && th.norm() > rat(0) && th.denominator().to_i64() == Some(1)
        })
    }

    #[test]
    fn thetas_match_direct_powers() {
        for d in (3..=400).map(|n| -n).filter(|&d| arith::is_fundamental_discriminant(d)) {
            let field = FieldE::new(d).unwrap();
            let cg = ClassGroup::new(field, &QIdeal::unit(field)).unwrap();
            for ((t, &n), th) in cg.gens.iter().zip(&cg.orders).zip(&cg.thetas) {
                assert_eq!(Some(th.clone()), is_principal(&t.pow(n)), "{d}");
            }
        }
        // t^n itself does not fit in machine integers here
        let field = FieldE::new(-3007).unwrap();
        let cg = ClassGroup::new(field, &QIdeal::unit(field)).unwrap();
        assert!(theta_norm_check(&cg));
    }

    #[test]
    fn large_coefficients_reduce() {
        // b^2 overflows i64 although the discriminant does not
        let b: i64 = 4_000_000_001;
        let c = ((b as i128 * b as i128 + 3315) / 4) as i64;
        let f = Form { a: 1, b, c };
        assert_eq!(f.disc(), -3315);
        assert_eq!(f.reduce(), Form::principal(-3315));
    }

    #[test]
    fn known_class_numbers() {
        assert_eq!(class_number(-3), 1);
        assert_eq!(class_number(-4), 1);
        assert_eq!(class_number(-163), 1);
        assert_eq!(class_number(-15), 2);
        assert_eq!(class_number(-23), 3);
        assert_eq!(class_number(-56), 4);
        assert_eq!(class_number(-4027), 9);
        assert_eq!(class_number(-5460), 16);
    }

    #[test]
    fn form_round_trip() {
        for n in 3..=1000 {
            let d = -n;
            if !arith::is_fundamental_discriminant(d) {
                continue;
            }
            let field = FieldE::new(d).unwrap();
            for f in reduced_forms(d) {
                let i = ideal_of_form(field, &f);
                assert_eq!(form_of_ideal(&i).reduce(), f, "d={d}");
            }
        }
    }

    #[test]
    fn structures() {
        let e = FieldE::new(-23).unwrap();
        let cg = ClassGroup::new(e, &QIdeal::unit(e)).unwrap();
        assert_eq!(cg.orders, vec![3]);
        let e = FieldE::new(-4027).unwrap();
        let cg = ClassGroup::new(e, &QIdeal::unit(e)).unwrap();
        assert_eq!(cg.orders, vec![3, 3]);
        let e = FieldE::new(-5460).unwrap();
        let cg = ClassGroup::new(e, &QIdeal::unit(e)).unwrap();
        assert_eq!(cg.orders, vec![2, 2, 2, 2]);
        assert!(theta_norm_check(&cg));
        let e = FieldE::new(-163).unwrap();
        let cg = ClassGroup::new(e, &QIdeal::unit(e)).unwrap();
        assert_eq!(cg.h, 1);
        assert!(cg.orders.is_empty());
    }

    #[test]
    fn principal_generators() {
        let e = FieldE::new(-15).unwrap();
        let p = primes_above(e, 2)[0];
        assert!(is_principal(&p).is_none());
        assert!(is_principal(&QIdeal::unit(e)).unwrap().is_one());
        let th = is_principal(&p.pow(2)).unwrap();
        assert_eq!(th.norm(), rat(4));
        assert_eq!(th.trace(), rat(1));
        assert_eq!(QIdeal::principal(&th).unwrap(), p.pow(2));
    }

    #[test]
    fn dlog_of_conjugate() {
        let e = FieldE::new(-15).unwrap();
        let cg = ClassGroup::new(e, &QIdeal::unit(e)).unwrap();
        let t = cg.gens[0];
        assert_eq!(cg.class_dlog(&t), vec![1]);
        assert_eq!(cg.class_dlog(&t.conj()), vec![1]);
        assert_eq!(cg.class_dlog(&QIdeal::from_int(e, 7)), vec![0]);
    }

    #[test]
    fn relation_route_agrees() {
        for d in [-3, -4, -15, -23, -56, -4027, -5460] {
            let e = FieldE::new(d).unwrap();
            let inv = class_group_by_relations(e);
            assert_eq!(inv.iter().product::<u64>(), class_number(d), "d={d}");
        }
    }
}
