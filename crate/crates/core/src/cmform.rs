//! q-expansions of the CM forms attached to Groessencharacters, with exact
//! Hecke-relation checks.

use num_complex::Complex64;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd, is_prime, primes_up_to, rational_rank};
use crate::error::{Error, Result};
use crate::grossenchar::{Grossenchar, Nebentypus};
use crate::quadfield::{primes_above, FieldE, QIdeal};
use crate::valuefield::AlgElem;

/// Every integral ideal of norm at most `bound`, once, sorted by norm.
pub fn ideals_of_norm_up_to(field: FieldE, bound: i64) -> Vec<(i64, QIdeal)> {
    let primes = prime_ideals_up_to(field, bound);
    let mut out = Vec::new();
    let mut stack = vec![(0usize, 1i64, QIdeal::unit(field))];
    while let Some((start, n, a)) = stack.pop() {
        out.push((n, a));
        for (k, (np, p)) in primes.iter().enumerate().skip(start) {
            if n * np > bound {
                break;
            }
            stack.push((k, n * np, a.mul(p)));
        }
    }
    out.sort_by_key(|(n, a)| (*n, a.a(), a.b(), a.scale()));
    out
}

/// Prime ideals of norm at most `bound`, sorted by norm.
fn prime_ideals_up_to(field: FieldE, bound: i64) -> Vec<(i64, QIdeal)> {
    let mut primes: Vec<(i64, QIdeal)> = primes_up_to(bound)
        .into_iter()
        .flat_map(|p| primes_above(field, p))
        .map(|q| (q.norm_int(), q))
        .filter(|(n, _)| *n <= bound)
        .collect();
    primes.sort_by_key(|(n, q)| (*n, q.a(), q.b()));
    primes
}

/// The form f_psi = sum psi(a) q^N(a), truncated at q^B.
#[derive(Debug, Clone)]
pub struct CMForm {
    pub psi: Grossenchar,
    pub level: i64,
    pub weight: u32,
    pub bound: usize,
    /// coeffs[n] = a_n for 0 <= n <= B (a_0 = 0).
    pub coeffs: Vec<AlgElem>,
    pub complex_coeffs: Vec<Complex64>,
}

impl CMForm {
    pub fn coeff(&self, n: usize) -> &AlgElem {
        &self.coeffs[n]
    }

    /// Largest |Im a_n| at the distinguished embedding.
    pub fn max_imag(&self) -> f64 {
        self.complex_coeffs.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// |a_p| <= 2 p^((k-1)/2) for primes p not dividing the level.
    pub fn ramanujan_holds(&self) -> bool {
        (2..=self.bound as i64).filter(|&p| is_prime(p) && self.level % p != 0).all(|p| {
            let b = 2.0 * (p as f64).powf((self.weight as f64 - 1.0) / 2.0);
            self.complex_coeffs[p as usize].norm() <= b * (1.0 + 1e-6)
        })
    }
}

/// q-expansion of f_psi up to `bound`.
pub fn q_expansion(psi: &Grossenchar, bound: usize) -> CMForm {
    let field = psi.field();
    let alg = psi.algebra();
    let b = bound as i64;
    let primes = prime_ideals_up_to(field, b);
    let values: Vec<AlgElem> = primes.par_iter().map(|(_, p)| psi.evaluate(p)).collect();
    let mut coeffs = vec![alg.zero(); bound + 1];
    if bound >= 1 {
        coeffs[1] = alg.one();
    }
    // depth-first over multisets of primes, carrying the product of psi-values
    let mut stack = vec![(0usize, 1i64, alg.one())];
    while let Some((start, n, v)) = stack.pop() {
        for (k, (np, _)) in primes.iter().enumerate().skip(start) {
            if n * np > b {
                break;
            }
            if values[k].is_zero() {
                continue;
            }
            let w = alg.mul(&v, &values[k]);
            let m = (n * np) as usize;
            coeffs[m] = alg.add(&coeffs[m], &w);
            stack.push((k, n * np, w));
        }
    }
    let complex_coeffs = coeffs.par_iter().map(|c| alg.to_complex(c)).collect();
    CMForm {
        psi: psi.clone(),
        level: psi.level(),
        weight: psi.weight(),
        bound,
        coeffs,
        complex_coeffs,
    }
}

/// A failed Hecke identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum HeckeFailure {
    /// a_m a_n != a_mn for coprime m, n.
    Multiplicative { m: usize, n: usize },
    /// the prime-power recursion fails at a_{p^(j+1)}.
    PrimePower { p: usize, j: u32 },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct HeckeReport {
    pub pairs_checked: usize,
    pub powers_checked: usize,
    pub failures: Vec<HeckeFailure>,
}

impl HeckeReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exact checks of a_m a_n = a_mn (coprime m, n) and of the prime-power recursion
/// a_{p^(j+1)} = a_p a_{p^j} - chi(p) p^(k-1) a_{p^(j-1)}.
pub fn hecke_verify(f: &CMForm) -> HeckeReport {
    let alg = f.psi.algebra();
    let b = f.bound;
    let pairs: Vec<(usize, usize)> = (2..=b)
        .flat_map(|m| (m + 1..=b / m).filter(move |&n| gcd(m as i64, n as i64) == 1).map(move |n| (m, n)))
        .collect();
    let mut failures: Vec<HeckeFailure> = pairs
        .par_iter()
        .filter(|&&(m, n)| alg.mul(&f.coeffs[m], &f.coeffs[n]) != f.coeffs[m * n])
        .map(|&(m, n)| HeckeFailure::Multiplicative { m, n })
        .collect();
    let neb = f.psi.nebentypus();
    let mut powers = 0;
    for p in primes_up_to(b as i64) {
        let pu = p as usize;
        // chi(p) p^(k-1), or zero for p | N
        let c = if f.level % p == 0 {
            alg.zero()
        } else {
            let pk = alg.from_rational(&BigRational::from_integer(num_bigint::BigInt::from(p).pow(f.weight - 1)));
            match &neb {
                Nebentypus::Trivial => pk,
                Nebentypus::Character(chi) => {
                    let z = chi.eval(p).expect("p prime to the level");
                    let root = alg.root_of_unity(&z).expect("nebentypus values lie in the algebra");
                    alg.mul(&root, &pk)
                }
            }
        };
        let mut j = 1u32;
        let mut prev = alg.one();
        let mut cur_n = pu;
        while cur_n * pu <= b {
            let next_n = cur_n * pu;
            let expect = alg.sub(&alg.mul(&f.coeffs[pu], &f.coeffs[cur_n]), &alg.mul(&c, &prev));
            powers += 1;
            if expect != f.coeffs[next_n] {
                failures.push(HeckeFailure::PrimePower { p: pu, j });
            }
            prev = f.coeffs[cur_n].clone();
            cur_n = next_n;
            j += 1;
        }
    }
    failures.sort_by_key(|x| match x {
        HeckeFailure::Multiplicative { m, n } => (0, *m, *n),
        HeckeFailure::PrimePower { p, j } => (1, *p, *j as usize),
    });
    HeckeReport { pairs_checked: pairs.len(), powers_checked: powers, failures }
}

/// Degree of the coefficient field estimated from the embeddings of a_p, and reality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientProbe {
    pub degree: u32,
    pub real: bool,
    pub max_imag: f64,
    /// Q-rank of the exact coefficient vectors a_1..a_B in the value algebra.
    pub span_rank: usize,
}

/// Numeric degree of Q(a_p : p <= B) from conjugate sets of a_p, plus reality.
pub fn coefficient_field_probe(f: &CMForm) -> Result<CoefficientProbe> {
    if f.bound < 100 {
        return Err(Error::InvalidArgument("the probe needs B >= 100".into()));
    }
    let alg = f.psi.algebra();
    let embs = alg.all_embeddings();
    let mut degree = 1u32;
    let mut used = 0;
    for p in primes_up_to(f.bound as i64) {
        let a = &f.coeffs[p as usize];
        if a.is_zero() {
            continue;
        }
        let x = alg.to_complex(a);
        let conj: Vec<Complex64> = embs.iter().map(|e| alg.embed_with(a, e)).collect();
        degree = degree.max(algebraic_degree(x, &conj).ok_or_else(|| {
            Error::Inconsistent(format!("a_{p} has no conjugate set with integral symmetric functions"))
        })?);
        used += 1;
        if used >= 12 {
            break;
        }
    }
    let vectors: Vec<Vec<BigRational>> = f.coeffs.iter().skip(1).map(|c| c.coords()).collect();
    let max_imag = f.max_imag();
    Ok(CoefficientProbe { degree, real: max_imag < 1e-9, max_imag, span_rank: rational_rank(&vectors) })
}

/// Smallest k such that x and k-1 other values among `conj` have a monic integer
/// product polynomial (up to degree 4).
fn algebraic_degree(x: Complex64, conj: &[Complex64]) -> Option<u32> {
    let near_int = |z: Complex64| {
        let s = 1.0 + z.norm();
        (z.re - z.re.round()).abs() < 1e-7 * s && z.im.abs() < 1e-7 * s
    };
    // distinct conjugates other than x
    let mut others: Vec<Complex64> = Vec::new();
    let mut skipped_self = false;
    for &c in conj {
        if !skipped_self && (c - x).norm() < 1e-8 * (1.0 + x.norm()) {
            skipped_self = true;
            continue;
        }
        if (c - x).norm() < 1e-8 * (1.0 + x.norm()) || others.iter().any(|o| (o - c).norm() < 1e-8 * (1.0 + c.norm())) {
            continue;
        }
        others.push(c);
    }
    let poly_ok = |roots: &[Complex64]| -> bool {
        // elementary symmetric functions
        let mut e = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); e.len() + 1];
            for (i, c) in e.iter().enumerate() {
                next[i] += c;
                next[i + 1] += c * r;
            }
            e = next;
        }
        e.into_iter().all(near_int)
    };
    if poly_ok(&[x]) {
        return Some(1);
    }
    let n = others.len();
    for i in 0..n {
        if poly_ok(&[x, others[i]]) {
            return Some(2);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if poly_ok(&[x, others[i], others[j]]) {
                return Some(3);
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if poly_ok(&[x, others[i], others[j], others[k]]) {
                    return Some(4);
                }
            }
        }
    }
    None
}
