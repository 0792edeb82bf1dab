//! Exact power tests in F = E(zeta_r), roots of unity, value-field degrees and the
//! conditions (Q1) and (R1).

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::algebra::{AlgElem, ValueAlgebra};
use crate::arith::{euler_phi, factorize, rat, xgcd};
use crate::chargroup::Angle;
use crate::error::{Error, Result};
use crate::quadfield::{is_cube_in_e, is_square_in_e, ClassGroup, FieldE, QuadElem};

/// How F = E(zeta_r) is handled by the power tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    /// F = E.
    E,
    /// F = E(s) with s^2 = c, s = i (c = -1) or s = sqrt(-3) (c = -3).
    RelQuad(i64),
}

fn shape(alg: &ValueAlgebra) -> Result<Shape> {
    let d = alg.field().delta();
    match alg.r() {
        1 | 2 => Ok(Shape::E),
        4 if d != -4 => Ok(Shape::RelQuad(-1)),
        3 | 6 if d != -3 => Ok(Shape::RelQuad(-3)),
        r => Err(Error::Unsupported(format!("power tests in E(zeta_{r}) for discriminant {d}"))),
    }
}

/// (A, B) with z = A + B s.
fn to_rel(alg: &ValueAlgebra, z: &AlgElem) -> (QuadElem, QuadElem) {
    let d = alg.field().delta();
    let c = z.coords();
    let p0 = QuadElem::new(d, c[0].clone(), c[1].clone());
    if alg.phi() == 1 {
        return (p0, alg.field().zero());
    }
    let p1 = QuadElem::new(d, c[2].clone(), c[3].clone());
    let half = BigRational::new(1.into(), 2.into());
    let h = p1.scale(&half);
    match alg.r() {
        4 => (p0, p1),
        3 => (p0 - h.clone(), h),
        _ => (p0 + h.clone(), h),
    }
}

fn from_rel(alg: &ValueAlgebra, a: &QuadElem, b: &QuadElem) -> AlgElem {
    let p1 = match alg.r() {
        4 => b.clone(),
        _ => b.scale(&rat(2)),
    };
    let p0 = match alg.r() {
        4 => a.clone(),
        3 => a.clone() + b.clone(),
        _ => a.clone() - b.clone(),
    };
    let mut c = vec![BigRational::zero(); alg.dim()];
    c[0] = p0.x;
    c[1] = p0.y;
    if alg.phi() > 1 {
        c[2] = p1.x;
        c[3] = p1.y;
    }
    AlgElem::from_coords(&c)
}

/// Some x in F with x^2 = z.
fn sqrt_in(alg: &ValueAlgebra, sh: Shape, z: &AlgElem) -> Option<AlgElem> {
    if z.is_zero() {
        return Some(z.clone());
    }
    let (a, b) = to_rel(alg, z);
    let out = match sh {
        Shape::E => is_square_in_e(&a).map(|x| alg.from_quad(&x)),
        Shape::RelQuad(c) => {
            let field = alg.field();
            let cq = field.int(c);
            let two = rat(2);
            let mut found = None;
            if b.is_zero() {
                if let Some(x) = is_square_in_e(&a) {
                    found = Some((x, field.zero()));
                } else if let Some(y) = is_square_in_e(&(a.clone() * cq.inv().unwrap())) {
                    found = Some((field.zero(), y));
                }
            } else {
                // (x + y s)^2 = a + b s: x^2 + c y^2 = a, 2xy = b, x^2 - c y^2 = +-n
                let nrm = a.clone() * a.clone() - cq.clone() * b.clone() * b.clone();
                if let Some(n) = is_square_in_e(&nrm) {
                    for sn in [n.clone(), -n.clone()] {
                        let x2 = (a.clone() + sn).scale(&(BigRational::one() / &two));
                        if let Some(x) = is_square_in_e(&x2) {
                            if x.is_zero() {
                                continue;
                            }
                            let y = b.clone() * x.scale(&two).inv().unwrap();
                            found = Some((x, y));
                            break;
                        }
                    }
                }
            }
            found.map(|(x, y)| from_rel(alg, &x, &y))
        }
    };
    out.filter(|x| alg.mul(x, x) == *z)
}

fn cbrt_in(alg: &ValueAlgebra, sh: Shape, z: &AlgElem) -> Result<Option<AlgElem>> {
    match sh {
        Shape::E => {
            let (a, _) = to_rel(alg, z);
            Ok(is_cube_in_e(&a).map(|x| alg.from_quad(&x)))
        }
        Shape::RelQuad(_) => Err(Error::Unsupported("cube roots in a quartic field".into())),
    }
}

/// Some x in E(zeta_r) with x^n = z; `alg` must have no radicals.
pub fn nth_root(alg: &ValueAlgebra, z: &AlgElem, n: u32) -> Result<Option<AlgElem>> {
    if !alg.radicals().is_empty() {
        return Err(Error::InvalidArgument("power tests need the base field".into()));
    }
    let sh = shape(alg)?;
    if n <= 1 || z.is_zero() {
        return Ok(Some(z.clone()));
    }
    let p = factorize(n as i64)[0].0 as u32;
    let first = match p {
        2 => sqrt_in(alg, sh, z),
        3 => cbrt_in(alg, sh, z)?,
        _ => return Err(Error::Unsupported(format!("{p}-th roots"))),
    };
    let Some(x) = first else {
        return Ok(None);
    };
    if n == p {
        return Ok(Some(x));
    }
    // all p-th roots of z: x times p-th roots of unity in F
    let (w, g) = mu_f(alg)?;
    let mut roots = vec![x.clone()];
    if w % p == 0 {
        let zp = alg.pow(&g, (w / p) as u64);
        for _ in 1..p {
            let next = alg.mul(roots.last().unwrap(), &zp);
            roots.push(next);
        }
    }
    for y in roots {
        if let Some(v) = nth_root(alg, &y, n / p)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

pub fn is_nth_power(alg: &ValueAlgebra, z: &AlgElem, n: u32) -> Result<bool> {
    Ok(nth_root(alg, z, n)?.is_some())
}

/// x^a y^b with angle 1/(uv), given x of angle 1/u and y of angle 1/v, u and v coprime.
fn combine(alg: &ValueAlgebra, x: &AlgElem, u: u32, y: &AlgElem, v: u32) -> AlgElem {
    // a/u + b/v = 1/(uv)  <=>  a v + b u = 1
    let (_, a, b) = xgcd(v as i128, u as i128);
    let a = a.rem_euclid(u as i128) as u64;
    let b = b.rem_euclid(v as i128) as u64;
    alg.mul(&alg.pow(x, a), &alg.pow(y, b))
}

/// The root among `cands` closest to exp(2 pi i t).
fn closest(alg: &ValueAlgebra, cands: Vec<AlgElem>, t: &Angle) -> AlgElem {
    let target = t.to_complex();
    cands
        .into_iter()
        .min_by(|a, b| {
            let da = (alg.to_complex(a) - target).norm();
            let db = (alg.to_complex(b) - target).norm();
            da.partial_cmp(&db).unwrap()
        })
        .unwrap()
}

/// Order w of mu_F and the generator mapping to exp(2 pi i / w).
pub fn mu_f(alg: &ValueAlgebra) -> Result<(u32, AlgElem)> {
    let sh = shape(alg)?;
    let r = alg.r() as i64;
    let mut w = num_integer::lcm(num_integer::lcm(r, alg.field().mu_order() as i64), 2) as u32;
    let mut g = alg.root_of_unity(&Angle::new(1, w as i64)).expect("zeta_w lies in F");
    while let Some(x) = sqrt_in(alg, sh, &g) {
        let nx = alg.neg(&x);
        g = closest(alg, vec![x, nx], &Angle::new(1, 2 * w as i64));
        w *= 2;
    }
    if w % 3 != 0 {
        if let Some(s) = sqrt_in(alg, sh, &alg.from_int(-3)) {
            let half = BigRational::new(1.into(), 2.into());
            let m1 = alg.from_int(-1);
            let c1 = alg.scale(&alg.add(&m1, &s), &half);
            let c2 = alg.scale(&alg.sub(&m1, &s), &half);
            let z3 = closest(alg, vec![c1, c2], &Angle::new(1, 3));
            g = combine(alg, &g, w, &z3, 3);
            w *= 3;
        }
    }
    Ok((w, g))
}

/// [E(zeta_r) : E].
pub fn cyclotomic_degree(field: &FieldE, r: u32) -> u64 {
    let phi = euler_phi(r as i64) as u64;
    if (r as i64) % field.delta() == 0 {
        phi / 2
    } else {
        phi
    }
}

/// [L : E] for L = E(zeta_r, beta_1, ..., beta_g).
pub fn value_field_degree(alg: &ValueAlgebra) -> Result<u64> {
    let base_deg = cyclotomic_degree(alg.field(), alg.r());
    let rads: Vec<_> = alg.radicals().iter().filter(|r| r.n > 1).collect();
    if rads.is_empty() {
        return Ok(base_deg);
    }
    let p = rads[0].n;
    if rads.iter().any(|r| r.n != p) || !matches!(p, 2 | 3) {
        return Err(Error::Unsupported("radicals of mixed or composite exponent".into()));
    }
    let base = ValueAlgebra::base(*alg.field(), alg.r())?;
    let gammas: Vec<AlgElem> = rads.iter().map(|r| r.gamma.clone()).collect();
    let rank = kummer_rank(&base, &gammas, p)?;
    Ok(base_deg * (p as u64).pow(rank))
}

/// Rank of the subgroup generated by `gammas` in F^x / F^x^p.
pub fn kummer_rank(base: &ValueAlgebra, gammas: &[AlgElem], p: u32) -> Result<u32> {
    let g = gammas.len() as u32;
    if p == 3 && g >= 2 && mu_f(base)?.0 % 3 != 0 {
        return Err(Error::Unsupported("several cube roots without zeta_3".into()));
    }
    let mut kernel = 0u64;
    let total = (p as u64).pow(g);
    for idx in 0..total {
        let mut z = base.one();
        let mut k = idx;
        for gm in gammas {
            let e = k % p as u64;
            k /= p as u64;
            if e > 0 {
                z = base.mul(&z, &base.pow(gm, e));
            }
        }
        if is_nth_power(base, &z, p)? {
            kernel += 1;
        }
    }
    let mut rank = g;
    let mut k = kernel;
    while k > 1 {
        k /= p as u64;
        rank -= 1;
    }
    Ok(rank)
}

/// Outcome of the sign search for (Q1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Q1Verdict {
    pub holds: bool,
    /// Signs epsilon_i making all E((eps_i theta_i^l)^(1/n_i)) equal, if found.
    pub signs: Option<Vec<i32>>,
}

/// Condition (Q1) for the class-group generators of `cg` and weight exponent `ell`.
pub fn check_q1(cg: &ClassGroup, ell: u32) -> Result<Q1Verdict> {
    if cg.is_cyclic() {
        return Err(Error::Q1NotApplicable);
    }
    let p = cg.orders[0];
    if cg.orders.iter().any(|&n| n != p) || !matches!(p, 2 | 3) {
        return Err(Error::Unsupported("Q1 for class groups that are not elementary of exponent 2 or 3".into()));
    }
    let powers: Vec<QuadElem> = cg.thetas.iter().map(|t| t.pow(ell)).collect();
    let same = |a: &QuadElem, b: &QuadElem| -> bool {
        let ab = a.clone() * b.clone();
        if p == 2 {
            is_square_in_e(&ab).is_some()
        } else {
            is_cube_in_e(&ab).is_some() || is_cube_in_e(&(ab * b.clone())).is_some()
        }
    };
    let g = powers.len();
    let sign_vectors: Vec<Vec<i32>> = if p == 2 {
        (0..1u32 << g)
            .map(|m| (0..g).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect())
            .collect()
    } else {
        vec![vec![1; g]]
    };
    for signs in sign_vectors {
        let a: Vec<QuadElem> = powers
            .iter()
            .zip(&signs)
            .map(|(x, &s)| if s < 0 { -x.clone() } else { x.clone() })
            .collect();
        if (1..g).all(|j| same(&a[0], &a[j])) {
            return Ok(Q1Verdict { holds: true, signs: Some(signs) });
        }
    }
    Ok(Q1Verdict { holds: false, signs: None })
}

/// Outcome of (R1): witnesses zeta in mu_F for each generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct R1Verdict {
    pub holds: bool,
    pub mu_order: u32,
    /// For each generator, the angles k/w of the roots of unity zeta with
    /// zeta theta_i^l an n_i-th power in E(zeta_r).
    pub witnesses: Vec<Vec<(i64, i64)>>,
}

/// Condition (R1) for the class-group generators of `cg`, weight exponent `ell` and
/// eta of order `r`.
pub fn check_r1(cg: &ClassGroup, ell: u32, r: u32) -> Result<R1Verdict> {
    let alg = ValueAlgebra::base(cg.field(), r)?;
    let (w, g) = mu_f(&alg)?;
    let mut witnesses = Vec::with_capacity(cg.rank());
    for (theta, &n) in cg.thetas.iter().zip(&cg.orders) {
        let th = alg.from_quad(&theta.pow(ell));
        let mut found = Vec::new();
        let mut zeta = alg.one();
        for k in 0..w {
            if is_nth_power(&alg, &alg.mul(&zeta, &th), n)? {
                let a = Angle::new(k as i64, w as i64);
                found.push((a.numer(), a.denom()));
            }
            zeta = alg.mul(&zeta, &g);
        }
        witnesses.push(found);
    }
    let holds = witnesses.iter().all(|v| !v.is_empty());
    Ok(R1Verdict { holds, mu_order: w, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::{enumerate_discriminants, QIdeal};
    use crate::valuefield::Radical;

    fn class_group(d: i64) -> ClassGroup {
        let e = FieldE::new(d).unwrap();
        ClassGroup::new(e, &QIdeal::from_int(e, d)).unwrap()
    }

    #[test]
    fn square_roots_in_quartic_fields() {
        for (d, r) in [(-15, 4), (-20, 4), (-15, 6), (-24, 3), (-35, 6)] {
            let e = FieldE::new(d).unwrap();
            let alg = ValueAlgebra::base(e, r).unwrap();
            for x in [
                alg.add(&alg.zeta_pow(1), &alg.from_quad(&e.elem(2, -1))),
                alg.mul(&alg.zeta_pow(1), &alg.from_quad(&e.elem(0, 3))),
                alg.from_quad(&e.elem(5, 1)),
            ] {
                let z = alg.mul(&x, &x);
                let y = nth_root(&alg, &z, 2).unwrap().unwrap();
                assert_eq!(alg.mul(&y, &y), z);
                let z4 = alg.mul(&z, &z);
                assert!(is_nth_power(&alg, &z4, 4).unwrap());
            }
            assert!(!is_nth_power(&alg, &alg.from_int(2), 2).unwrap() || d == -24);
        }
        let e = FieldE::new(-15).unwrap();
        let alg = ValueAlgebra::base(e, 4).unwrap();
        // -15 = (sqrt(-15))^2 and 15 = (i sqrt(-15))^2
        assert!(is_nth_power(&alg, &alg.from_int(15), 2).unwrap());
        assert!(!is_nth_power(&alg, &alg.zeta_pow(1), 2).unwrap());
        assert!(nth_root(&ValueAlgebra::base(e, 5).unwrap(), &alg.one(), 2).is_err());
    }

    #[test]
    fn roots_of_unity() {
        let cases = [(-15, 4, 4), (-15, 6, 6), (-24, 4, 4), (-8, 4, 8), (-3, 2, 6), (-4, 2, 4), (-15, 2, 2), (-35, 3, 6)];
        for (d, r, w) in cases {
            let alg = ValueAlgebra::base(FieldE::new(d).unwrap(), r).unwrap();
            let (got, g) = mu_f(&alg).unwrap();
            assert_eq!(got, w, "D={d} r={r}");
            assert_eq!(alg.pow(&g, w as u64), alg.one());
            let expect = Angle::new(1, w as i64).to_complex();
            assert!((alg.to_complex(&g) - expect).norm() < 1e-9);
        }
        // Q(sqrt(-3)) adjoined to Q(i) is Q(zeta_12)
        let alg = ValueAlgebra::base(FieldE::new(-15).unwrap(), 4).unwrap();
        assert_eq!(mu_f(&alg).unwrap().0, 4);
    }

    #[test]
    fn degrees() {
        let e = FieldE::new(-163).unwrap();
        assert_eq!(value_field_degree(&ValueAlgebra::base(e, 4).unwrap()).unwrap(), 2);
        let e3 = FieldE::new(-3).unwrap();
        assert_eq!(value_field_degree(&ValueAlgebra::base(e3, 9).unwrap()).unwrap(), 3);
        let e7 = FieldE::new(-7).unwrap();
        assert_eq!(value_field_degree(&ValueAlgebra::base(e7, 7).unwrap()).unwrap(), 3);
        let e4 = FieldE::new(-4).unwrap();
        assert_eq!(value_field_degree(&ValueAlgebra::base(e4, 4).unwrap()).unwrap(), 1);

        let cg = class_group(-15);
        let e = cg.field();
        let base = ValueAlgebra::base(e, 2).unwrap();
        for sign in [1, -1] {
            let g = base.scale(&base.from_quad(&cg.thetas[0]), &rat(sign));
            let alg = ValueAlgebra::new(e, 2, vec![Radical { n: 2, gamma: g, root_choice: 0 }]).unwrap();
            assert_eq!(value_field_degree(&alg).unwrap(), 2);
        }
        // a square radicand collapses
        let g = base.from_quad(&cg.thetas[0].pow(2));
        let alg = ValueAlgebra::new(e, 2, vec![Radical { n: 2, gamma: g, root_choice: 0 }]).unwrap();
        assert_eq!(value_field_degree(&alg).unwrap(), 1);
    }

    #[test]
    fn kummer_rank_counts_independent_classes() {
        let cg = class_group(-84);
        assert_eq!(cg.orders, vec![2, 2]);
        let e = cg.field();
        let base = ValueAlgebra::base(e, 2).unwrap();
        let t: Vec<AlgElem> = cg.thetas.iter().map(|x| base.from_quad(x)).collect();
        assert_eq!(kummer_rank(&base, &t, 2).unwrap(), 2);
        let prod = base.mul(&t[0], &t[1]);
        assert_eq!(kummer_rank(&base, &[t[0].clone(), prod, t[1].clone()], 2).unwrap(), 2);
        let sq = base.mul(&t[0], &base.from_quad(&e.elem(3, 1).pow(2)));
        assert_eq!(kummer_rank(&base, &[t[0].clone(), sq], 2).unwrap(), 1);
    }

    #[test]
    fn q1_examples() {
        assert_eq!(check_q1(&class_group(-15), 1), Err(Error::Q1NotApplicable));
        let cg = class_group(-4027);
        assert_eq!(cg.orders, vec![3, 3]);
        for ell in [1, 2] {
            assert!(!check_q1(&cg, ell).unwrap().holds);
        }
        for d in enumerate_discriminants(1000, Some(2)) {
            let cg = class_group(d);
            if cg.h > 2 {
                assert!(!check_q1(&cg, 1).unwrap().holds, "D={d}");
            }
        }
        // forced equality: theta_2 = theta_1 times a square
        let mut cg = class_group(-84);
        let e = cg.field();
        cg.thetas[1] = cg.thetas[0].clone() * e.elem(2, 1).pow(2);
        let v = check_q1(&cg, 1).unwrap();
        assert!(v.holds);
        assert_eq!(v.signs, Some(vec![1, 1]));
        cg.thetas[1] = -cg.thetas[1].clone();
        assert_eq!(check_q1(&cg, 1).unwrap().signs, Some(vec![-1, 1]));
    }

    #[test]
    fn r1_over_exponent_two_fields() {
        let want4 = [20, 24, 40, 52, 88, 148, 232];
        let want6 = [15, 24, 51, 123, 267];
        for d in enumerate_discriminants(5460, Some(2)) {
            let cg = class_group(d);
            let v4 = check_r1(&cg, 1, 4).unwrap();
            assert_eq!(v4.holds, want4.contains(&-d), "r=4 D={d}");
            if v4.holds {
                assert!(v4.witnesses.iter().flatten().all(|&(_, den)| den == 4));
            }
            let v6 = check_r1(&cg, 1, 6).unwrap();
            assert_eq!(v6.holds, want6.contains(&-d), "r=6 D={d}");
            if v6.holds {
                // the witnesses form a coset of the squares mu_3 in mu_6
                for w in &v6.witnesses {
                    assert_eq!(w.len(), 3, "D={d} {v6:?}");
                    assert!(w.iter().any(|&(_, den)| den == 3 || den == 6));
                }
            }
        }
    }

    #[test]
    fn r1_fails_for_minus_15_exhaustively() {
        // oracle: multiply theta by every power of zeta_4 and test squares directly
        let cg = class_group(-15);
        let alg = ValueAlgebra::base(cg.field(), 4).unwrap();
        let th = alg.from_quad(&cg.thetas[0]);
        for k in 0..4 {
            let z = alg.mul(&alg.zeta_pow(k), &th);
            assert!(nth_root(&alg, &z, 2).unwrap().is_none());
        }
        let v = check_r1(&cg, 1, 4).unwrap();
        assert!(!v.holds);
        assert_eq!(v.mu_order, 4);
    }

    #[test]
    fn r1_stable_under_alternate_generators() {
        use crate::quadfield::GeneratorChoice;
        for d in [-20, -15, -24, -84, -51] {
            let e = FieldE::new(d).unwrap();
            let m = QIdeal::from_int(e, d);
            let a = ClassGroup::new(e, &m).unwrap();
            let b = ClassGroup::with_choice(e, &m, GeneratorChoice { skip: 3 }).unwrap();
            for r in [4, 6] {
                assert_eq!(check_r1(&a, 1, r).unwrap().holds, check_r1(&b, 1, r).unwrap().holds);
            }
            if !a.is_cyclic() {
                assert_eq!(check_q1(&a, 1).unwrap().holds, check_q1(&b, 1).unwrap().holds);
            }
        }
    }
}
