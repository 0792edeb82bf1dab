//! Exact square and cube roots in E.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::elem::QuadElem;
use crate::arith::{rat, rational_cbrt, rational_sqrt};

/// w with w^2 = z, if one exists in E.
pub fn is_square_in_e(z: &QuadElem) -> Option<QuadElem> {
    let d = z.delta();
    if z.is_zero() {
        return Some(z.clone());
    }
    let (u, v) = z.sqrt_coords();
    let dr = rat(d);
    let two = rat(2);
    let cands: Vec<(BigRational, BigRational)> = if v.is_zero() {
        let mut c = Vec::new();
        if let Some(a) = rational_sqrt(&u) {
            c.push((a, BigRational::zero()));
        }
        if let Some(b) = rational_sqrt(&(&u / &dr)) {
            c.push((BigRational::zero(), b));
        }
        c
    } else {
        // a^2 - d b^2 = n = sqrt(N(z)), a^2 + d b^2 = u, 2ab = v
        let nz = &u * &u - &dr * &v * &v;
        let Some(n) = rational_sqrt(&nz) else {
            return None;
        };
        let mut c = Vec::new();
        if let Some(a) = rational_sqrt(&((&u + &n) / &two)) {
            if !a.is_zero() {
                let b = &v / (&two * &a);
                c.push((a, b));
            }
        }
        c
    };
    for (a, b) in cands {
        let w = QuadElem::from_sqrt_coords(d, a, b);
        if &w * &w == *z {
            return Some(normalise_sign(w));
        }
    }
    None
}

fn normalise_sign(w: QuadElem) -> QuadElem {
    if w.y.is_negative() || (w.y.is_zero() && w.x.is_negative()) {
        -w
    } else {
        w
    }
}

/// Integer roots of s^3 - p s - q = 0.
fn depressed_cubic_integer_roots(p: &BigInt, q: &BigInt) -> Vec<BigInt> {
    let f = |s: &BigInt| s * s * s - p * s - q;
    let m = BigInt::one() + p.abs() + q.abs();
    let mut intervals: Vec<(BigInt, BigInt, bool)> = Vec::new();
    if p.is_positive() {
        let r2: BigInt = p / 3;
        let c1 = Roots::sqrt(&r2);
        let c2 = if &c1 * &c1 * 3 == *p { c1.clone() } else { &c1 + 1 };
        intervals.push((-m.clone(), -c2.clone(), true));
        intervals.push((-c1.clone(), c1.clone(), false));
        intervals.push((c2, m, true));
    } else {
        intervals.push((-m.clone(), m, true));
    }
    let mut roots: Vec<BigInt> = Vec::new();
    for (lo, hi, increasing) in intervals {
        if lo > hi {
            continue;
        }
        let (mut lo, mut hi) = (lo, hi);
        // find s in [lo, hi] with f(s) = 0, f monotone
        let sign = |v: &BigInt| if increasing { v.clone() } else { -v.clone() };
        if sign(&f(&lo)).is_positive() || sign(&f(&hi)).is_negative() {
            continue;
        }
        while lo < hi {
            let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
            if sign(&f(&mid)).is_negative() {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if f(&lo).is_zero() && !roots.contains(&lo) {
            roots.push(lo);
        }
    }
    roots
}

/// w with w^3 = z, if one exists in E.
pub fn is_cube_in_e(z: &QuadElem) -> Option<QuadElem> {
    let d = z.delta();
    if z.is_zero() {
        return Some(z.clone());
    }
    let n = rational_cbrt(&z.norm())?;
    let (u, v) = z.sqrt_coords();
    // w = a + b sqrt(d): a^2 - d b^2 = n and u = 4a^3 - 3na; with t = 2a,
    // t^3 - 3 n t - 2u = 0. Scale t = s / D to get integer coefficients.
    let den = n.denom().lcm(u.denom());
    let dr = BigRational::from_integer(den.clone());
    let p = (rat(3) * &n * &dr * &dr).to_integer();
    let q = (rat(2) * &u * &dr * &dr * &dr).to_integer();
    let dd = rat(d);
    for s in depressed_cubic_integer_roots(&p, &q) {
        let a = BigRational::new(s, den.clone() * 2);
        let b2 = (&a * &a - &n) / &dd;
        let Some(b) = rational_sqrt(&b2) else {
            continue;
        };
        for bb in [b.clone(), -b.clone()] {
            let w = QuadElem::from_sqrt_coords(d, a.clone(), bb);
            if &(&w * &w) * &w == *z {
                return Some(w);
            }
        }
    }
    let _ = v;
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::FieldE;

    #[test]
    fn squares() {
        let e = FieldE::new(-15).unwrap();
        assert_eq!(is_square_in_e(&e.int(4)).unwrap(), e.int(2));
        assert!(is_square_in_e(&e.elem(8, 1)).is_none());
        assert!(is_square_in_e(&e.int(2)).is_none());
        let w = e.elem(3, -2);
        let z = &w * &w;
        let r = is_square_in_e(&z).unwrap();
        assert_eq!(&r * &r, z);
        // -15 = sqrt(-15)^2
        assert_eq!(is_square_in_e(&e.int(-15)).unwrap(), e.sqrt_delta());
        let e4 = FieldE::new(-4).unwrap();
        assert!(is_square_in_e(&e4.int(-1)).is_some());
        assert!(is_square_in_e(&e4.int(2)).is_none());
        assert!(is_square_in_e(&e4.elem(2, 1)).is_none()); // i is not a square
        assert!(is_square_in_e(&e4.int(-4)).is_some());
    }

    #[test]
    fn cubes() {
        let e = FieldE::new(-23).unwrap();
        assert_eq!(is_cube_in_e(&e.int(-8)).unwrap(), e.int(-2));
        let w = e.elem(5, -3);
        let z = w.pow(3);
        assert_eq!(is_cube_in_e(&z).unwrap(), w);
        assert!(is_cube_in_e(&e.elem(3, 1)).is_none());
        let frac = z.scale(&crate::arith::rat_frac(1, 27));
        assert!(is_cube_in_e(&frac).is_some());
        let e3 = FieldE::new(-3).unwrap();
        // zeta_6 is a cube of zeta_18? no: zeta_6 = 2 + w is not a cube in Q(zeta_3)
        assert!(is_cube_in_e(&e3.elem(2, 1)).is_none());
        // but zeta_3 = 1 + w is the cube of zeta_9? no; -1 is a cube
        assert!(is_cube_in_e(&e3.int(-1)).is_some());
    }
}
