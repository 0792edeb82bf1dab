//! Small integer and rational helpers shared by the number-theoretic modules.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        0
    } else {
        a.lcm(&b)
    }
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
pub fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn mod_pow(base: i64, exp: u64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as i128;
    let mut b = (base as i128).rem_euclid(m128);
    let mut e = exp;
    let mut acc: i128 = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        e >>= 1;
    }
    acc as i64
}

pub fn mod_inv(a: i64, m: i64) -> Option<i64> {
    let (g, x, _) = xgcd((a as i128).rem_euclid(m as i128), m as i128);
    if g != 1 {
        None
    } else {
        Some(x.rem_euclid(m as i128) as i64)
    }
}

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn primes_up_to(n: i64) -> Vec<i64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &p)| if p { Some(k as i64) } else { None })
        .collect()
}

/// Prime factorization of |n| by trial division, primes ascending.
pub fn factorize(n: i64) -> Vec<(i64, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: i64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

pub fn euler_phi(n: i64) -> i64 {
    factorize(n)
        .iter()
        .fold(n.abs(), |acc, &(p, _)| acc / p * (p - 1))
}

/// Whether `d` is the discriminant of a quadratic field (d != 1).
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let q = d / 4;
            matches!(q.rem_euclid(4), 2 | 3) && is_squarefree(q)
        }
        _ => false,
    }
}

/// Kronecker symbol (a/n) for arbitrary integers.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let v = n.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        n >>= v;
        if v % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
    }
    // Jacobi symbol (a/n) with n odd positive.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Squarefree kernel sign * prod p^(e mod 2).
pub fn squarefree_part(n: i64) -> i64 {
    let s = n.signum();
    s * factorize(n)
        .iter()
        .filter(|&&(_, e)| e % 2 == 1)
        .map(|&(p, _)| p)
        .product::<i64>()
}

/// Discriminant of Q(sqrt(n)) for a non-square integer n.
pub fn field_discriminant_of(n: i64) -> i64 {
    let s = squarefree_part(n);
    if s.rem_euclid(4) == 1 {
        s
    } else {
        4 * s
    }
}

pub fn big_squarefree_part(n: &BigInt) -> BigInt {
    let mut m = n.abs();
    let mut out = BigInt::one();
    let mut d = BigInt::from(2);
    while &d * &d <= m {
        let mut e = 0;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &d;
        }
        d += 1;
    }
    out *= m;
    if n.sign() == Sign::Minus {
        -out
    } else {
        out
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact square root of a nonnegative rational, if it is a square.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

/// Exact cube root of a rational, if it is a cube.
pub fn rational_cbrt(q: &BigRational) -> Option<BigRational> {
    let n = q.numer();
    let d = q.denom();
    let cn = n.cbrt();
    let cd = d.cbrt();
    if &(&cn * &cn * &cn) == n && &(&cd * &cd * &cd) == d {
        Some(BigRational::new(cn, cd))
    } else {
        None
    }
}

pub fn rat_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn rat_to_i64(q: &BigRational) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

/// Coefficients (constant term first) of the r-th cyclotomic polynomial.
pub fn cyclotomic_poly(r: u32) -> Vec<i64> {
    // Phi_r = (x^r - 1) / prod_{d | r, d < r} Phi_d
    let mut num = vec![0i64; r as usize + 1];
    num[0] = -1;
    num[r as usize] = 1;
    for d in 1..r {
        if r % d == 0 {
            let den = cyclotomic_poly(d);
            num = poly_exact_div(&num, &den);
        }
    }
    num
}

fn poly_exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let lead = *den.last().unwrap();
    let qlen = rem.len() - dn;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn] / lead;
        q[i] = c;
        for j in 0..=dn {
            rem[i + j] -= c * den[j];
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// Baby-step giant-step discrete log in a cyclic group of known order.
/// `mul` multiplies, `key` gives a hashable canonical form.
pub fn bsgs<T, K, M, F>(generator: &T, target: &T, order: u64, identity: &T, mul: M, key: F) -> Option<u64>
where
    T: Clone,
    K: std::hash::Hash + Eq,
    M: Fn(&T, &T) -> T,
    F: Fn(&T) -> K,
{
    let m = (order as f64).sqrt().ceil() as u64 + 1;
    let mut table = std::collections::HashMap::with_capacity(m as usize);
    let mut cur = identity.clone();
    for j in 0..m {
        table.entry(key(&cur)).or_insert(j);
        cur = mul(&cur, generator);
    }
    // cur = g^m; giant step multiplies target by g^{-m} = g^{order - m mod order}
    let inv_step = pow_generic(generator, (order - (m % order)) % order, identity, &mul);
    let mut gamma = target.clone();
    for i in 0..=m {
        if let Some(&j) = table.get(&key(&gamma)) {
            return Some((i * m + j) % order.max(1));
        }
        gamma = mul(&gamma, &inv_step);
    }
    None
}

pub fn pow_generic<T: Clone, M: Fn(&T, &T) -> T>(base: &T, mut e: u64, identity: &T, mul: &M) -> T {
    let mut acc = identity.clone();
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &b);
        }
        b = mul(&b, &b);
        e >>= 1;
    }
    acc
}

/// Smith normal form of an integer matrix: returns (u, d, v) with u * a * v = d,
/// d diagonal with d[i][i] | d[i+1][i+1], u and v unimodular.
pub fn smith_normal_form(a: &[Vec<i128>]) -> (Vec<Vec<i128>>, Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut d: Vec<Vec<i128>> = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // pivot: smallest nonzero |entry| in the lower-right block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d[i][j] != 0 && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return (u, d, v);
            };
            d.swap(t, pi);
            u.swap(t, pi);
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let mut done = true;
            let p = d[t][t];
            for i in t + 1..rows {
                let q = d[i][t].div_euclid(p);
                if q != 0 {
                    for j in 0..cols {
                        d[i][j] -= q * d[t][j];
                    }
                    for j in 0..rows {
                        u[i][j] -= q * u[t][j];
                    }
                }
                if d[i][t] != 0 {
                    done = false;
                }
            }
            for j in t + 1..cols {
                let q = d[t][j].div_euclid(p);
                if q != 0 {
                    for i in 0..rows {
                        d[i][j] -= q * d[i][t];
                    }
                    for i in 0..cols {
                        v[i][j] -= q * v[i][t];
                    }
                }
                if d[t][j] != 0 {
                    done = false;
                }
            }
            if !done {
                continue;
            }
            // divisibility condition
            let mut fixed = true;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if d[i][j] % p != 0 {
                        for k in 0..cols {
                            d[t][k] += d[i][k];
                        }
                        for k in 0..rows {
                            u[t][k] += u[i][k];
                        }
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if d[t][t] < 0 {
            for j in 0..cols {
                d[t][j] = -d[t][j];
            }
            for j in 0..rows {
                u[t][j] = -u[t][j];
            }
        }
    }
    (u, d, v)
}

pub fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

/// Inverse of a unimodular integer matrix via fraction-free Gauss-Jordan.
pub fn unimodular_inverse(m: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("singular matrix");
        a.swap(c, p);
        inv.swap(c, p);
        let piv = a[c][c].clone();
        for j in 0..n {
            a[c][j] = &a[c][j] / &piv;
            inv[c][j] = &inv[c][j] / &piv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..n {
                    let t = &f * &a[c][j];
                    a[r][j] = &a[r][j] - t;
                    let t = &f * &inv[c][j];
                    inv[r][j] = &inv[r][j] - t;
                }
            }
        }
    }
    inv.into_iter()
        .map(|r| r.into_iter().map(|x| x.to_integer().to_i128().expect("not unimodular")).collect())
        .collect()
}

/// Exact rank of a set of rational vectors.
pub fn rational_rank(vectors: &[Vec<BigRational>]) -> usize {
    let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for (piv, b) in &basis {
            if !w[*piv].is_zero() {
                let f = &w[*piv] / &b[*piv];
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi = &*wi - &f * bi;
                }
            }
        }
        if let Some(piv) = w.iter().position(|x| !x.is_zero()) {
            basis.push((piv, w));
        }
    }
    basis.len()
}

/// First linear dependency among the vectors, as coefficients c with sum c_i v_i = 0
/// and the last coefficient equal to 1. Returns None if independent.
pub fn first_dependency(vectors: &[Vec<BigRational>]) -> Option<Vec<BigRational>> {
    // echelon basis with tracked combinations
    let mut basis: Vec<(usize, Vec<BigRational>, Vec<BigRational>)> = Vec::new();
    let n = vectors.len();
    for (k, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        let mut comb = vec![BigRational::zero(); n];
        comb[k] = BigRational::one();
        for (piv, b, bc) in &basis {
            if !w[*piv].is_zero() {
                let f = &w[*piv] / &b[*piv];
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi = &*wi - &f * bi;
                }
                for (ci, bci) in comb.iter_mut().zip(bc) {
                    *ci = &*ci - &f * bci;
                }
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            Some(piv) => basis.push((piv, w, comb)),
            None => {
                comb.truncate(k + 1);
                return Some(comb);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre(a: i64, p: i64) -> i32 {
        let a = a.rem_euclid(p);
        if a == 0 {
            return 0;
        }
        if (1..p).any(|x| x * x % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-15, 2), 1);
        assert_eq!(kronecker(-15, 3), 0);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-8, 3), 1);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
    }

    #[test]
    fn kronecker_matches_legendre_for_odd_primes() {
        for p in primes_up_to(1000).into_iter().filter(|&p| p > 2) {
            for d in (-500..0).filter(|&d| is_fundamental_discriminant(d)) {
                assert_eq!(kronecker(d, p), legendre(d, p), "d={d} p={p}");
            }
        }
    }

    #[test]
    fn kronecker_at_two_counts_square_roots_mod_eight() {
        for d in (-500..0).filter(|&d| is_fundamental_discriminant(d)) {
            let expected = if d % 2 == 0 {
                0
            } else if (0..8).any(|x| (x * x - d).rem_euclid(8) == 0) {
                1
            } else {
                -1
            };
            assert_eq!(kronecker(d, 2), expected);
        }
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(9), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn snf_of_small_matrix() {
        let a = vec![vec![2i128, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let (u, d, v) = smith_normal_form(&a);
        assert_eq!((d[0][0], d[1][1], d[2][2]), (2, 6, 12));
        let mul = |x: &Vec<Vec<i128>>, y: &Vec<Vec<i128>>| -> Vec<Vec<i128>> {
            (0..x.len())
                .map(|i| (0..y[0].len()).map(|j| (0..y.len()).map(|k| x[i][k] * y[k][j]).sum()).collect())
                .collect()
        };
        assert_eq!(mul(&mul(&u, &a), &v), d);
        let vi = unimodular_inverse(&v);
        assert_eq!(mul(&v, &vi), identity(3));
    }

    #[test]
    fn fundamental_discriminants() {
        let small: Vec<i64> = (-30..0).filter(|&d| is_fundamental_discriminant(d)).collect();
        assert_eq!(small, vec![-24, -23, -20, -19, -15, -11, -8, -7, -4, -3]);
    }
}
