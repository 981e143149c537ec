//! Independent reference computations shared by the integration tests.
//!
//! Outside of [`fixtures`], nothing here calls into the library's series,
//! Hecke or finite-field code; everything is recomputed naively so that
//! agreement is meaningful.

#![allow(dead_code)]

pub mod fixtures;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Truncated power series as a plain coefficient vector.
pub type Series = Vec<BigInt>;

pub fn sigma(n: u64, j: u32) -> BigInt {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| BigInt::from(d).pow(j))
        .sum()
}

/// E4 or E6 from the divisor-sum formula.
pub fn eisenstein(k: u32, prec: usize) -> Series {
    let c: i64 = match k {
        4 => 240,
        6 => -504,
        _ => panic!("oracle only knows E4 and E6"),
    };
    (0..prec)
        .map(|n| {
            if n == 0 {
                BigInt::one()
            } else {
                sigma(n as u64, k - 1) * c
            }
        })
        .collect()
}

pub fn mul(a: &Series, b: &Series) -> Series {
    let prec = a.len().min(b.len());
    let mut out = vec![BigInt::zero(); prec];
    for (i, x) in a.iter().enumerate().take(prec) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(prec - i) {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn power(a: &Series, e: u32) -> Series {
    let mut out = vec![BigInt::zero(); a.len()];
    if !out.is_empty() {
        out[0] = BigInt::one();
    }
    for _ in 0..e {
        out = mul(&out, a);
    }
    out
}

/// `q * prod (1 - q^n)^24`, one factor at a time.
pub fn delta(prec: usize) -> Series {
    let mut s = vec![BigInt::zero(); prec];
    if prec < 2 {
        return s;
    }
    s[1] = BigInt::one();
    for n in 1..prec {
        for _ in 0..24 {
            for i in (n..prec).rev() {
                let lower = s[i - n].clone();
                s[i] -= lower;
            }
        }
    }
    s
}

pub fn dimension(k: u32) -> usize {
    if k % 2 == 1 || k < 12 {
        return 0;
    }
    let base = (k / 12) as usize;
    if k % 12 == 2 {
        base - 1
    } else {
        base
    }
}

/// `Delta^i * E6^b * E4^a` for the raw spanning set of weight `k`.
pub fn spanning_form(k: u32, i: u32, prec: usize) -> Series {
    let b = (k / 2) % 2;
    let rest = k - 12 * i - 6 * b;
    assert_eq!(rest % 4, 0);
    let e4 = power(&eisenstein(4, prec), rest / 4);
    let e6 = power(&eisenstein(6, prec), b);
    mul(&mul(&power(&delta(prec), i), &e6), &e4)
}

/// Coefficients of `q^1..q^len` of `T_2 f`.
pub fn t2_coefficients(f: &Series, k: u32, len: usize) -> Vec<BigInt> {
    let scale = BigInt::from(2).pow(k - 1);
    (1..=len)
        .map(|n| {
            let mut c = f[2 * n].clone();
            if n % 2 == 0 {
                c += &scale * &f[n / 2];
            }
            c
        })
        .collect()
}

fn rational(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Solve `X * G = T` for `X` by Gauss-Jordan elimination over the rationals.
pub fn solve_right(t: &[Vec<BigRational>], g: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    // Transpose to G^T X^T = T^T, then eliminate on the augmented matrix.
    let n = g.len();
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|r| {
            let mut row: Vec<BigRational> = (0..n).map(|c| g[c][r].clone()).collect();
            row.extend((0..t.len()).map(|i| t[i][r].clone()));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !aug[r][col].is_zero())
            .expect("spanning set is not linearly independent");
        aug.swap(col, pivot);
        let inv = aug[col][col].recip();
        for x in aug[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                let pivot_row = aug[col].clone();
                for (x, y) in aug[r].iter_mut().zip(&pivot_row) {
                    *x -= &factor * y;
                }
            }
        }
    }
    (0..t.len())
        .map(|i| (0..n).map(|j| aug[j][n + i].clone()).collect())
        .collect()
}

/// Matrix of `T_2` in the raw spanning-set basis, over the rationals.
pub fn spanning_t2_matrix(k: u32) -> Vec<Vec<BigRational>> {
    let d = dimension(k);
    let prec = 2 * d + 1;
    let forms: Vec<Series> = (1..=d as u32).map(|i| spanning_form(k, i, prec)).collect();
    let g: Vec<Vec<BigRational>> = forms
        .iter()
        .map(|f| (1..=d).map(|n| rational(&f[n])).collect())
        .collect();
    let t: Vec<Vec<BigRational>> = forms
        .iter()
        .map(|f| t2_coefficients(f, k, d).iter().map(rational).collect())
        .collect();
    solve_right(&t, &g)
}

pub fn to_rational(rows: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| r.iter().map(rational).collect())
        .collect()
}

/// Monic characteristic polynomial `det(xI - A)`, constant term first,
/// via the Faddeev-LeVerrier recurrence.
pub fn charpoly(a: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = a.len();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let identity = |i: usize, j: usize| {
        if i == j {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    };
    // m holds M_k; start with M_0 = 0 so that M_1 = I.
    let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
    for step in 1..=n {
        let prev = coeffs[n - step + 1].clone();
        let am = matmul(a, &m);
        for i in 0..n {
            for j in 0..n {
                m[i][j] = &am[i][j] + &prev * identity(i, j);
            }
        }
        let am = matmul(a, &m);
        let trace: BigRational = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - step] = -trace / BigRational::from_integer(BigInt::from(step));
    }
    coeffs
}

fn matmul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|l| &a[i][l] * &b[l][j]).sum())
                .collect()
        })
        .collect()
}

/// Reduce a rational with denominator prime to `p` into `[0, p)`.
pub fn reduce_rational(x: &BigRational, p: u64) -> u64 {
    let p_big = BigInt::from(p);
    let num = ((x.numer() % &p_big) + &p_big) % &p_big;
    let den = ((x.denom() % &p_big) + &p_big) % &p_big;
    assert!(!den.is_zero(), "denominator divisible by {p}");
    let inv = den.modpow(&(&p_big - 2u32), &p_big);
    let r = (num * inv) % &p_big;
    u64::try_from(r.abs()).unwrap()
}

/// Trial-division primality for moderately sized test inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Cycle type of a permutation as a sorted list of cycle lengths.
pub fn cycle_lengths(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable();
    out
}

/// Lexicographic successor; returns false after the last permutation.
pub fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every permutation of `0..n`, visited in lexicographic order.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut v: Vec<usize> = (0..n).collect();
    loop {
        f(&v);
        if !next_permutation(&mut v) {
            break;
        }
    }
}
