//! Linear algebra and polynomials over prime fields `F_p` with `p < 2^20`.
//!
//! Residues are stored as `u64` in `[0, p)`. A product of two residues is
//! below `2^40`, so up to `2^23` products can be summed before a single
//! reduction; the inner loops below rely on that.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::hecke::IntMatrix;
use crate::pattern::FactorPattern;
use crate::primes::is_prime;

/// Exclusive upper limit on the modulus.
pub const MODULUS_LIMIT: u64 = 1 << 20;

/// Longest dot product that may be accumulated without reduction.
const LAZY_TERMS: usize = 1 << 23;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FfError {
    #[error("modulus {0} is not a prime below 2^20")]
    BadModulus(u64),
    #[error("polynomial is not squarefree; its factorization pattern is undefined")]
    NotSquarefree,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("operands use different moduli ({0} and {1})")]
    ModulusMismatch(u64, u64),
}

/// A prime `p < 2^20`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self, FfError> {
        if p < MODULUS_LIMIT && is_prime(p) {
            Ok(PrimeModulus(p))
        } else {
            Err(FfError::BadModulus(p))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    fn pow(self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero residue.
    fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.0));
        self.pow(a, self.0 - 2)
    }

    pub fn reduce_i64(self, v: i64) -> u64 {
        v.rem_euclid(self.0 as i64) as u64
    }

    pub fn reduce_big(self, v: &BigInt) -> u64 {
        let r = (v.magnitude() % self.0)
            .to_u64()
            .expect("residue fits in u64");
        if v.sign() == Sign::Minus && r != 0 {
            self.0 - r
        } else {
            r
        }
    }
}

/// Square matrix over `F_p`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    modulus: PrimeModulus,
    n: usize,
    data: Vec<u64>,
}

impl ModMatrix {
    pub fn from_rows(modulus: PrimeModulus, rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix must be square");
            data.extend(row.iter().map(|&v| modulus.reduce_i64(v)));
        }
        ModMatrix { modulus, n, data }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.n + j] = v;
    }

    pub fn trace(&self) -> u64 {
        (0..self.n).fold(0, |acc, i| self.modulus.add(acc, self.get(i, i)))
    }
}

/// Entry-wise reduction of an integer matrix into `[0, p)`.
pub fn reduce_matrix(m: &IntMatrix, p: PrimeModulus) -> ModMatrix {
    let n = m.dim();
    let data = m
        .rows()
        .iter()
        .flat_map(|row| row.iter().map(move |v| p.reduce_big(v)))
        .collect();
    ModMatrix {
        modulus: p,
        n,
        data,
    }
}

/// Polynomial over `F_p`, lowest degree first, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModPoly {
    modulus: PrimeModulus,
    coeffs: Vec<u64>,
}

impl fmt::Debug for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModPoly(p={}, {:?})", self.modulus.0, self.coeffs)
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "X")?,
                (1, _) => write!(f, "{c}*X")?,
                (_, 1) => write!(f, "X^{i}")?,
                _ => write!(f, "{c}*X^{i}")?,
            }
        }
        write!(f, " (mod {})", self.modulus.0)
    }
}

impl ModPoly {
    fn normalized(modulus: PrimeModulus, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { modulus, coeffs }
    }

    /// From residues or arbitrary integers, lowest degree first.
    pub fn from_i64s(modulus: PrimeModulus, coeffs: &[i64]) -> Self {
        Self::normalized(
            modulus,
            coeffs.iter().map(|&c| modulus.reduce_i64(c)).collect(),
        )
    }

    pub fn zero(modulus: PrimeModulus) -> Self {
        ModPoly {
            modulus,
            coeffs: Vec::new(),
        }
    }

    pub fn one(modulus: PrimeModulus) -> Self {
        ModPoly {
            modulus,
            coeffs: vec![1],
        }
    }

    /// The indeterminate `X`.
    pub fn x(modulus: PrimeModulus) -> Self {
        Self::normalized(modulus, vec![0, 1 % modulus.0])
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<u64> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(1)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None | Some(1) => self.clone(),
            Some(lc) => {
                let inv = self.modulus.inv(lc);
                let p = self.modulus;
                Self::normalized(p, self.coeffs.iter().map(|&c| p.mul(c, inv)).collect())
            }
        }
    }

    pub fn derivative(&self) -> Self {
        let p = self.modulus;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| p.mul(c, i as u64 % p.0))
            .collect();
        Self::normalized(p, coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                p.add(a, b)
            })
            .collect();
        Self::normalized(p, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                p.sub(a, b)
            })
            .collect();
        Self::normalized(p, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.modulus;
        if self.is_zero() || other.is_zero() {
            return Self::zero(p);
        }
        assert!(self.coeffs.len().min(other.coeffs.len()) <= LAZY_TERMS);
        let mut acc = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] += a * b;
            }
        }
        Self::normalized(p, acc.into_iter().map(|v| v % p.0).collect())
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let p = self.modulus;
        let dd = divisor.degree().expect("division by the zero polynomial");
        let Some(nd) = self.degree() else {
            return (Self::zero(p), Self::zero(p));
        };
        if nd < dd {
            return (Self::zero(p), self.clone());
        }
        let inv = p.inv(divisor.coeffs[dd]);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; nd - dd + 1];
        for i in (dd..=nd).rev() {
            let c = p.mul(rem[i], inv);
            quot[i - dd] = c;
            if c == 0 {
                continue;
            }
            let neg = p.0 - c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = (rem[k] + neg * b) % p.0;
            }
            debug_assert_eq!(rem[i], 0);
        }
        rem.truncate(dd);
        (Self::normalized(p, quot), Self::normalized(p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.modulus).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    fn check_same_modulus(&self, other: &Self) -> Result<(), FfError> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(FfError::ModulusMismatch(self.modulus.0, other.modulus.0))
        }
    }
}

/// Characteristic polynomial `det(X·I - A)` over `F_p`, monic of degree `n`.
///
/// Reduces `A` to upper Hessenberg form by elementary similarity
/// transformations, then expands the Hessenberg determinant with the usual
/// three-term recurrence. `O(n^3)` field operations, deterministic.
pub fn charpoly_mod_p(a: &ModMatrix) -> ModPoly {
    let p = a.modulus;
    let n = a.n;
    let mut h = a.clone();

    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| h.get(i, j) != 0) else {
            continue;
        };
        if piv != j + 1 {
            for c in 0..n {
                h.data.swap(piv * n + c, (j + 1) * n + c);
            }
            for r in 0..n {
                h.data.swap(r * n + piv, r * n + j + 1);
            }
        }
        let inv = p.inv(h.get(j + 1, j));
        for r in j + 2..n {
            let u = p.mul(h.get(r, j), inv);
            if u == 0 {
                continue;
            }
            // row_r -= u * row_{j+1}
            for c in 0..n {
                let v = p.sub(h.get(r, c), p.mul(u, h.get(j + 1, c)));
                h.set(r, c, v);
            }
            // col_{j+1} += u * col_r
            for rr in 0..n {
                let v = p.add(h.get(rr, j + 1), p.mul(u, h.get(rr, r)));
                h.set(rr, j + 1, v);
            }
        }
    }

    // polys[m] = charpoly of the leading m×m block.
    let mut polys: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    polys.push(vec![1 % p.0]);
    for m in 0..n {
        let prev = &polys[m];
        let mut next = vec![0u64; m + 2];
        let diag = h.get(m, m);
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = p.add(next[i + 1], c);
            next[i] = p.sub(next[i], p.mul(diag, c));
        }
        let mut t = 1u64;
        for i in (0..m).rev() {
            t = p.mul(t, h.get(i + 1, i));
            if t == 0 {
                break;
            }
            let coef = p.mul(t, h.get(i, m));
            if coef == 0 {
                continue;
            }
            for (k, &c) in polys[i].iter().enumerate() {
                next[k] = p.sub(next[k], p.mul(coef, c));
            }
        }
        polys.push(next);
    }
    ModPoly::normalized(p, polys.pop().expect("at least the constant polynomial"))
}

/// Whether `f` has no repeated roots over the algebraic closure, tested as
/// `deg gcd(f, f') = 0`.
pub fn is_squarefree(f: &ModPoly) -> bool {
    if f.is_zero() {
        return false;
    }
    f.gcd(&f.derivative()).degree() == Some(0)
}

/// The `F_p`-linear Frobenius map `g ↦ g^p` on `F_p[X]/(f)`, stored as the
/// images `X^{jp} mod f` for `j < deg f`.
struct FrobeniusMap {
    modulus: PrimeModulus,
    images: Vec<Vec<u64>>,
    n: usize,
}

impl FrobeniusMap {
    fn new(f: &ModPoly) -> Self {
        let p = f.modulus;
        let n = f.degree().expect("nonzero modulus polynomial");
        let xp = ModPoly::x(p).pow_mod(p.0, f);
        let mut images = Vec::with_capacity(n);
        let mut cur = ModPoly::one(p).rem(f);
        for _ in 0..n {
            let mut v = cur.coeffs.clone();
            v.resize(n, 0);
            images.push(v);
            cur = cur.mul(&xp).rem(f);
        }
        FrobeniusMap {
            modulus: p,
            images,
            n,
        }
    }

    fn apply(&self, g: &ModPoly) -> ModPoly {
        let mut acc = vec![0u64; self.n];
        for (&c, img) in g.coeffs.iter().zip(&self.images) {
            if c == 0 {
                continue;
            }
            for (a, &b) in acc.iter_mut().zip(img) {
                *a += c * b;
            }
        }
        let p = self.modulus;
        ModPoly::normalized(p, acc.into_iter().map(|v| v % p.0).collect())
    }
}

/// Distinct-degree factorization of a squarefree polynomial: pairs
/// `(i, g_i)` where `g_i` is the (monic) product of all irreducible factors of
/// degree `i`. Only classes with `deg g_i > 0` are returned, in increasing `i`.
///
/// `X^{p^i} mod f` is advanced with the Frobenius map of `F_p[X]/(f)`;
/// reducing that residue modulo the shrinking cofactor gives
/// `X^{p^i} mod f_remaining`.
pub fn distinct_degree_factorization(f: &ModPoly) -> Result<Vec<(usize, ModPoly)>, FfError> {
    if f.is_zero() {
        return Err(FfError::ZeroPolynomial);
    }
    if !is_squarefree(f) {
        return Err(FfError::NotSquarefree);
    }
    let f = f.monic();
    let p = f.modulus;
    let mut out = Vec::new();
    if f.degree() == Some(0) {
        return Ok(out);
    }
    let frob = FrobeniusMap::new(&f);
    let x = ModPoly::x(p);
    let mut remaining = f.clone();
    let mut power = frob.apply(&x.rem(&f));
    let mut i = 1;
    while remaining.degree().unwrap_or(0) >= 2 * i {
        let g = remaining.gcd(&power.sub(&x));
        if g.degree().unwrap_or(0) > 0 {
            remaining = remaining.div_rem(&g).0;
            out.push((i, g));
        }
        i += 1;
        power = frob.apply(&power);
    }
    if let Some(deg) = remaining.degree().filter(|&d| d > 0) {
        out.push((deg, remaining));
    }
    Ok(out)
}

/// Factorization pattern of a squarefree polynomial over `F_p`.
pub fn factorization_pattern(f: &ModPoly) -> Result<FactorPattern, FfError> {
    let classes = distinct_degree_factorization(f)?;
    let mut pattern = FactorPattern::new();
    for (i, g) in classes {
        let deg = g.degree().expect("nonconstant class");
        debug_assert_eq!(deg % i, 0);
        pattern.add(i, deg / i);
    }
    Ok(pattern)
}

/// Product of the given polynomials (all over the same field).
pub fn product(polys: &[ModPoly], modulus: PrimeModulus) -> Result<ModPoly, FfError> {
    let one = ModPoly::one(modulus);
    polys.iter().try_fold(one, |acc, g| {
        acc.check_same_modulus(g)?;
        Ok(acc.mul(g))
    })
}
