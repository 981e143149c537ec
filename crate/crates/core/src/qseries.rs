//! Truncated power series in `q` with exact integer coefficients, and the
//! Victor Miller basis of the space of level-one cusp forms.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::hecke::dim_cusp_forms;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("Eisenstein series of weight {0} is not supported (only 4 and 6)")]
    UnsupportedEisensteinWeight(u32),
    #[error("weight {0} must be even and at least 12")]
    InvalidWeight(u32),
    #[error("precision {given} is below the required {required} coefficients")]
    InsufficientPrecision { given: usize, required: usize },
    #[error("precision must be positive")]
    ZeroPrecision,
}

/// A power series `a_0 + a_1 q + ... + a_{prec-1} q^{prec-1} + O(q^prec)`.
///
/// The number of stored coefficients is the precision; binary operations
/// truncate to the smaller precision of their operands.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<BigInt>,
}

impl QSeries {
    pub fn zero(prec: usize) -> Self {
        QSeries {
            coeffs: vec![BigInt::zero(); prec],
        }
    }

    pub fn one(prec: usize) -> Self {
        let mut s = Self::zero(prec);
        if prec > 0 {
            s.coeffs[0] = BigInt::one();
        }
        s
    }

    /// `q^n` at the given precision (zero when `n >= prec`).
    pub fn monomial(n: usize, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        if n < prec {
            s.coeffs[n] = BigInt::one();
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        QSeries { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        QSeries {
            coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `q^n`, or `None` beyond the stored precision.
    pub fn coeff(&self, n: usize) -> Option<&BigInt> {
        self.coeffs.get(n)
    }

    pub fn truncate(&self, prec: usize) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().take(prec).cloned().collect(),
        }
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divide every coefficient by `c`, returning `None` unless all divisions
    /// are exact.
    pub fn div_exact(&self, c: &BigInt) -> Option<Self> {
        if c.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            let (q, r) = a.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(QSeries { coeffs: out })
    }

    /// `self - c * other`, in place, over the common precision.
    fn sub_scaled_assign(&mut self, c: &BigInt, other: &QSeries) {
        self.coeffs.truncate(other.prec());
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a -= c * b;
            }
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QSeries::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl Add for &QSeries {
    type Output = QSeries;

    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &QSeries {
    type Output = QSeries;

    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &QSeries {
    type Output = QSeries;

    fn neg(self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &QSeries {
    type Output = QSeries;

    /// Truncated Cauchy product.
    fn mul(self, rhs: &QSeries) -> QSeries {
        let prec = self.prec().min(rhs.prec());
        let mut out = vec![BigInt::zero(); prec];
        for (i, a) in self.coeffs.iter().take(prec).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(prec - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs: out }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QSeries {
            type Output = QSeries;
            fn $m(self, rhs: QSeries) -> QSeries {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

pub fn series_add(a: &QSeries, b: &QSeries) -> QSeries {
    a + b
}

pub fn series_mul(a: &QSeries, b: &QSeries) -> QSeries {
    a * b
}

/// Sum of the `j`-th powers of the divisors of `n`.
pub fn divisor_power_sum(n: u64, j: u32) -> BigInt {
    let mut total = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += BigInt::from(d).pow(j);
            let e = n / d;
            if e != d {
                total += BigInt::from(e).pow(j);
            }
        }
        d += 1;
    }
    total
}

/// `E_4 = 1 + 240 Σ σ_3(n) q^n` or `E_6 = 1 - 504 Σ σ_5(n) q^n`.
pub fn eisenstein(k: u32, prec: usize) -> Result<QSeries, SeriesError> {
    let (scale, power) = match k {
        4 => (BigInt::from(240), 3),
        6 => (BigInt::from(-504), 5),
        _ => return Err(SeriesError::UnsupportedEisensteinWeight(k)),
    };
    if prec == 0 {
        return Err(SeriesError::ZeroPrecision);
    }
    let mut coeffs = Vec::with_capacity(prec);
    coeffs.push(BigInt::one());
    for n in 1..prec {
        coeffs.push(&scale * divisor_power_sum(n as u64, power));
    }
    Ok(QSeries { coeffs })
}

/// Euler's product `∏_{n≥1} (1 - q^n)`, expanded with the pentagonal number
/// theorem: exponents `m(3m-1)/2` for `m = 0, ±1, ±2, ...` with sign `(-1)^m`.
fn euler_product(prec: usize) -> QSeries {
    let mut s = QSeries::zero(prec);
    let mut m: i64 = 0;
    loop {
        let mut any = false;
        for mm in if m == 0 { vec![0] } else { vec![m, -m] } {
            let e = mm * (3 * mm - 1) / 2;
            if (e as usize) < prec {
                any = true;
                s.coeffs[e as usize] = if m % 2 == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                };
            }
        }
        if !any {
            break;
        }
        m += 1;
    }
    s
}

/// The discriminant form `Δ = q ∏ (1 - q^n)^24`.
pub fn delta(prec: usize) -> QSeries {
    if prec == 0 {
        return QSeries::zero(0);
    }
    // q * eta^24 needs eta^24 only to precision prec - 1.
    let eta24 = euler_product(prec - 1).pow(24);
    let mut coeffs = Vec::with_capacity(prec);
    coeffs.push(BigInt::zero());
    coeffs.extend(eta24.coeffs);
    QSeries { coeffs }
}

/// Number of coefficients (indices `0..=2(d+2)`) the verifier works with.
pub fn working_precision(d: usize) -> usize {
    2 * (d + 2) + 1
}

/// Exponents `(b, α_i)` for the spanning set `Δ^i E_6^b E_4^{α_i}`, `i = 1..=d`.
fn spanning_exponents(k: u32, d: usize) -> (u32, Vec<u32>) {
    let b = (k / 2) % 2;
    let alphas = (1..=d)
        .map(|i| {
            let num = k as i64 - 12 * i as i64 - 6 * b as i64;
            assert!(
                num >= 0 && num % 4 == 0,
                "exponent of E4 must be a non-negative integer (k = {k}, i = {i})"
            );
            (num / 4) as u32
        })
        .collect();
    (b, alphas)
}

/// The spanning set `g_i = Δ^i E_6^b E_4^{α_i}`, `i = 1..=d`, where
/// `b = (k/2) mod 2` and `α_i = (k - 12i - 6b)/4`. Each `g_i = q^i + O(q^{i+1})`.
pub fn miller_spanning_set(k: u32, prec: usize) -> Result<Vec<QSeries>, SeriesError> {
    if k % 2 == 1 || k < 12 {
        return Err(SeriesError::InvalidWeight(k));
    }
    let d = dim_cusp_forms(k as i64);
    let required = 2 * (d + 2);
    if prec < required {
        return Err(SeriesError::InsufficientPrecision {
            given: prec,
            required,
        });
    }
    if d == 0 {
        return Ok(Vec::new());
    }
    let (b, alphas) = spanning_exponents(k, d);
    let e4 = eisenstein(4, prec)?;
    let e4_cubed = e4.pow(3);
    let dl = delta(prec);

    // α_{i-1} = α_i + 3, so walking i downward multiplies the E_4 part by E_4^3.
    let mut delta_pows = Vec::with_capacity(d);
    delta_pows.push(dl.clone());
    for i in 1..d {
        let next = &delta_pows[i - 1] * &dl;
        delta_pows.push(next);
    }
    let mut tail = if b == 1 {
        eisenstein(6, prec)?
    } else {
        QSeries::one(prec)
    };
    tail = &tail * &e4.pow(alphas[d - 1]);

    let mut out = vec![QSeries::zero(prec); d];
    for i in (0..d).rev() {
        out[i] = &delta_pows[i] * &tail;
        if i > 0 {
            tail = &tail * &e4_cubed;
        }
    }
    Ok(out)
}

/// Victor Miller basis `f_1, ..., f_d` of `S_k`: the coefficient of `q^j` in
/// `f_i` is `δ_ij` for `1 ≤ i, j ≤ d`.
///
/// Built from [`miller_spanning_set`] by clearing columns `i+1..=d` of each
/// `g_i` with the already reduced `f_j`. All pivots are 1 so the arithmetic
/// stays integral.
pub fn miller_basis(k: u32, prec: usize) -> Result<Vec<QSeries>, SeriesError> {
    let mut basis = miller_spanning_set(k, prec)?;
    let d = basis.len();
    for i in (0..d).rev() {
        debug_assert!(basis[i].coeffs[i + 1].is_one());
        for j in i + 1..d {
            let c = basis[i].coeffs[j + 1].clone();
            if c.is_zero() {
                continue;
            }
            let (head, rest) = basis.split_at_mut(j);
            head[i].sub_scaled_assign(&c, &rest[0]);
        }
    }
    Ok(basis)
}

/// True when `coeffs[1..=d]` of the basis form the identity matrix.
pub fn is_echelon(basis: &[QSeries]) -> bool {
    let d = basis.len();
    basis.iter().enumerate().all(|(i, f)| {
        (1..=d).all(|j| match f.coeff(j) {
            Some(c) if j == i + 1 => c.is_one(),
            Some(c) => c.is_zero(),
            None => false,
        })
    })
}

impl std::fmt::Display for QSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (n, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{n}")?,
                (_, false) => write!(f, "{mag}*q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.prec())
    }
}
