//! Dimensions of level-one cusp form spaces and the action of Hecke
//! operators on q-expansions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::qseries::{miller_basis, working_precision, QSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("coefficient a_{index} required but series has precision {prec}")]
    PrecisionExceeded { index: usize, prec: usize },
    #[error("Hecke indices must be positive")]
    ZeroIndex,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `dim S_k` for level one. Total: odd and negative weights give 0.
pub fn dim_cusp_forms(k: i64) -> usize {
    if k < 0 || k % 2 != 0 {
        return 0;
    }
    let base = k / 12;
    let d = if k % 12 == 2 { base - 1 } else { base };
    d.max(0) as usize
}

/// Dense square matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        assert!(
            rows.iter().all(|r| r.len() == rows.len()),
            "matrix must be square"
        );
        IntMatrix { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim()).map(|i| &self.rows[i][i]).sum()
    }
}

/// The `n`-th coefficient of `T_m f`:
/// `b_n = Σ_{e | gcd(m, n)} e^{k-1} a_{mn/e²}`.
pub fn hecke_coefficient(m: u64, n: u64, k: u32, f: &QSeries) -> Result<BigInt, HeckeError> {
    if m == 0 || n == 0 {
        return Err(HeckeError::ZeroIndex);
    }
    let g = m.gcd(&n);
    let mut total = BigInt::zero();
    for e in (1..=g).filter(|e| g.is_multiple_of(*e)) {
        let index = (m * n / (e * e)) as usize;
        let a = f.coeff(index).ok_or(HeckeError::PrecisionExceeded {
            index,
            prec: f.prec(),
        })?;
        if e == 1 {
            total += a;
        } else {
            total += BigInt::from(e).pow(k - 1) * a;
        }
    }
    Ok(total)
}

/// Matrix of `T_2` on the Miller basis `f_1..f_d`: row `i` holds the
/// coefficients of `q^1..q^d` in `T_2 f_i`. Since the basis is echelonized
/// those coefficients are exactly the coordinates of `T_2 f_i`.
pub fn hecke_matrix_t2(k: u32) -> Result<IntMatrix, HeckeError> {
    let d = dim_cusp_forms(k as i64);
    let basis = miller_basis(k, working_precision(d))?;
    hecke_matrix_t2_from_basis(&basis, k)
}

pub fn hecke_matrix_t2_from_basis(basis: &[QSeries], k: u32) -> Result<IntMatrix, HeckeError> {
    let d = basis.len();
    let two_pow = BigInt::one() << (k - 1);
    let rows = basis
        .iter()
        .map(|f| {
            (1..=d)
                .map(|n| {
                    // Inlined T_2: a_{2n} plus 2^{k-1} a_{n/2} for even n.
                    let hi = f.coeff(2 * n).ok_or(HeckeError::PrecisionExceeded {
                        index: 2 * n,
                        prec: f.prec(),
                    })?;
                    let mut b = hi.clone();
                    if n % 2 == 0 {
                        b += &two_pow * &f.coeffs()[n / 2];
                    }
                    Ok(b)
                })
                .collect::<Result<Vec<_>, HeckeError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntMatrix { rows })
}
