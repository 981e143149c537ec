//! Cycle-pattern combinatorics in the symmetric group `S_d`.
//!
//! By the Frobenius density theorem, when the Galois group is all of `S_d`
//! the density of primes with a given factorization pattern equals the
//! proportion of permutations with that cycle pattern. The densities
//! `D_I..D_IV` of the four witness types therefore fix the expected number of
//! primes the search must draw.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::certify::{classify, PrimeType};
use crate::pattern::CyclePattern;
use crate::primes::{is_prime, primes_below};

/// Meissel–Mertens constant.
pub const MEISSEL_MERTENS: f64 = 0.261_497_212_847_642_8;

/// Largest degree for which the brute-force enumeration is allowed.
pub const MAX_ENUMERATION_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DensityError {
    #[error("density of type {ty} is undefined for d = {d}")]
    OutOfRange { ty: PrimeType, d: usize },
    #[error("enumeration of S_{0} is not supported (d ≤ 8)")]
    TooLarge(usize),
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

/// `n!!` for odd `n`, with `(-1)!! = 1`.
fn odd_double_factorial(n: i64) -> BigUint {
    debug_assert!(n % 2 != 0);
    (1..=n.max(0) as u64)
        .step_by(2)
        .fold(BigUint::one(), |acc, i| acc * i)
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Number of permutations in `S_d` with the given cycle pattern:
/// `d! / ∏ (d_j^{m_j} m_j!)`.
pub fn cycle_pattern_count(pattern: &CyclePattern) -> BigUint {
    let d = pattern.total();
    let denom = pattern.iter().fold(BigUint::one(), |acc, (len, mult)| {
        acc * BigUint::from(len).pow(mult as u32) * factorial(mult)
    });
    factorial(d) / denom
}

/// Number of permutations of `n` letters whose cycles all have odd length
/// (the elements of odd order in `S_n`).
///
/// `((n-1)!!)^2` for even `n` and `((n-2)!!)^2 · n` for odd `n`. Both are
/// squares up to the factor `n`; the unsquared form `(n-1)!!` already fails
/// at `n = 4` (3 against the 9 elements of odd order in `S_4`).
pub fn odd_order_count(n: usize) -> BigUint {
    let n = n as i64;
    if n % 2 == 0 {
        let f = odd_double_factorial(n - 1);
        &f * &f
    } else {
        let f = odd_double_factorial(n - 2);
        &f * &f * BigUint::from(n as u64)
    }
}

/// `D_I(d) = 1/d`, the proportion of `d`-cycles.
pub fn density_i(d: usize) -> Result<BigRational, DensityError> {
    if d < 1 {
        return Err(DensityError::OutOfRange {
            ty: PrimeType::I,
            d,
        });
    }
    Ok(BigRational::new(BigInt::one(), BigInt::from(d)))
}

/// `D_II(d) = [(d̃-3)!!]^2 / (2 (d̃-2)!)` with `d̃` the largest even integer
/// `≤ d`; defined for `d > 2`.
pub fn density_ii(d: usize) -> Result<BigRational, DensityError> {
    if d <= 2 {
        return Err(DensityError::OutOfRange {
            ty: PrimeType::II,
            d,
        });
    }
    let dt = d - d % 2;
    let f = odd_double_factorial(dt as i64 - 3);
    Ok(ratio(&f * &f, BigUint::from(2u32) * factorial(dt - 2)))
}

/// `D_III(d) = Σ 1/ℓ` over primes `d/2 < ℓ ≤ d`; defined for `d ≥ 2`.
pub fn density_iii(d: usize) -> Result<BigRational, DensityError> {
    if d < 2 {
        return Err(DensityError::OutOfRange {
            ty: PrimeType::III,
            d,
        });
    }
    Ok((d / 2 + 1..=d)
        .filter(|&l| is_prime(l as u64))
        .map(|l| BigRational::new(BigInt::one(), BigInt::from(l)))
        .fold(BigRational::zero(), |a, b| a + b))
}

/// `D_IV(d) = 1/(d-1)`, the proportion of `(d-1)`-cycles; defined for `d ≥ 2`.
///
/// At `d = 2` the two factors have the same degree, the pattern is `1^2`
/// (the identity alone), and the density is `1/2`.
pub fn density_iv(d: usize) -> Result<BigRational, DensityError> {
    match d {
        0 | 1 => Err(DensityError::OutOfRange {
            ty: PrimeType::IV,
            d,
        }),
        2 => Ok(BigRational::new(BigInt::one(), BigInt::from(2))),
        _ => Ok(BigRational::new(BigInt::one(), BigInt::from(d - 1))),
    }
}

pub fn density(ty: PrimeType, d: usize) -> Result<BigRational, DensityError> {
    match ty {
        PrimeType::I => density_i(d),
        PrimeType::II => density_ii(d),
        PrimeType::III => density_iii(d),
        PrimeType::IV => density_iv(d),
    }
}

/// Expected number of primes drawn before one of type `ty` appears.
pub fn expected_trials(ty: PrimeType, d: usize) -> Result<f64, DensityError> {
    Ok(density(ty, d)?.recip().to_f64().expect("finite density"))
}

/// Visit every permutation of `0..n` (Heap's algorithm).
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Cycle pattern of a permutation given in one-line notation.
pub fn cycle_pattern_of(perm: &[usize]) -> CyclePattern {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        lengths.push(len);
    }
    CyclePattern::from_parts(lengths)
}

/// Tally of cycle patterns over all of `S_d`, by brute force.
pub fn enumerate_cycle_patterns(d: usize) -> Result<BTreeMap<CyclePattern, u64>, DensityError> {
    if d > MAX_ENUMERATION_DEGREE {
        return Err(DensityError::TooLarge(d));
    }
    let mut tally = BTreeMap::new();
    for_each_permutation(d, |perm| {
        *tally.entry(cycle_pattern_of(perm)).or_insert(0) += 1;
    });
    Ok(tally)
}

/// All cycle patterns of `S_d`, i.e. the integer partitions of `d`.
pub fn partitions(d: usize) -> Vec<CyclePattern> {
    fn rec(rest: usize, max_part: usize, cur: &mut Vec<usize>, out: &mut Vec<CyclePattern>) {
        if rest == 0 {
            out.push(CyclePattern::from_parts(cur.iter().copied()));
            return;
        }
        for part in (1..=max_part.min(rest)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out
}

/// Exact proportion of `S_d` whose cycle pattern is of type `ty`, summed
/// over all partitions of `d`. Agrees with [`density`] wherever that is
/// defined.
pub fn density_by_partitions(ty: PrimeType, d: usize) -> BigRational {
    let total = factorial(d);
    let hits = partitions(d)
        .into_iter()
        .filter(|pat| classify(pat, d).contains(&ty))
        .map(|pat| cycle_pattern_count(&pat))
        .fold(BigUint::zero(), |a, b| a + b);
    ratio(hits, total)
}

#[derive(Debug, Clone)]
pub struct DensityReport {
    pub d: usize,
    pub exact: BTreeMap<PrimeType, Option<BigRational>>,
}

impl DensityReport {
    pub fn new(d: usize) -> Self {
        let exact = [PrimeType::I, PrimeType::II, PrimeType::III, PrimeType::IV]
            .into_iter()
            .map(|t| (t, density(t, d).ok()))
            .collect();
        DensityReport { d, exact }
    }

    pub fn float(&self, ty: PrimeType) -> Option<f64> {
        self.exact[&ty].as_ref().and_then(|r| r.to_f64())
    }

    pub fn expected_trials(&self, ty: PrimeType) -> Option<f64> {
        self.float(ty).map(|x| 1.0 / x)
    }

    /// `1/(4√d)`, the lower bound for `D_II`.
    pub fn bound_ii(&self) -> f64 {
        1.0 / (4.0 * (self.d as f64).sqrt())
    }

    /// `1/(3 log d)`, the lower bound for `D_III` when `d > 10`.
    pub fn bound_iii(&self) -> f64 {
        1.0 / (3.0 * (self.d as f64).ln())
    }

    /// `Some(holds)` where the bound applies, `None` otherwise.
    pub fn bound_ii_holds(&self) -> Option<bool> {
        (self.d > 2).then(|| self.float(PrimeType::II).unwrap() > self.bound_ii())
    }

    pub fn bound_iii_holds(&self) -> Option<bool> {
        (self.d > 10).then(|| self.float(PrimeType::III).unwrap() > self.bound_iii())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundViolation {
    pub ty: PrimeType,
    pub d: usize,
    pub density: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Default)]
pub struct BoundCheckReport {
    pub checked_ii: usize,
    pub checked_iii: usize,
    pub violations: Vec<BoundViolation>,
    /// Smallest ratio density/bound seen, per type.
    pub min_margin_ii: f64,
    pub min_margin_iii: f64,
}

/// Check `D_II(d) > 1/(4√d)` for `2 < d ≤ d_max` and `D_III(d) > 1/(3 log d)`
/// for `10 < d ≤ d_max`, with log-space factorial ratios.
pub fn check_density_bounds(d_max: usize) -> BoundCheckReport {
    let mut report = BoundCheckReport {
        min_margin_ii: f64::INFINITY,
        min_margin_iii: f64::INFINITY,
        ..Default::default()
    };

    // ln n! and ln n!! (odd n) tables up to d_max.
    let mut ln_fact = vec![0.0f64; d_max + 1];
    let mut ln_odd_df = vec![0.0f64; d_max + 1];
    for n in 1..=d_max {
        ln_fact[n] = ln_fact[n - 1] + (n as f64).ln();
        ln_odd_df[n] = if n % 2 == 1 {
            (if n >= 2 { ln_odd_df[n - 2] } else { 0.0 }) + (n as f64).ln()
        } else {
            0.0
        };
    }
    let ln_odd = |n: i64| if n <= 0 { 0.0 } else { ln_odd_df[n as usize] };

    // Prefix sums of 1/p for the type III sums.
    let mut recip = vec![0.0f64; d_max + 1];
    let primes = primes_below(d_max as u64 + 1);
    let mut it = primes.iter().peekable();
    for n in 1..=d_max {
        recip[n] = recip[n - 1];
        if it.peek() == Some(&&(n as u64)) {
            recip[n] += 1.0 / n as f64;
            it.next();
        }
    }

    for d in 3..=d_max {
        let dt = d - d % 2;
        let ln_dii = 2.0 * ln_odd(dt as i64 - 3) - 2f64.ln() - ln_fact[dt - 2];
        let dii = ln_dii.exp();
        let bound = 1.0 / (4.0 * (d as f64).sqrt());
        report.checked_ii += 1;
        report.min_margin_ii = report.min_margin_ii.min(dii / bound);
        if dii <= bound {
            report.violations.push(BoundViolation {
                ty: PrimeType::II,
                d,
                density: dii,
                bound,
            });
        }
        if d > 10 {
            let diii = recip[d] - recip[d / 2];
            let bound = 1.0 / (3.0 * (d as f64).ln());
            report.checked_iii += 1;
            report.min_margin_iii = report.min_margin_iii.min(diii / bound);
            if diii <= bound {
                report.violations.push(BoundViolation {
                    ty: PrimeType::III,
                    d,
                    density: diii,
                    bound,
                });
            }
        }
    }
    report
}

/// Bounds `(lower, upper)` on `Σ_{p ≤ x} 1/p`:
/// `log log x + B - 1/(10 log² x) - 4/(15 log³ x)` and
/// `log log x + B + 1/log² x`.
pub fn prime_reciprocal_bounds(x: f64) -> (f64, f64) {
    assert!(x > 1.0, "x must exceed 1");
    let l = x.ln();
    let base = l.ln() + MEISSEL_MERTENS;
    let lower = base - 1.0 / (10.0 * l * l) - 4.0 / (15.0 * l * l * l);
    let upper = base + 1.0 / (l * l);
    (lower, upper)
}

/// `Σ_{p ≤ x} 1/p` by sieving.
pub fn prime_reciprocal_sum(x: u64) -> f64 {
    primes_below(x + 1).iter().map(|&p| 1.0 / p as f64).sum()
}
