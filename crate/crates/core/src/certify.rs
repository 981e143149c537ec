//! Witness-prime search and certificates.
//!
//! A monic `F ∈ Z[X]` of degree `d` with a prime of type I (irreducible mod
//! `p`), a prime of type II (squarefree with exactly one even-degree factor,
//! of degree 2) and a prime of type III (squarefree with a factor of prime
//! degree `> d/2`) is irreducible with Galois group `S_d`. This module looks
//! for such primes for the characteristic polynomial of `T_2` on `S_k` and
//! records them in a [`Certificate`] that [`check_certificate`] can re-derive
//! from scratch.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ffpoly::{
    charpoly_mod_p, factorization_pattern, is_squarefree, reduce_matrix, PrimeModulus,
    MODULUS_LIMIT,
};
use crate::hecke::{dim_cusp_forms, hecke_matrix_t2, HeckeError, IntMatrix};
use crate::pattern::FactorPattern;
use crate::primes::{is_prime, primes_below};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_PRIME_BOUND: u64 = MODULUS_LIMIT;
/// Default draw cap is this many trials per unit of dimension.
pub const TRIALS_PER_DIMENSION: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PrimeType {
    I,
    II,
    III,
    IV,
}

impl PrimeType {
    pub const REQUIRED: [PrimeType; 3] = [PrimeType::I, PrimeType::II, PrimeType::III];

    pub fn as_str(self) -> &'static str {
        match self {
            PrimeType::I => "I",
            PrimeType::II => "II",
            PrimeType::III => "III",
            PrimeType::IV => "IV",
        }
    }
}

impl fmt::Display for PrimeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Types (possibly several, possibly none) that a squarefree factorization
/// pattern of a degree-`d` polynomial witnesses.
pub fn classify(pattern: &FactorPattern, d: usize) -> BTreeSet<PrimeType> {
    let mut types = BTreeSet::new();
    if pattern.count() == 1 && pattern.multiplicity(d) == 1 {
        types.insert(PrimeType::I);
    }
    if pattern.multiplicity(2) == 1 && pattern.iter().all(|(deg, _)| deg == 2 || deg % 2 == 1) {
        types.insert(PrimeType::II);
    }
    if pattern
        .iter()
        .any(|(deg, _)| 2 * deg > d && is_prime(deg as u64))
    {
        types.insert(PrimeType::III);
    }
    if d >= 2 && *pattern == FactorPattern::from_pairs([(1, 1), (d - 1, 1)]) {
        types.insert(PrimeType::IV);
    }
    types
}

/// Whether the conclusion for `T_2` extends to `T_n` by the transfer
/// theorems: all `n ≤ 10000`, and primes `n` with `n ≤ 4·10^6` or
/// `n ≢ ±1 (mod 5)` or `n ≢ ±1 (mod 7)`.
pub fn covered_index(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n <= 10_000 {
        return true;
    }
    if !is_prime(n) {
        return false;
    }
    let pm1 = |m: u64| matches!(n % m, r if r == 1 || r == m - 1);
    n <= 4_000_000 || !pm1(5) || !pm1(7)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Random,
    Consecutive,
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMode::Random => "random",
            SearchMode::Consecutive => "consecutive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("weight {0} has dim S_k = 0; nothing to verify")]
    ZeroDimension(u32),
    #[error("no primes below {0}")]
    NoPrimes(u64),
    #[error("prime bound {0} exceeds the supported limit 2^20")]
    BoundTooLarge(u64),
    #[error("weight {weight}: exhausted {trials} trials; found types {found:?}")]
    Exhausted {
        weight: u32,
        trials: u64,
        found: Vec<PrimeType>,
    },
    #[error(transparent)]
    Hecke(#[from] HeckeError),
}

/// The primes below a bound, sieved once, for uniform sampling.
#[derive(Debug, Clone)]
pub struct PrimeSampler {
    primes: Vec<u64>,
}

impl PrimeSampler {
    pub fn new(bound: u64) -> Result<Self, VerifyError> {
        if bound > MODULUS_LIMIT {
            return Err(VerifyError::BoundTooLarge(bound));
        }
        let primes = primes_below(bound);
        if primes.is_empty() {
            return Err(VerifyError::NoPrimes(bound));
        }
        Ok(PrimeSampler { primes })
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.primes[rng.random_range(0..self.primes.len())]
    }
}

/// One uniformly random prime below `bound`.
pub fn sample_prime<R: Rng + ?Sized>(rng: &mut R, bound: u64) -> Result<u64, VerifyError> {
    Ok(PrimeSampler::new(bound)?.sample(rng))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Per-weight stream seed, so results do not depend on scheduling order.
pub fn weight_seed(global_seed: u64, k: u32) -> u64 {
    splitmix64(global_seed ^ splitmix64(k as u64))
}

pub fn weight_rng(global_seed: u64, k: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(weight_seed(global_seed, k))
}

/// Factorization pattern of `charpoly(M) mod p`, or `None` when the
/// reduction is not squarefree.
pub fn pattern_at_prime(matrix: &IntMatrix, p: u64) -> Option<FactorPattern> {
    let modulus = PrimeModulus::new(p).expect("witness primes are below 2^20");
    let f = charpoly_mod_p(&reduce_matrix(matrix, modulus));
    if !is_squarefree(&f) {
        return None;
    }
    Some(factorization_pattern(&f).expect("squarefree input"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witness {
    pub prime: u64,
    pub pattern: FactorPattern,
    /// 1-based index of the draw that produced this prime.
    pub trial: u64,
}

/// Primes drawn until each required type was found (0 when vacuous).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialTotals {
    #[serde(rename = "I")]
    pub type_i: u64,
    #[serde(rename = "II")]
    pub type_ii: u64,
    #[serde(rename = "III")]
    pub type_iii: u64,
}

impl TrialTotals {
    pub fn get(&self, t: PrimeType) -> Option<u64> {
        match t {
            PrimeType::I => Some(self.type_i),
            PrimeType::II => Some(self.type_ii),
            PrimeType::III => Some(self.type_iii),
            PrimeType::IV => None,
        }
    }

    fn set(&mut self, t: PrimeType, v: u64) {
        match t {
            PrimeType::I => self.type_i = v,
            PrimeType::II => self.type_ii = v,
            PrimeType::III => self.type_iii = v,
            PrimeType::IV => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub weight: u32,
    pub dimension: usize,
    pub mode: SearchMode,
    /// Global seed for random mode; the draw stream is `weight_rng(seed, weight)`.
    pub seed: Option<u64>,
    pub prime_bound: u64,
    /// Set for `d = 1`: the Galois group is trivially `S_1`, so types II and
    /// III are not searched for.
    pub vacuous: bool,
    pub witnesses: BTreeMap<PrimeType, Witness>,
    pub trials_total: TrialTotals,
    pub duration_ms: u64,
    pub schema_version: u32,
}

impl Certificate {
    pub fn witness(&self, t: PrimeType) -> Option<&Witness> {
        self.witnesses.get(&t)
    }

    /// Types this certificate must carry a witness for.
    pub fn required_types(&self) -> &'static [PrimeType] {
        if self.vacuous {
            &PrimeType::REQUIRED[..1]
        } else {
            &PrimeType::REQUIRED
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub mode: SearchMode,
    pub seed: u64,
    pub bound: u64,
    /// Cap on the number of primes drawn; defaults to `100·d`.
    pub max_trials: Option<u64>,
    /// Evaluate a batch of draws concurrently. Witnesses are still taken in
    /// draw order, so the certificate is unchanged.
    pub parallel_primes: bool,
    pub record_timing: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: SearchMode::Random,
            seed: 0,
            bound: DEFAULT_PRIME_BOUND,
            max_trials: None,
            parallel_primes: false,
            record_timing: true,
        }
    }
}

enum PrimeSource {
    Random {
        rng: Box<ChaCha8Rng>,
        sampler: PrimeSampler,
    },
    Consecutive {
        primes: std::vec::IntoIter<u64>,
    },
}

impl PrimeSource {
    fn next_prime(&mut self) -> Option<u64> {
        match self {
            PrimeSource::Random { rng, sampler } => Some(sampler.sample(rng.as_mut())),
            PrimeSource::Consecutive { primes } => primes.next(),
        }
    }
}

/// Run the witness search for weight `k`.
pub fn verify_weight(k: u32, opts: &VerifyOptions) -> Result<Certificate, VerifyError> {
    let start = Instant::now();
    let d = dim_cusp_forms(k as i64);
    if d == 0 {
        return Err(VerifyError::ZeroDimension(k));
    }
    let sampler = PrimeSampler::new(opts.bound)?;
    let matrix = hecke_matrix_t2(k)?;
    let mut source = match opts.mode {
        SearchMode::Random => PrimeSource::Random {
            rng: Box::new(weight_rng(opts.seed, k)),
            sampler,
        },
        SearchMode::Consecutive => PrimeSource::Consecutive {
            primes: sampler.primes.into_iter(),
        },
    };

    let vacuous = d == 1;
    let required: &[PrimeType] = if vacuous {
        &PrimeType::REQUIRED[..1]
    } else {
        &PrimeType::REQUIRED
    };
    let cap = opts.max_trials.unwrap_or(TRIALS_PER_DIMENSION * d as u64);
    let batch = if opts.parallel_primes {
        rayon::current_num_threads().max(1) as u64
    } else {
        1
    };

    let mut witnesses: BTreeMap<PrimeType, Witness> = BTreeMap::new();
    let mut trial = 0u64;
    let done = |w: &BTreeMap<PrimeType, Witness>| required.iter().all(|t| w.contains_key(t));

    'search: while !done(&witnesses) {
        let take = batch.min(cap - trial);
        let draws: Vec<u64> = (0..take).map_while(|_| source.next_prime()).collect();
        if draws.is_empty() {
            return Err(VerifyError::Exhausted {
                weight: k,
                trials: trial,
                found: witnesses.keys().copied().collect(),
            });
        }
        let results: Vec<Option<FactorPattern>> = if draws.len() > 1 {
            draws
                .par_iter()
                .map(|&p| pattern_at_prime(&matrix, p))
                .collect()
        } else {
            draws
                .iter()
                .map(|&p| pattern_at_prime(&matrix, p))
                .collect()
        };
        for (p, result) in draws.into_iter().zip(results) {
            trial += 1;
            let Some(pattern) = result else { continue };
            for t in classify(&pattern, d) {
                let wanted = required.contains(&t) || (t == PrimeType::IV && !vacuous);
                if wanted && !witnesses.contains_key(&t) {
                    witnesses.insert(
                        t,
                        Witness {
                            prime: p,
                            pattern: pattern.clone(),
                            trial,
                        },
                    );
                }
            }
            if done(&witnesses) {
                break 'search;
            }
        }
    }

    let mut trials_total = TrialTotals::default();
    for t in required {
        trials_total.set(*t, witnesses[t].trial);
    }
    Ok(Certificate {
        weight: k,
        dimension: d,
        mode: opts.mode,
        seed: match opts.mode {
            SearchMode::Random => Some(opts.seed),
            SearchMode::Consecutive => None,
        },
        prime_bound: opts.bound,
        vacuous,
        witnesses,
        trials_total,
        duration_ms: if opts.record_timing {
            start.elapsed().as_millis() as u64
        } else {
            0
        },
        schema_version: SCHEMA_VERSION,
    })
}

/// Why a certificate failed re-verification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckFailure {
    #[error("unsupported schema version {0}")]
    SchemaVersion(u32),
    #[error("wrong dimension: recorded {recorded}, dim S_{weight} = {actual}")]
    WrongDimension {
        weight: u32,
        recorded: usize,
        actual: usize,
    },
    #[error("vacuous flag {recorded} does not match dimension {dimension}")]
    VacuousMismatch { recorded: bool, dimension: usize },
    #[error("missing witness of type {0}")]
    MissingWitness(PrimeType),
    #[error("type {ty} witness {prime} is not a prime below the bound {bound}")]
    InvalidPrime {
        ty: PrimeType,
        prime: u64,
        bound: u64,
    },
    #[error("type {ty} trial count {recorded} does not match witness trial {witness}")]
    TrialMismatch {
        ty: PrimeType,
        recorded: u64,
        witness: u64,
    },
    #[error("type {ty} witness {prime}: reduction is not squarefree")]
    NonSquarefreeWitness { ty: PrimeType, prime: u64 },
    #[error(
        "type {ty} witness {prime}: pattern mismatch (recorded {recorded}, recomputed {actual})"
    )]
    PatternMismatch {
        ty: PrimeType,
        prime: u64,
        recorded: FactorPattern,
        actual: FactorPattern,
    },
    #[error("type {ty} witness {prime}: pattern {pattern} is not of type {ty}")]
    TypeMismatch {
        ty: PrimeType,
        prime: u64,
        pattern: FactorPattern,
    },
    #[error(transparent)]
    Hecke(#[from] HeckeError),
}

impl CheckFailure {
    /// Stable short code for reports.
    pub fn code(&self) -> &'static str {
        match self {
            CheckFailure::SchemaVersion(_) => "schema-version",
            CheckFailure::WrongDimension { .. } => "wrong-dimension",
            CheckFailure::VacuousMismatch { .. } => "vacuous-mismatch",
            CheckFailure::MissingWitness(_) => "missing-witness",
            CheckFailure::InvalidPrime { .. } => "invalid-prime",
            CheckFailure::TrialMismatch { .. } => "trial-mismatch",
            CheckFailure::NonSquarefreeWitness { .. } => "non-squarefree-witness",
            CheckFailure::PatternMismatch { .. } => "pattern-mismatch",
            CheckFailure::TypeMismatch { .. } => "type-mismatch",
            CheckFailure::Hecke(_) => "hecke-error",
        }
    }
}

/// Re-derive every witness of `cert` from scratch: rebuild `T_2` for the
/// weight, recompute `charpoly mod p` at each witness prime only, and confirm
/// the recorded pattern and type.
pub fn check_certificate(cert: &Certificate) -> Result<(), CheckFailure> {
    if cert.schema_version != SCHEMA_VERSION {
        return Err(CheckFailure::SchemaVersion(cert.schema_version));
    }
    let actual = dim_cusp_forms(cert.weight as i64);
    if actual != cert.dimension || actual == 0 {
        return Err(CheckFailure::WrongDimension {
            weight: cert.weight,
            recorded: cert.dimension,
            actual,
        });
    }
    let d = actual;
    if cert.vacuous != (d == 1) {
        return Err(CheckFailure::VacuousMismatch {
            recorded: cert.vacuous,
            dimension: d,
        });
    }
    for &t in cert.required_types() {
        let w = cert.witness(t).ok_or(CheckFailure::MissingWitness(t))?;
        let recorded = cert.trials_total.get(t).unwrap_or_default();
        if recorded != w.trial || w.trial == 0 {
            return Err(CheckFailure::TrialMismatch {
                ty: t,
                recorded,
                witness: w.trial,
            });
        }
    }
    for (&ty, w) in &cert.witnesses {
        if w.prime >= cert.prime_bound || w.prime >= MODULUS_LIMIT || !is_prime(w.prime) {
            return Err(CheckFailure::InvalidPrime {
                ty,
                prime: w.prime,
                bound: cert.prime_bound,
            });
        }
    }

    let matrix = hecke_matrix_t2(cert.weight)?;
    let mut cache: BTreeMap<u64, Option<FactorPattern>> = BTreeMap::new();
    for (&ty, w) in &cert.witnesses {
        let recomputed = cache
            .entry(w.prime)
            .or_insert_with(|| pattern_at_prime(&matrix, w.prime));
        let Some(actual) = recomputed else {
            return Err(CheckFailure::NonSquarefreeWitness { ty, prime: w.prime });
        };
        if *actual != w.pattern {
            return Err(CheckFailure::PatternMismatch {
                ty,
                prime: w.prime,
                recorded: w.pattern.clone(),
                actual: actual.clone(),
            });
        }
        if !classify(&w.pattern, d).contains(&ty) {
            return Err(CheckFailure::TypeMismatch {
                ty,
                prime: w.prime,
                pattern: w.pattern.clone(),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(types: &[PrimeType]) -> BTreeSet<PrimeType> {
        types.iter().copied().collect()
    }

    use PrimeType::*;

    #[test]
    fn classify_examples() {
        let p = |pairs: &[(usize, usize)]| FactorPattern::from_pairs(pairs.iter().copied());
        assert_eq!(classify(&p(&[(5, 1)]), 5), set(&[I, III]));
        assert_eq!(classify(&p(&[(2, 1), (1, 2)]), 4), set(&[II]));
        assert_eq!(classify(&p(&[(2, 1), (5, 1)]), 7), set(&[II, III]));
        assert_eq!(classify(&p(&[(1, 1), (5, 1)]), 6), set(&[III, IV]));
        assert_eq!(classify(&p(&[(1, 1)]), 1), set(&[I]));
        // d = 2: irreducible quadratic is all of I, II, III; split is IV.
        assert_eq!(classify(&p(&[(2, 1)]), 2), set(&[I, II, III]));
        assert_eq!(classify(&p(&[(1, 2)]), 2), set(&[IV]));
        // Two quadratic factors are not type II; 4 is not prime.
        assert_eq!(classify(&p(&[(2, 2)]), 4), set(&[]));
        assert_eq!(classify(&p(&[(4, 1)]), 4), set(&[I]));
        assert_eq!(classify(&p(&[(2, 1), (4, 1)]), 6), set(&[]));
    }

    #[test]
    fn irreducible_always_type_one_and_three_iff_prime_degree() {
        for d in 1..60usize {
            let types = classify(&FactorPattern::from_pairs([(d, 1)]), d);
            assert!(types.contains(&I));
            assert_eq!(types.contains(&III), is_prime(d as u64), "d = {d}");
        }
    }

    #[test]
    fn covered_index_examples() {
        assert!(covered_index(9999));
        assert!(covered_index(2));
        assert!(!covered_index(10001));
        assert!(covered_index(4000037));
        // A prime above 4·10^6 with n ≡ 1 mod 5 and n ≡ 1 mod 7 is not covered.
        let big = (4_000_011u64..)
            .step_by(70)
            .find(|&n| is_prime(n) && n % 5 == 1 && n % 7 == 1)
            .unwrap();
        assert!(!covered_index(big));
        assert!(covered_index(3_999_971));
    }

    #[test]
    fn sampler_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            assert_eq!(sample_prime(&mut rng, 3).unwrap(), 2);
        }
        assert_eq!(PrimeSampler::new(2).unwrap_err(), VerifyError::NoPrimes(2));
        assert_eq!(PrimeSampler::new(1 << 20).unwrap().len(), 82025);
        assert_eq!(
            PrimeSampler::new((1 << 20) + 1).unwrap_err(),
            VerifyError::BoundTooLarge((1 << 20) + 1)
        );
    }

    #[test]
    fn sampler_is_uniform_below_ten() {
        // Chi-square with 3 degrees of freedom; 16.27 is the 0.1% critical value.
        let sampler = PrimeSampler::new(10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut counts = BTreeMap::new();
        let n = 10_000;
        for _ in 0..n {
            *counts.entry(sampler.sample(&mut rng)).or_insert(0u64) += 1;
        }
        assert_eq!(counts.keys().copied().collect::<Vec<_>>(), vec![2, 3, 5, 7]);
        let expected = n as f64 / 4.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 16.27, "chi2 = {chi2}");
    }

    #[test]
    fn weight_seeds_differ() {
        assert_ne!(weight_seed(1, 24), weight_seed(1, 26));
        assert_ne!(weight_seed(1, 24), weight_seed(2, 24));
        assert_eq!(weight_seed(7, 100), weight_seed(7, 100));
    }

    #[test]
    fn weight_12_is_vacuous() {
        for seed in 0..5 {
            let opts = VerifyOptions {
                seed,
                ..Default::default()
            };
            let cert = verify_weight(12, &opts).unwrap();
            assert!(cert.vacuous);
            assert_eq!(cert.dimension, 1);
            assert_eq!(cert.witnesses.keys().copied().collect::<Vec<_>>(), vec![I]);
            assert_eq!(cert.trials_total.type_ii, 0);
            check_certificate(&cert).unwrap();
        }
    }

    #[test]
    fn zero_dimension_is_distinguished() {
        assert_eq!(
            verify_weight(14, &VerifyOptions::default()).unwrap_err(),
            VerifyError::ZeroDimension(14)
        );
    }

    #[test]
    fn exhaustion_reports_progress() {
        let opts = VerifyOptions {
            mode: SearchMode::Consecutive,
            max_trials: Some(1),
            ..Default::default()
        };
        // Consecutive search at k = 96 starts at p = 2, where the reduction is
        // far from witnessing all three types at once.
        match verify_weight(96, &opts).unwrap_err() {
            VerifyError::Exhausted { weight, trials, .. } => {
                assert_eq!(weight, 96);
                assert_eq!(trials, 1);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn prime_d_weight_reuses_type_one_witness() {
        // k = 60: d = 5 is prime, so any type I witness is also type III and
        // the search records the same draw for both.
        let mut reused = 0;
        for seed in 0..10 {
            let opts = VerifyOptions {
                seed,
                ..Default::default()
            };
            let cert = verify_weight(60, &opts).unwrap();
            assert_eq!(cert.dimension, 5);
            let w1 = cert.witness(I).unwrap();
            let w3 = cert.witness(III).unwrap();
            assert!(w3.trial <= w1.trial);
            if w3.trial == w1.trial {
                assert_eq!(w1.prime, w3.prime);
                reused += 1;
            }
        }
        assert!(reused > 0);
    }

    #[test]
    fn round_trip_and_parallel_batches_agree() {
        for k in [24u32, 36, 48, 96] {
            let serial = VerifyOptions {
                seed: 11,
                record_timing: false,
                ..Default::default()
            };
            let parallel = VerifyOptions {
                parallel_primes: true,
                ..serial.clone()
            };
            let a = verify_weight(k, &serial).unwrap();
            let b = verify_weight(k, &parallel).unwrap();
            assert_eq!(a, b);
            check_certificate(&a).unwrap();
            assert_eq!(Certificate::from_json(&a.to_json()).unwrap(), a);
        }
    }

    #[test]
    fn corrupted_dimension_is_rejected() {
        let opts = VerifyOptions {
            seed: 5,
            ..Default::default()
        };
        let mut cert = verify_weight(24, &opts).unwrap();
        cert.dimension = 3;
        let err = check_certificate(&cert).unwrap_err();
        assert_eq!(err.code(), "wrong-dimension");
    }

    #[test]
    fn tampered_witnesses_are_rejected() {
        let opts = VerifyOptions {
            seed: 5,
            record_timing: false,
            ..Default::default()
        };
        let cert = verify_weight(48, &opts).unwrap();

        let mut missing = cert.clone();
        missing.witnesses.remove(&II);
        assert_eq!(
            check_certificate(&missing).unwrap_err(),
            CheckFailure::MissingWitness(II)
        );

        let mut composite = cert.clone();
        composite.witnesses.get_mut(&I).unwrap().prime = 15;
        assert_eq!(
            check_certificate(&composite).unwrap_err().code(),
            "invalid-prime"
        );

        let mut trials = cert.clone();
        trials.trials_total.type_iii += 1;
        assert_eq!(
            check_certificate(&trials).unwrap_err().code(),
            "trial-mismatch"
        );

        // Claiming type IV for the type I witness: pattern is right, type wrong.
        let mut wrong_type = cert.clone();
        let w = cert.witness(I).unwrap().clone();
        wrong_type.witnesses.insert(IV, w);
        assert_eq!(
            check_certificate(&wrong_type).unwrap_err().code(),
            "type-mismatch"
        );

        let mut vac = cert.clone();
        vac.vacuous = true;
        assert_eq!(
            check_certificate(&vac).unwrap_err().code(),
            "vacuous-mismatch"
        );
    }
}
