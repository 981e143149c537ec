//! Randomized multimodular verification that the characteristic polynomial
//! of the Hecke operator `T_2` on level-one cusp forms `S_k` is irreducible
//! with full symmetric Galois group.
//!
//! The pipeline for one weight: build the Victor Miller basis ([`qseries`]),
//! the integral matrix of `T_2` ([`hecke`]), reduce it modulo sampled primes
//! and read off factorization patterns ([`ffpoly`]), then classify primes and
//! assemble a witness certificate ([`certify`]). [`density`] holds the exact
//! symmetric-group combinatorics behind the expected search lengths.

pub mod certify;
pub mod cli;
pub mod density;
pub mod ffpoly;
pub mod hecke;
pub mod pattern;
pub mod primes;
pub mod qseries;

pub use certify::{check_certificate, classify, verify_weight, Certificate, PrimeType, SearchMode};
pub use ffpoly::{
    charpoly_mod_p, factorization_pattern, is_squarefree, reduce_matrix, ModPoly, PrimeModulus,
};
pub use hecke::{dim_cusp_forms, hecke_matrix_t2, IntMatrix};
pub use pattern::{CyclePattern, FactorPattern, Pattern};
pub use qseries::{delta, eisenstein, miller_basis, QSeries};
