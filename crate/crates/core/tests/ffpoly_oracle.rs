mod common;

use maeda::ffpoly::{charpoly_mod_p, reduce_matrix, ModMatrix, PrimeModulus};
use maeda::hecke::{hecke_matrix_t2, IntMatrix};
use maeda::primes::primes_below;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_primes(count: usize, seed: u64) -> Vec<u64> {
    let pool = primes_below(1 << 20);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| pool[rng.random_range(0..pool.len())])
        .collect()
}

fn assert_charpoly_reduces(m: &IntMatrix, primes: &[u64]) {
    let exact = common::charpoly(&common::to_rational(m.rows()));
    for &p in primes {
        let modulus = PrimeModulus::new(p).unwrap();
        let got = charpoly_mod_p(&reduce_matrix(m, modulus));
        let want: Vec<u64> = exact
            .iter()
            .map(|c| common::reduce_rational(c, p))
            .collect();
        assert_eq!(got.coeffs(), &want[..], "p = {p}");
    }
}

#[test]
fn hecke_charpolys_reduce_correctly() {
    // Every weight with 2 <= d <= 6.
    let primes = random_primes(30, 11);
    for k in (24..=84).step_by(2) {
        let m = hecke_matrix_t2(k).unwrap();
        if m.dim() < 2 {
            continue;
        }
        assert_charpoly_reduces(&m, &primes);
    }
}

#[test]
fn weight_24_trace_mod_p() {
    let m = hecke_matrix_t2(24).unwrap();
    for p in random_primes(20, 5) {
        let reduced = reduce_matrix(&m, PrimeModulus::new(p).unwrap());
        assert_eq!(reduced.trace(), 1080 % p);
    }
}

#[test]
fn zero_and_scalar_matrices() {
    let p = PrimeModulus::new(101).unwrap();
    let zero = ModMatrix::from_rows(p, &[vec![0, 0, 0], vec![0, 0, 0], vec![0, 0, 0]]);
    assert_eq!(charpoly_mod_p(&zero).coeffs(), &[0, 0, 0, 1]);
    let scalar = ModMatrix::from_rows(p, &[vec![3, 0], vec![0, 3]]);
    // (x - 3)^2 = x^2 - 6x + 9
    assert_eq!(charpoly_mod_p(&scalar).coeffs(), &[9, 95, 1]);
}

fn int_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-1_000_000i64..1_000_000, n), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_matrices_reduce_correctly(
        rows in (1usize..=6).prop_flat_map(int_matrix),
        seed in any::<u64>(),
    ) {
        let m = IntMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        );
        assert_charpoly_reduces(&m, &random_primes(30, seed));
    }
}
