use maeda::certify::{
    check_certificate, verify_weight, Certificate, PrimeType, SearchMode, VerifyOptions,
};
use maeda::hecke::dim_cusp_forms;
use maeda::primes::is_prime;
use proptest::prelude::*;

fn opts(mode: SearchMode, seed: u64) -> VerifyOptions {
    VerifyOptions {
        mode,
        seed,
        record_timing: false,
        ..VerifyOptions::default()
    }
}

#[test]
fn consecutive_mode_is_deterministic() {
    let a = verify_weight(96, &opts(SearchMode::Consecutive, 0)).unwrap();
    let b = verify_weight(96, &opts(SearchMode::Consecutive, 0)).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.seed, None);
    check_certificate(&a).unwrap();
}

#[test]
fn prime_dimension_shares_witness_between_i_and_iii() {
    // d is prime for these weights, so an irreducible reduction is also type III.
    for k in [36u32, 60, 84, 132] {
        let d = dim_cusp_forms(k as i64);
        assert!(is_prime(d as u64), "k = {k}");
        let cert = verify_weight(k, &opts(SearchMode::Random, 7)).unwrap();
        let i = cert.witness(PrimeType::I).unwrap();
        let iii = cert.witness(PrimeType::III).unwrap();
        assert!(iii.trial <= i.trial, "k = {k}");
        if iii.trial == i.trial {
            assert_eq!(iii.prime, i.prime);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn produced_certificates_check_and_round_trip(
        half in 12u32..=120,
        seed in any::<u64>(),
        consecutive in any::<bool>(),
    ) {
        let k = 2 * half;
        prop_assume!(dim_cusp_forms(k as i64) > 0);
        let mode = if consecutive { SearchMode::Consecutive } else { SearchMode::Random };
        let cert = verify_weight(k, &opts(mode, seed)).unwrap();
        prop_assert_eq!(check_certificate(&cert), Ok(()));
        prop_assert_eq!(Certificate::from_json(&cert.to_json()).unwrap(), cert.clone());
        for t in cert.required_types() {
            let w = cert.witness(*t).unwrap();
            prop_assert_eq!(cert.trials_total.get(*t), Some(w.trial));
        }
    }

    #[test]
    fn random_mode_is_reproducible(half in 12u32..=60, seed in any::<u64>()) {
        let k = 2 * half;
        prop_assume!(dim_cusp_forms(k as i64) > 0);
        let a = verify_weight(k, &opts(SearchMode::Random, seed)).unwrap();
        let b = verify_weight(k, &opts(SearchMode::Random, seed)).unwrap();
        prop_assert_eq!(a.to_json(), b.to_json());
    }
}
