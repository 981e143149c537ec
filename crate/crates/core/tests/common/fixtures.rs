//! Hand-built certificate fixtures.

use maeda::certify::{pattern_at_prime, Certificate, PrimeType};
use maeda::hecke::hecke_matrix_t2;
use maeda::primes::is_prime;

/// Replace the witness prime for `ty` by the next prime above it whose
/// reduction is squarefree but has a different pattern. The recorded pattern
/// is left alone, so the certificate is well-formed but false. Returns the
/// substituted prime.
pub fn substitute_non_witness(cert: &mut Certificate, ty: PrimeType) -> u64 {
    let m = hecke_matrix_t2(cert.weight).unwrap();
    let witness = cert
        .witnesses
        .get_mut(&ty)
        .expect("no witness of that type");
    let mut p = witness.prime + 2;
    loop {
        if p < cert.prime_bound && is_prime(p) {
            if let Some(pattern) = pattern_at_prime(&m, p) {
                if pattern != witness.pattern {
                    witness.prime = p;
                    return p;
                }
            }
        }
        p += 2;
        assert!(p < cert.prime_bound, "ran out of primes below the bound");
    }
}
