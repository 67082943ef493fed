//! Miller-Rabin primality testing on arbitrary-size integers.

use num_bigint::{BigUint, RandBigInt};
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SMALL_PRIMES: [u32; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

/// Probabilistic primality test with `rounds` Miller-Rabin witnesses.
///
/// Witnesses come from a fixed-seed generator so results are reproducible.
pub fn is_probable_prime(n: &BigUint, rounds: u32) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for &sp in SMALL_PRIMES.iter() {
        let sp = BigUint::from(sp);
        if n == &sp {
            return true;
        }
        if (n % &sp).bits() == 0 {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0fb1_u64 ^ n.bits());
    'witness: for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let primes: Vec<u32> = (0..200u32)
            .filter(|&k| k > 1 && (2..k).all(|d| k % d != 0))
            .collect();
        for k in 0..200u32 {
            assert_eq!(is_probable_prime(&BigUint::from(k), 16), primes.contains(&k), "{k}");
        }
    }

    #[test]
    fn carmichael_and_mersenne() {
        assert!(!is_probable_prime(&BigUint::from(561u32), 16));
        assert!(!is_probable_prime(&BigUint::from(41041u32), 16));
        assert!(is_probable_prime(&((BigUint::one() << 127u32) - 1u32), 32));
        assert!(!is_probable_prime(&((BigUint::one() << 128u32) - 1u32), 32));
    }
}
