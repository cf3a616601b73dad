//! Small exact-arithmetic helpers: primes and factorizations.

use std::collections::BTreeMap;

/// Prime factorization of `n` by trial division. Empty for `n <= 1`.
pub fn factorize(mut n: u64) -> BTreeMap<u64, u32> {
    let mut factors = BTreeMap::new();
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            *factors.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        *factors.entry(n).or_insert(0) += 1;
    }
    factors
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).get(&n) == Some(&1)
}

/// All primes `p` with `2 <= p <= bound`.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&p| is_prime(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorizations() {
        assert!(factorize(1).is_empty());
        assert_eq!(factorize(12), BTreeMap::from([(2, 2), (3, 1)]));
        assert_eq!(factorize(97), BTreeMap::from([(97, 1)]));
        assert_eq!(
            factorize(2 * 2 * 5 * 49),
            BTreeMap::from([(2, 2), (5, 1), (7, 2)])
        );
    }

    #[test]
    fn small_primes() {
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(primes_up_to(9), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(13), vec![2, 3, 5, 7, 11, 13]);
    }
}
