//! Factorization and the multiplicative functions used by the closed forms.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

/// Trial division. `n = 0` is treated as a caller bug.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut factors = Vec::new();
    let mut rest = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Factorization { n, factors }
}

pub fn moebius(n: u64) -> i8 {
    let f = factorize(n);
    if !f.is_squarefree() {
        0
    } else if f.factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .factors
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

/// `J_k(q) = q^k ∏_{p|q} (1 - p^{-k})`.
///
/// At `k = 0` this is the indicator of `q = 1`, which keeps
/// `Σ_{d|q} μ(q/d) d^k = J_k(q)` true for every `k ≥ 0`.
pub fn jordan_totient(k: u32, q: u64) -> BigInt {
    assert!(q >= 1, "jordan_totient requires q >= 1");
    if k == 0 {
        return if q == 1 {
            BigInt::one()
        } else {
            BigInt::zero()
        };
    }
    factorize(q)
        .factors
        .iter()
        .map(|&(p, e)| {
            let pk = BigInt::from(p).pow(k);
            (&pk - 1u32) * BigInt::from(p).pow(k * (e - 1))
        })
        .product()
}

/// Ascending divisors of `n`.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n).factors {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// The pairs `(d, μ(q/d))` for every divisor `d` of `q` with `μ(q/d) ≠ 0`.
///
/// This is the weight list behind every `Σ_{d|q} μ(q/d) f(d)` in the crate.
pub fn moebius_divisor_weights(q: u64) -> Vec<(u64, i8)> {
    divisors(q)
        .into_iter()
        .filter_map(|d| {
            let mu = moebius(q / d);
            (mu != 0).then_some((d, mu))
        })
        .collect()
}

pub fn gcd(a: i64, b: i64) -> Result<u64> {
    if a == 0 && b == 0 {
        return Err(Error::GcdOfZeros(a, b));
    }
    Ok(gcd_u64(a.unsigned_abs(), b.unsigned_abs()))
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_is_prime(n: u64) -> bool {
        n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).factors.is_empty());
        assert_eq!(factorize(12).factors, vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(9973).factors, vec![(9973, 1)]);
        assert!(naive_is_prime(9973));
    }

    #[test]
    fn factorization_invariants() {
        for n in 1..3000u64 {
            let f = factorize(n);
            let prod: u64 = f.factors.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
            assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
            assert!(f.factors.iter().all(|&(p, e)| e >= 1 && naive_is_prime(p)));
            assert_eq!(f.factors.is_empty(), n == 1);
        }
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(12), 0);
        assert_eq!(moebius(30), -1);
    }

    #[test]
    fn phi_examples() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(7), 6);
    }

    #[test]
    fn jordan_examples() {
        assert_eq!(jordan_totient(1, 12), BigInt::from(4));
        assert_eq!(jordan_totient(2, 6), BigInt::from(24));
        assert_eq!(jordan_totient(4, 5), BigInt::from(624));
        assert_eq!(jordan_totient(0, 5), BigInt::zero());
        assert_eq!(jordan_totient(0, 1), BigInt::one());
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
        for n in 1..500u64 {
            let brute: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            assert_eq!(divisors(n), brute);
        }
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(12, 18), Ok(6));
        assert_eq!(gcd(5, 7), Ok(1));
        assert_eq!(gcd(-4, 6), Ok(2));
        assert_eq!(gcd(0, -9), Ok(9));
        assert!(gcd(0, 0).is_err());
    }

    #[test]
    fn moebius_sum_is_unit_indicator() {
        for n in 1..=10_000u64 {
            let s: i64 = divisors(n).into_iter().map(|d| moebius(d) as i64).sum();
            assert_eq!(s, i64::from(n == 1), "n = {n}");
        }
    }

    #[test]
    fn moebius_power_sum_is_jordan() {
        for q in 1..=500u64 {
            for k in 0..=8u32 {
                let s: BigInt = divisors(q)
                    .into_iter()
                    .map(|d| BigInt::from(moebius(q / d)) * BigInt::from(d).pow(k))
                    .sum();
                assert_eq!(s, jordan_totient(k, q), "q = {q}, k = {k}");
            }
        }
    }

    #[test]
    fn multiplicativity() {
        for m in 1..=300u64 {
            for n in 1..=300u64 {
                if gcd_u64(m, n) != 1 {
                    continue;
                }
                assert_eq!(moebius(m * n), moebius(m) * moebius(n));
                assert_eq!(euler_phi(m * n), euler_phi(m) * euler_phi(n));
                for k in [0u32, 2, 3] {
                    assert_eq!(
                        jordan_totient(k, m * n),
                        jordan_totient(k, m) * jordan_totient(k, n)
                    );
                }
            }
        }
    }

    #[test]
    fn phi_is_first_jordan() {
        for q in 1..=10_000u64 {
            assert_eq!(BigInt::from(euler_phi(q)), jordan_totient(1, q));
        }
    }
}
