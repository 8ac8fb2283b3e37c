use crate::{Error, Result};

/// Memory ceiling applied by [`SpfSieve::new`].
pub const DEFAULT_SIEVE_BUDGET_BYTES: u64 = 1 << 30;

const MAX_SIEVE_LIMIT: u64 = 1 << 32;

/// Smallest-prime-factor table for `2..=limit`, filled by a linear sieve.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

/// Canonical factorization: `(prime, exponent)` pairs, strictly increasing
/// in the prime.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pub pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u128 {
        self.pairs
            .iter()
            .map(|&(p, k)| (p as u128).pow(k))
            .product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.pairs.iter().all(|&(_, k)| k == 1)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }
}

impl SpfSieve {
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_budget(limit, DEFAULT_SIEVE_BUDGET_BYTES)
    }

    pub fn with_budget(limit: u64, budget_bytes: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Capacity(format!("sieve limit {limit} is below 2")));
        }
        if limit > MAX_SIEVE_LIMIT {
            return Err(Error::Capacity(format!("sieve limit {limit} exceeds 2^32")));
        }
        // spf table plus a generous bound on the prime list
        let estimate = (limit + 1) * 4 + (limit / 8) * 4;
        if estimate > budget_bytes {
            return Err(Error::Capacity(format!(
                "sieve up to {limit} needs ~{estimate} bytes, budget is {budget_bytes}"
            )));
        }

        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                if p > si {
                    break;
                }
                let m = i as u64 * p as u64;
                if m > limit {
                    break;
                }
                spf[m as usize] = p;
            }
        }
        Ok(Self { limit, spf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `n` (for `2 <= n <= limit`).
    pub fn spf(&self, n: u64) -> u64 {
        debug_assert!(n >= 2 && n <= self.limit);
        self.spf[n as usize] as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.spf[n as usize] as u64 == n
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// All primes `<= x`.
    pub fn primes_up_to(&self, x: u64) -> &[u32] {
        let end = self.primes.partition_point(|&p| (p as u64) <= x);
        &self.primes[..end]
    }

    /// Number of primes `<= x` (needs `x <= limit`).
    pub fn prime_pi(&self, x: u64) -> usize {
        self.primes_up_to(x).len()
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 || n > self.limit {
            return Err(Error::Range {
                value: n,
                limit: self.limit,
            });
        }
        let mut pairs = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            let mut k = 0;
            while m.is_multiple_of(p) {
                m /= p;
                k += 1;
            }
            pairs.push((p, k));
        }
        Ok(Factorization { pairs })
    }

    /// Largest prime factor, with `P(1) = 1`.
    pub fn largest_prime_factor(&self, n: u64) -> u64 {
        let mut m = n;
        let mut last = 1;
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            last = p;
            m /= p;
        }
        last
    }

    /// Splits `n >= 2` as `(p, k, m)` with `p = spf(n)`, `p^k || n` and
    /// `m = n / p^k`.
    pub fn split_spf_power(&self, n: u64) -> (u64, u32, u64) {
        let p = self.spf(n);
        let mut m = n / p;
        let mut k = 1;
        while m.is_multiple_of(p) {
            m /= p;
            k += 1;
        }
        (p, k, m)
    }

    /// Number of divisors of `n`.
    pub fn divisor_count(&self, n: u64) -> u64 {
        let mut m = n;
        let mut d = 1;
        while m > 1 {
            let (_, k, rest) = self.split_spf_power(m);
            d *= k as u64 + 1;
            m = rest;
        }
        d
    }
}
