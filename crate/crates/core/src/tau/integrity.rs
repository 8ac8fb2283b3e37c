use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use super::ExactTauTable;
use crate::arith::SpfSieve;
use crate::report::{Bound, ReportTable, VerificationReport};

/// Above this limit coprime pairs are sampled instead of enumerated.
pub const INTEGRITY_SAMPLE_ABOVE: u64 = 100_000;
const PAIR_SAMPLES: usize = 400_000;
const PAIR_SEED: u64 = 0x7a75_5f69_6e74;
const RAMANUJAN_MODULUS: u64 = 691;

/// Coprime `(m, n)` with `2 <= m < n`, `mn <= limit`.
fn all_coprime_pairs(limit: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut m = 2;
    while m * (m + 1) <= limit {
        for n in (m + 1)..=(limit / m) {
            if m.gcd(&n) == 1 {
                out.push((m, n));
            }
        }
        m += 1;
    }
    out
}

fn sampled_coprime_pairs(limit: u64) -> Vec<(u64, u64)> {
    let mut rng = ChaCha20Rng::seed_from_u64(PAIR_SEED);
    let mut out = Vec::with_capacity(PAIR_SAMPLES);
    while out.len() < PAIR_SAMPLES {
        // log-uniform in m so that small and large factors are both exercised
        let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        let m = ((limit as f64).sqrt().powf(u) as u64).max(2);
        let n_max = limit / m;
        if n_max < 2 {
            continue;
        }
        let n = 2 + rng.next_u64() % (n_max - 1);
        if n != m && m.gcd(&n) == 1 {
            out.push((m, n));
        }
    }
    out
}

/// `σ₁₁(n) mod 691` for all `n <= limit`, built multiplicatively.
fn sigma11_mod(sieve: &SpfSieve, limit: u64) -> Vec<u64> {
    let m = RAMANUJAN_MODULUS;
    let mut out = vec![0u64; limit as usize + 1];
    if limit >= 1 {
        out[1] = 1;
    }
    for n in 2..=limit {
        let (p, k, rest) = sieve.split_spf_power(n);
        let pow11 = (0..11).fold(1u64, |acc, _| acc * (p % m) % m);
        let mut s = 1u64;
        let mut term = 1u64;
        for _ in 0..k {
            term = term * pow11 % m;
            s = (s + term) % m;
        }
        out[n as usize] = s * out[rest as usize] % m;
    }
    out
}

/// Multiplicativity, divisor bound and the Ramanujan congruence mod 691.
///
/// Failures are counted, never thrown; a valid table has every count at 0.
pub fn integrity_check(table: &ExactTauTable) -> VerificationReport {
    let limit = table.limit();
    let mut report = VerificationReport::new("tau-integrity");
    report.param("limit", limit);

    let first_ok = table.tau(1).is_one();
    report.check(
        "tau_1_failures",
        if first_ok { 0.0 } else { 1.0 },
        Bound::at_most(0.0),
    );
    if limit < 2 {
        for name in [
            "multiplicativity_failures",
            "divisor_bound_failures",
            "congruence_691_failures",
        ] {
            report.check(name, 0.0, Bound::at_most(0.0));
        }
        report
            .param("pairs_checked", 0)
            .param("pairs_sampled", false);
        return report;
    }
    let sieve = SpfSieve::new(limit).expect("sieve fits for any table held in memory");

    let sampled = limit > INTEGRITY_SAMPLE_ABOVE;
    let pairs = if sampled {
        sampled_coprime_pairs(limit)
    } else {
        all_coprime_pairs(limit)
    };
    let mult_failures = pairs
        .par_iter()
        .filter(|&&(m, n)| table.tau(m * n) != &(table.tau(m) * table.tau(n)))
        .count();

    let bound_failures = (1..=limit)
        .into_par_iter()
        .filter(|&n| {
            let t = table.tau(n);
            let d = BigInt::from(sieve.divisor_count(n));
            t * t > &d * &d * BigInt::from(n).pow(11)
        })
        .count();

    let sigma = sigma11_mod(&sieve, limit);
    let modulus = BigInt::from(RAMANUJAN_MODULUS);
    let congruence_failures = (1..=limit)
        .into_par_iter()
        .filter(|&n| {
            let r = table
                .tau(n)
                .mod_floor(&modulus)
                .to_u64()
                .unwrap_or(u64::MAX);
            r != sigma[n as usize]
        })
        .count();

    report
        .param("pairs_checked", pairs.len())
        .param("pairs_sampled", sampled);
    let mut counts = ReportTable::new(
        "failure-counts",
        &[
            "multiplicativity",
            "divisor_bound",
            "congruence_691",
            "pairs_checked",
        ],
    );
    counts.push(&[
        mult_failures as f64,
        bound_failures as f64,
        congruence_failures as f64,
        pairs.len() as f64,
    ]);
    report.tables.push(counts);
    report
        .check(
            "multiplicativity_failures",
            mult_failures as f64,
            Bound::at_most(0.0),
        )
        .check(
            "divisor_bound_failures",
            bound_failures as f64,
            Bound::at_most(0.0),
        )
        .check(
            "congruence_691_failures",
            congruence_failures as f64,
            Bound::at_most(0.0),
        );
    report
}
