//! Exact Ramanujan τ(n) from `q ∏ (1 - q^k)^24`.
//!
//! The product is built as the eighth power of the cube of the Euler
//! product. The cube has the sparse expansion `∑ (-1)^k (2k+1) q^{k(k+1)/2}`,
//! so the first squaring is done directly on the sparse terms and the
//! remaining two by multi-prime NTT with CRT reconstruction. Coefficient
//! `c_{n-1}` of the truncated product is `τ(n)`.

mod integrity;
pub mod ntt;
mod oracle;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{AngleRecord, AngleSeries, NormalizedSequence, SequenceSource, SpfSieve};
use crate::{Error, Result};

pub use integrity::{integrity_check, INTEGRITY_SAMPLE_ABOVE};
pub use oracle::{tau_naive_oracle, ORACLE_MAX_LIMIT};

/// Exact `τ(1)..τ(N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactTauTable {
    taus: Vec<BigInt>,
}

impl ExactTauTable {
    /// Wraps `τ(1)..τ(N)` without checking them; see [`integrity_check`].
    pub fn from_values(taus: Vec<BigInt>) -> Result<Self> {
        if taus.is_empty() {
            return Err(Error::InvalidInput("τ table needs at least τ(1)".into()));
        }
        Ok(Self { taus })
    }

    pub fn limit(&self) -> u64 {
        self.taus.len() as u64
    }

    pub fn tau(&self, n: u64) -> &BigInt {
        &self.taus[n as usize - 1]
    }

    pub fn values(&self) -> &[BigInt] {
        &self.taus
    }

    pub fn into_values(self) -> Vec<BigInt> {
        self.taus
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauConfig {
    pub limit: u64,
    pub ntt_primes: Vec<u64>,
    /// Cross-check a prefix of the result against the quadratic oracle.
    pub verify_small: bool,
}

/// Prefix length checked when `verify_small` is set.
pub const VERIFY_SMALL_PREFIX: u64 = 256;

impl TauConfig {
    pub fn new(limit: u64) -> Self {
        Self {
            limit,
            ntt_primes: ntt::NTT_PRIMES.iter().map(|&(p, _)| p).collect(),
            verify_small: false,
        }
    }

    pub fn with_verify_small(mut self, yes: bool) -> Self {
        self.verify_small = yes;
        self
    }

    /// Rejects configurations that cannot succeed before any series work.
    ///
    /// The CRT capacity must at least hold the final coefficients, which
    /// obey `|τ(n)| <= d(n) n^{11/2} < 2 n^6`; the exact per-stage bound is
    /// re-checked against the actual inputs before each transform.
    pub fn validate(&self) -> Result<()> {
        if self.limit == 0 {
            return Err(Error::Configuration("τ limit must be >= 1".into()));
        }
        for &p in &self.ntt_primes {
            ntt::root_of(p)?;
        }
        let max_len = 1u64 << (ntt::MAX_NTT_LOG2 - 1);
        if self.limit > max_len {
            return Err(Error::Configuration(format!(
                "τ limit {} exceeds the largest transform-supported length {max_len}",
                self.limit
            )));
        }
        if self.limit > 2 {
            let capacity: BigInt = self.ntt_primes.iter().map(|&p| BigInt::from(p)).product();
            let need = BigInt::from(self.limit).pow(6) * 4u32;
            if capacity <= need {
                return Err(Error::Configuration(format!(
                    "CRT capacity of {} bits cannot hold τ values up to n = {} (needs > {} bits)",
                    capacity.bits(),
                    self.limit,
                    need.bits()
                )));
            }
        }
        Ok(())
    }
}

/// Sparse cube of the Euler product, truncated to `len` terms:
/// `(index, coefficient)` pairs.
fn euler_cube_terms(len: usize) -> Vec<(usize, i128)> {
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let idx = k * (k + 1) / 2;
        if idx >= len {
            break;
        }
        let c = (2 * k + 1) as i128;
        out.push((idx, if k.is_multiple_of(2) { c } else { -c }));
        k += 1;
    }
    out
}

fn square_sparse(terms: &[(usize, i128)], len: usize) -> Vec<i128> {
    let mut out = vec![0i128; len];
    for (i, &(a, ca)) in terms.iter().enumerate() {
        for &(b, cb) in &terms[i..] {
            let idx = a + b;
            if idx >= len {
                break;
            }
            let v = ca * cb;
            out[idx] += if a == b { v } else { 2 * v };
        }
    }
    out
}

fn to_i128(values: Vec<BigInt>) -> Result<Vec<i128>> {
    values
        .into_par_iter()
        .map(|v| {
            v.to_i128().ok_or_else(|| {
                Error::Configuration("intermediate series coefficient exceeds 128 bits".into())
            })
        })
        .collect()
}

/// Exact τ(1..=limit) by the eta product.
pub fn expand_delta(config: &TauConfig) -> Result<ExactTauTable> {
    config.validate()?;
    let len = config.limit as usize;

    let cube = euler_cube_terms(len);
    let sixth = square_sparse(&cube, len);

    let moduli = ntt::moduli_for_square(&sixth, len, &config.ntt_primes)?;
    let twelfth = to_i128(ntt::square_truncated(&sixth, len, &moduli)?)?;

    let moduli = ntt::moduli_for_square(&twelfth, len, &config.ntt_primes)?;
    let taus = ntt::square_truncated(&twelfth, len, &moduli)?;

    let table = ExactTauTable { taus };
    if config.verify_small {
        let prefix = config.limit.min(VERIFY_SMALL_PREFIX);
        let oracle = tau_naive_oracle(prefix)?;
        if oracle.values() != &table.values()[..prefix as usize] {
            return Err(Error::DataCorruption(
                "fast τ expansion disagrees with the quadratic oracle".into(),
            ));
        }
    }
    Ok(table)
}

/// `n^{11/2}` in double precision.
pub fn weight_scale(n: u64) -> f64 {
    let x = n as f64;
    x.powi(5) * x.sqrt()
}

/// `a_n = τ(n) / n^{11/2}`.
pub fn normalize_tau(table: &ExactTauTable) -> NormalizedSequence {
    let values: Vec<f64> = table
        .taus
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            let n = i as u64 + 1;
            t.to_f64().unwrap_or(f64::NAN) / weight_scale(n)
        })
        .collect();
    NormalizedSequence::from_values(SequenceSource::Tau, &values)
        .expect("table is nonempty by construction")
}

/// Whether `|τ(p)| <= 2 p^{11/2}`, decided exactly as `τ(p)^2 <= 4 p^{11}`.
pub fn within_deligne(tau_p: &BigInt, p: u64) -> bool {
    tau_p * tau_p <= BigInt::from(p).pow(11) * 4u32
}

/// `ϑ_p = arccos(τ(p) / (2 p^{11/2}))` for every prime `p <= limit`.
pub fn tau_angles(table: &ExactTauTable) -> Result<AngleSeries> {
    let limit = table.limit();
    if limit < 2 {
        return Err(Error::InvalidInput(
            "τ angles need a table with limit >= 2".into(),
        ));
    }
    let sieve = SpfSieve::new(limit)?;
    let records = sieve
        .primes()
        .par_iter()
        .map(|&p| {
            let p = p as u64;
            let t = table.tau(p);
            if !within_deligne(t, p) {
                return Err(Error::DataCorruption(format!(
                    "|τ({p})| = {t} exceeds 2 p^(11/2)"
                )));
            }
            let a_p = t.to_f64().unwrap_or(f64::NAN) / weight_scale(p);
            Ok(AngleRecord::from_value(p, a_p.clamp(-2.0, 2.0)))
        })
        .collect::<Result<Vec<_>>>()?;
    AngleSeries::new(limit, records)
}

/// Rebuilds τ(1..=N) from the prime values alone, through
/// `τ(p^{k+1}) = τ(p)τ(p^k) - p^{11} τ(p^{k-1})` and multiplicativity.
pub fn hecke_reconstruct(table: &ExactTauTable, sieve: &SpfSieve) -> Result<ExactTauTable> {
    let limit = table.limit();
    if limit > 1 && sieve.limit() < limit {
        return Err(Error::Range {
            value: limit,
            limit: sieve.limit(),
        });
    }
    let n_max = limit as usize;
    let mut out = vec![BigInt::zero(); n_max + 1];
    out[1] = BigInt::one();
    for n in 2..=n_max {
        let (p, k, m) = sieve.split_spf_power(n as u64);
        out[n] = if m == 1 {
            if k == 1 {
                table.tau(p).clone()
            } else {
                let pk = n / p as usize;
                let pk2 = pk / p as usize;
                &out[p as usize] * &out[pk] - BigInt::from(p).pow(11) * &out[pk2]
            }
        } else {
            &out[n / m as usize] * &out[m as usize]
        };
    }
    out.remove(0);
    Ok(ExactTauTable { taus: out })
}

/// Largest `|τ(n)|` in bits, for capacity diagnostics.
pub fn max_bits(table: &ExactTauTable) -> u64 {
    table.taus.iter().map(|t| t.abs().bits()).max().unwrap_or(0)
}
