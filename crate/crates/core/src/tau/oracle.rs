use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ExactTauTable;
use crate::{Error, Result};

/// Largest limit the quadratic oracle accepts.
pub const ORACLE_MAX_LIMIT: u64 = 10_000;

/// Reference τ table by repeated dense multiplication of truncated series.
///
/// Builds `P = ∏_{k<N} (1 - q^k)` and multiplies it into itself until the
/// 24th power; quadratic in `N` and intended only for testing.
pub fn tau_naive_oracle(limit: u64) -> Result<ExactTauTable> {
    if limit == 0 {
        return Err(Error::Configuration("τ limit must be >= 1".into()));
    }
    if limit > ORACLE_MAX_LIMIT {
        return Err(Error::Configuration(format!(
            "naive τ oracle refuses limit {limit} > {ORACLE_MAX_LIMIT}"
        )));
    }
    let len = limit as usize;
    let mut euler = vec![BigInt::zero(); len];
    euler[0] = BigInt::one();
    for k in 1..len {
        for i in (k..len).rev() {
            let t = euler[i - k].clone();
            euler[i] -= t;
        }
    }

    let mut acc = euler.clone();
    for _ in 1..24 {
        let mut next = vec![BigInt::zero(); len];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in euler[..len - i].iter().enumerate() {
                if !b.is_zero() {
                    next[i + j] += a * b;
                }
            }
        }
        acc = next;
    }
    ExactTauTable::from_values(acc)
}
