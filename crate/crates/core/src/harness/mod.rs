//! Verifiers that turn sequences into [`VerificationReport`]s.
//!
//! Every verifier is a pure fold over its inputs with fixed-chunk
//! reductions, so reports are bit-identical for any thread count. Bounds
//! that depend on desk-scale judgement are optional arguments; structural
//! checks (identities, triangle inequality, unit intervals) are always on.
//!
//! [`VerificationReport`]: crate::report::VerificationReport

mod assumptions;
mod lemmas;
mod thm1;
mod thm2;
mod thm3;

use serde::{Deserialize, Serialize};

use crate::arith::{NormalizedSequence, SpfSieve};
use crate::numeric::log2_iter;
use crate::{Error, Result};

pub use assumptions::{check_assumptions, default_angle_grid, AssumptionOptions};
pub use lemmas::{verify_hall_tenenbaum, verify_lemma_sums};
pub use thm1::verify_thm1;
pub use thm2::verify_thm2;
pub use thm3::{verify_thm3, Standardization, StrongMultApprox, Thm3Bounds};

/// Strictly increasing cutoffs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoints(Vec<u64>);

impl Checkpoints {
    pub fn new(xs: Vec<u64>, limit: u64) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::InvalidInput("no checkpoints given".into()));
        }
        if xs[0] == 0 || xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(format!(
                "checkpoints must be positive and strictly increasing: {xs:?}"
            )));
        }
        let last = *xs.last().unwrap();
        if last > limit {
            return Err(Error::Range { value: last, limit });
        }
        Ok(Self(xs))
    }

    /// Parses `"1000,10000"`.
    pub fn parse(text: &str, limit: u64) -> Result<Self> {
        let xs = text
            .split(',')
            .map(|s| {
                let s = s.trim();
                parse_count(s).ok_or_else(|| Error::InvalidInput(format!("bad checkpoint `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(xs, limit)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn last(&self) -> u64 {
        *self.0.last().expect("nonempty by construction")
    }
}

/// Integers written plainly or as `1e6`.
pub fn parse_count(s: &str) -> Option<u64> {
    if let Ok(v) = s.parse::<u64>() {
        return Some(v);
    }
    let (m, e) = s.split_once(['e', 'E'])?;
    let m: u64 = m.parse().ok()?;
    let e: u32 = e.parse().ok()?;
    m.checked_mul(10u64.checked_pow(e)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportMode {
    All,
    Nonzero,
    FloorA,
}

impl std::str::FromStr for SupportMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(SupportMode::All),
            "nonzero" => Ok(SupportMode::Nonzero),
            "floor-a" | "floor" => Ok(SupportMode::FloorA),
            other => Err(Error::InvalidInput(format!(
                "unknown support filter `{other}`"
            ))),
        }
    }
}

/// Which `n` enter log-scale statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportFilter {
    pub mode: SupportMode,
    /// Exponent of the floor `(log₂ x)^{-A}`; used by `FloorA` only.
    pub a: f64,
}

impl SupportFilter {
    pub fn all() -> Self {
        Self {
            mode: SupportMode::All,
            a: 2.0,
        }
    }

    pub fn nonzero() -> Self {
        Self {
            mode: SupportMode::Nonzero,
            a: 2.0,
        }
    }

    pub fn floor_a(a: f64) -> Result<Self> {
        if !(a > 1.0) {
            return Err(Error::InvalidInput(format!(
                "floor exponent A must exceed 1, got {a}"
            )));
        }
        Ok(Self {
            mode: SupportMode::FloorA,
            a,
        })
    }

    /// Prime-value floor at cutoff `x` (0 unless `FloorA`).
    pub fn prime_floor(&self, x: u64) -> f64 {
        match self.mode {
            SupportMode::FloorA => log2_iter(x as f64).powf(-self.a),
            _ => 0.0,
        }
    }

    /// Membership mask for `1..=x`; index 0 is unused.
    ///
    /// `FloorA` also drops `a_n = 0`, so it is always a subset of `Nonzero`.
    pub fn mask(&self, seq: &NormalizedSequence, sieve: &SpfSieve, x: u64) -> Vec<bool> {
        let floor = self.prime_floor(x);
        let mut keep = vec![false; x as usize + 1];
        for n in 1..=x {
            keep[n as usize] = match self.mode {
                SupportMode::All => true,
                SupportMode::Nonzero => seq.a(n) != 0.0,
                SupportMode::FloorA => {
                    seq.a(n) != 0.0 && prime_factors(sieve, n).all(|p| seq.a(p).abs() > floor)
                }
            };
        }
        keep
    }
}

/// Distinct prime factors in increasing order.
pub(crate) fn prime_factors(sieve: &SpfSieve, n: u64) -> impl Iterator<Item = u64> + '_ {
    let mut m = n;
    std::iter::from_fn(move || {
        if m <= 1 {
            return None;
        }
        let (p, _, rest) = sieve.split_spf_power(m);
        m = rest;
        Some(p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::SequenceSource;

    #[test]
    fn checkpoint_validation() {
        assert!(Checkpoints::new(vec![10, 100], 100).is_ok());
        assert!(Checkpoints::new(vec![100, 10], 100).is_err());
        assert!(Checkpoints::new(vec![10, 10], 100).is_err());
        assert!(Checkpoints::new(vec![10, 1000], 100).is_err());
        assert!(Checkpoints::new(vec![], 100).is_err());
        assert_eq!(
            Checkpoints::parse("1e2, 1000", 1000).unwrap().as_slice(),
            &[100, 1000]
        );
    }

    #[test]
    fn floor_support_is_inside_nonzero() {
        let sieve = SpfSieve::new(200).unwrap();
        let vals: Vec<f64> = (1..=200u64)
            .map(|n| {
                if n % 7 == 0 {
                    0.0
                } else {
                    ((n as f64) * 0.37).sin()
                }
            })
            .collect();
        let seq = NormalizedSequence::from_values(SequenceSource::Synthetic, &vals).unwrap();
        let nz = SupportFilter::nonzero().mask(&seq, &sieve, 200);
        let fl = SupportFilter::floor_a(1.5).unwrap().mask(&seq, &sieve, 200);
        assert!(nz.iter().zip(&fl).all(|(&a, &b)| a || !b));
        assert!(!nz[7] && !fl[14]);
        assert_eq!(
            prime_factors(&sieve, 180).collect::<Vec<_>>(),
            vec![2, 3, 5]
        );
    }
}
