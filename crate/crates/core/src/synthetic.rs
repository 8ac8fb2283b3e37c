//! Artificial Sato–Tate sequences from seeded angle sampling.
//!
//! Each prime owns an independent ChaCha20 stream: the 256-bit key is the
//! seed as 8 little-endian bytes followed by 24 zero bytes, and the stream
//! id is `p`. An attempt draws two `u64` words `u, v`; with
//! `U = (u >> 11) 2^-53` and `V = (v >> 11) 2^-53` the proposal is
//! `ϑ = πU`, accepted when `V < sin²ϑ`. Results therefore depend only on
//! `(seed, p)`, never on scheduling.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{
    assemble_multiplicative, growth_violations, AngleRecord, AngleSeries, GrowthViolation,
    NormalizedSequence, PrimePowerRule, SequenceSource, SpfSieve,
};
use crate::{Error, Result};

pub const DEFAULT_SEED: u64 = 42;

const UNIT: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub limit: u64,
    pub seed: u64,
    pub rule: PrimePowerRule,
}

impl SyntheticSpec {
    pub fn new(limit: u64, seed: u64, rule: PrimePowerRule) -> Self {
        Self { limit, seed, rule }
    }
}

/// The ChaCha20 stream owned by prime (or index) `p` under `seed`.
pub fn angle_stream(seed: u64, p: u64) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    let mut rng = ChaCha20Rng::from_seed(key);
    rng.set_stream(p);
    rng
}

#[inline]
fn unit(rng: &mut ChaCha20Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * UNIT
}

/// One Sato–Tate angle and the number of proposals it took.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledAngle {
    pub theta: f64,
    pub attempts: u32,
}

/// Rejection sampling from `(2/π) sin²ϑ` on `[0, π]` with a uniform envelope.
pub fn sample_st_angle(stream: &mut ChaCha20Rng) -> SampledAngle {
    let mut attempts = 0;
    loop {
        attempts += 1;
        let theta = std::f64::consts::PI * unit(stream);
        let s = theta.sin();
        if unit(stream) < s * s {
            return SampledAngle { theta, attempts };
        }
    }
}

/// The angle assigned to prime `p` under `seed`.
pub fn prime_angle(seed: u64, p: u64) -> SampledAngle {
    sample_st_angle(&mut angle_stream(seed, p))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSequence {
    pub spec: SyntheticSpec,
    pub angles: AngleSeries,
    pub sequence: NormalizedSequence,
    /// Prime powers `p^k <= limit` breaking the rule's growth bound.
    pub violations: Vec<GrowthViolation>,
    pub attempts: u64,
}

/// Samples an angle for every prime `p <= limit` and assembles the
/// multiplicative sequence.
pub fn build_synthetic_sequence(
    spec: &SyntheticSpec,
    sieve: &SpfSieve,
) -> Result<SyntheticSequence> {
    if spec.limit == 0 {
        return Err(Error::InvalidInput("sequence limit must be >= 1".into()));
    }
    if spec.limit > 1 && sieve.limit() < spec.limit {
        return Err(Error::Range {
            value: spec.limit,
            limit: sieve.limit(),
        });
    }
    let primes = sieve.primes_up_to(spec.limit);
    let draws: Vec<(AngleRecord, u32)> = primes
        .par_iter()
        .map(|&p| {
            let s = prime_angle(spec.seed, p as u64);
            (AngleRecord::from_angle(p as u64, s.theta), s.attempts)
        })
        .collect();
    let attempts = draws.iter().map(|d| d.1 as u64).sum();
    let angles = AngleSeries::new(spec.limit, draws.into_iter().map(|d| d.0).collect())?;
    let sequence = assemble_multiplicative(
        &angles,
        &spec.rule,
        spec.limit,
        sieve,
        SequenceSource::Synthetic,
    )?;

    let k_max = 63 - spec.limit.leading_zeros();
    let mut violations = growth_violations(&spec.rule, &angles, k_max.max(1));
    violations.retain(|v| (v.p as u128).pow(v.k) <= spec.limit as u128);
    Ok(SyntheticSequence {
        spec: *spec,
        angles,
        sequence,
        violations,
        attempts,
    })
}
