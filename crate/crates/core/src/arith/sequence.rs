use serde::{Deserialize, Serialize};

use super::{PrimePowerRule, SpfSieve};
use crate::{Error, Result};

/// Where a normalized sequence came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceSource {
    Tau,
    Elliptic,
    Synthetic,
}

impl SequenceSource {
    pub fn tag(self) -> u8 {
        match self {
            SequenceSource::Tau => 1,
            SequenceSource::Elliptic => 2,
            SequenceSource::Synthetic => 3,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            1 => Some(SequenceSource::Tau),
            2 => Some(SequenceSource::Elliptic),
            3 => Some(SequenceSource::Synthetic),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SequenceSource::Tau => "tau",
            SequenceSource::Elliptic => "elliptic",
            SequenceSource::Synthetic => "synthetic",
        }
    }
}

/// `(p, a_p, ϑ_p)` with `a_p = 2cos ϑ_p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleRecord {
    pub p: u64,
    pub a_p: f64,
    pub theta: f64,
}

impl AngleRecord {
    pub fn from_angle(p: u64, theta: f64) -> Self {
        Self {
            p,
            a_p: 2.0 * theta.cos(),
            theta,
        }
    }

    /// Angle from a prime value, clamping rounding noise just outside `[-2, 2]`.
    pub fn from_value(p: u64, a_p: f64) -> Self {
        Self {
            p,
            a_p,
            theta: (a_p / 2.0).clamp(-1.0, 1.0).acos(),
        }
    }
}

/// Prime angles for a set of primes up to `limit`, sorted by `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleSeries {
    limit: u64,
    records: Vec<AngleRecord>,
}

impl AngleSeries {
    pub fn new(limit: u64, records: Vec<AngleRecord>) -> Result<Self> {
        if records.windows(2).any(|w| w[0].p >= w[1].p) {
            return Err(Error::InvalidInput(
                "angle records must be strictly increasing in p".into(),
            ));
        }
        if let Some(last) = records.last() {
            if last.p > limit {
                return Err(Error::InvalidInput(format!(
                    "angle record for {} beyond series limit {limit}",
                    last.p
                )));
            }
        }
        if let Some(r) = records
            .iter()
            .find(|r| !(0.0..=std::f64::consts::PI).contains(&r.theta) || r.a_p.abs() > 2.0)
        {
            return Err(Error::InvalidInput(format!(
                "angle {} / value {} at p={} outside [0, π] / [-2, 2]",
                r.theta, r.a_p, r.p
            )));
        }
        Ok(Self { limit, records })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn records(&self) -> &[AngleRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, p: u64) -> Option<&AngleRecord> {
        self.records
            .binary_search_by_key(&p, |r| r.p)
            .ok()
            .map(|i| &self.records[i])
    }

    /// Records with `p <= x`.
    pub fn up_to(&self, x: u64) -> &[AngleRecord] {
        let end = self.records.partition_point(|r| r.p <= x);
        &self.records[..end]
    }

    pub fn max_prime(&self) -> Option<u64> {
        self.records.last().map(|r| r.p)
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.theta).collect()
    }
}

/// Double-precision values `a_1..a_N` of a multiplicative sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedSequence {
    source: SequenceSource,
    // index 0 is a placeholder so that values[n] = a_n
    values: Vec<f64>,
}

impl NormalizedSequence {
    /// Wraps `a_1..a_N` (the slice holds `a_1` first).
    pub fn from_values(source: SequenceSource, values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("sequence needs at least a_1".into()));
        }
        let mut v = Vec::with_capacity(values.len() + 1);
        v.push(0.0);
        v.extend_from_slice(values);
        Ok(Self { source, values: v })
    }

    pub fn source(&self) -> SequenceSource {
        self.source
    }

    pub fn limit(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    /// `a_n` for `1 <= n <= limit`.
    #[inline]
    pub fn a(&self, n: u64) -> f64 {
        self.values[n as usize]
    }

    /// `a_1..a_N` as a slice (`values()[n - 1] = a_n`).
    pub fn values(&self) -> &[f64] {
        &self.values[1..]
    }

    /// Copy restricted to `n <= limit`.
    pub fn truncated(&self, limit: u64) -> Self {
        let end = (limit as usize + 1).min(self.values.len());
        Self {
            source: self.source,
            values: self.values[..end].to_vec(),
        }
    }

    /// Primes `p <= limit` with `|a_p| > 2` (beyond rounding).
    pub fn prime_bound_defects(&self, sieve: &SpfSieve) -> Vec<u64> {
        sieve
            .primes_up_to(self.limit())
            .iter()
            .map(|&p| p as u64)
            .filter(|&p| self.a(p).abs() > 2.0 + 1e-12)
            .collect()
    }

    /// Relative multiplicativity error `|a_{mn} - a_m a_n|` scaled by
    /// `max(1, |a_m a_n|)`.
    pub fn multiplicativity_error(&self, m: u64, n: u64) -> f64 {
        let prod = self.a(m) * self.a(n);
        (self.a(m * n) - prod).abs() / prod.abs().max(1.0)
    }
}

/// Builds `a_1..a_limit` from a prime-power function: `a_n` is the product of
/// `prime_power(p, k)` over `p^k || n`.
///
/// Values are filled in increasing `n` as `a_n = a_{p^k} a_{n/p^k}` with
/// `p = spf(n)`, so every entry is a product of at most two stored values.
pub fn assemble_with<F>(
    sieve: &SpfSieve,
    limit: u64,
    source: SequenceSource,
    mut prime_power: F,
) -> Result<NormalizedSequence>
where
    F: FnMut(u64, u32) -> Result<f64>,
{
    if limit == 0 {
        return Err(Error::InvalidInput("sequence limit must be >= 1".into()));
    }
    if limit > sieve.limit() && limit > 1 {
        return Err(Error::Range {
            value: limit,
            limit: sieve.limit(),
        });
    }
    let n_max = limit as usize;
    let mut values = vec![0.0f64; n_max + 1];
    values[1] = 1.0;
    for n in 2..=n_max {
        let (p, k, m) = sieve.split_spf_power(n as u64);
        values[n] = if m == 1 {
            prime_power(p, k)?
        } else {
            values[n / m as usize] * values[m as usize]
        };
    }
    Ok(NormalizedSequence { source, values })
}

/// Assembles `a_n = ∏ rule(ϑ_p, k)` over `p^k || n` from prime angles.
pub fn assemble_multiplicative(
    angles: &AngleSeries,
    rule: &PrimePowerRule,
    limit: u64,
    sieve: &SpfSieve,
    source: SequenceSource,
) -> Result<NormalizedSequence> {
    let records = angles.records();
    let mut cursor = 0usize;
    assemble_with(sieve, limit, source, |p, k| {
        // primes arrive in increasing order at k = 1
        let rec = if k == 1 {
            while cursor < records.len() && records[cursor].p < p {
                cursor += 1;
            }
            records.get(cursor).filter(|r| r.p == p)
        } else {
            angles.get(p)
        };
        let rec =
            rec.ok_or_else(|| Error::IncompleteInput(format!("no angle recorded for prime {p}")))?;
        Ok(if k == 1 {
            rec.a_p
        } else {
            rule.value(rec.theta, k)
        })
    })
}
