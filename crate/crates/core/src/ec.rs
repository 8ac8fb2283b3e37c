//! Traces of Frobenius for `y² = x³ + Ax + B` and the sequences built
//! from them.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{
    assemble_with, hecke_recursion, AngleRecord, AngleSeries, NormalizedSequence, SequenceSource,
    SpfSieve,
};
use crate::numeric::is_prime_u64;
use crate::report::{ReportTable, VerificationReport};
use crate::{Error, Result};

/// Largest prime accepted by the `O(p)` point count.
pub const MAX_TRACE_PRIME: u64 = 10_000_000;
/// Default budget for [`trace_series`].
pub const MAX_SERIES_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSpec {
    a4: i64,
    a6: i64,
    discriminant: BigInt,
}

impl CurveSpec {
    pub fn new(a4: i64, a6: i64) -> Result<Self> {
        let a = BigInt::from(a4);
        let b = BigInt::from(a6);
        let discriminant: BigInt = -16 * (4 * a.pow(3) + 27 * b.pow(2));
        if discriminant.is_zero() {
            return Err(Error::InvalidInput(format!(
                "y^2 = x^3 + {a4}x + {a6} is singular"
            )));
        }
        Ok(Self {
            a4,
            a6,
            discriminant,
        })
    }

    pub fn a4(&self) -> i64 {
        self.a4
    }

    pub fn a6(&self) -> i64 {
        self.a6
    }

    /// `-16(4A³ + 27B²)`.
    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    pub fn is_good(&self, p: u64) -> bool {
        !(&self.discriminant % BigInt::from(p)).is_zero()
    }
}

/// `t_p = p + 1 - #E(F_p)`; at bad primes this is +1, -1 or 0 for split,
/// nonsplit and additive reduction of the given model.
pub fn trace_at_prime(curve: &CurveSpec, p: u64) -> Result<i64> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if p > MAX_TRACE_PRIME {
        return Err(Error::Range {
            value: p,
            limit: MAX_TRACE_PRIME,
        });
    }
    let a = curve.a4.rem_euclid(p as i64) as u64;
    let b = curve.a6.rem_euclid(p as i64) as u64;
    if p <= 3 {
        return Ok(p as i64 + 1 - count_points_small(a, b, p) as i64);
    }
    Ok(-legendre_sweep(a, b, p))
}

/// Projective point count by enumeration, for tiny fields.
fn count_points_small(a: u64, b: u64, p: u64) -> u64 {
    let mut count = 1; // point at infinity
    for x in 0..p {
        let rhs = (x * x * x + a * x + b) % p;
        count += (0..p).filter(|y| y * y % p == rhs).count() as u64;
    }
    count
}

/// `∑_x χ(x³ + Ax + B)` with a quadratic-residue table.
fn legendre_sweep(a: u64, b: u64, p: u64) -> i64 {
    let n = p as usize;
    let mut chi = vec![-1i8; n];
    chi[0] = 0;
    for y in 1..=n / 2 {
        chi[y * y % n] = 1;
    }
    let mut sum = 0i64;
    for x in 0..p {
        let v = ((x * x % p) * x + a * x + b) % p;
        sum += chi[v as usize] as i64;
    }
    sum
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub p: u64,
    pub t: i64,
    pub good: bool,
}

impl TraceRecord {
    /// `t_p / √p`.
    pub fn normalized(&self) -> f64 {
        self.t as f64 / (self.p as f64).sqrt()
    }
}

/// Traces at every prime `p <= limit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSeries {
    a4: i64,
    a6: i64,
    limit: u64,
    records: Vec<TraceRecord>,
}

fn within_hasse(t: i64, p: u64) -> bool {
    (t as i128) * (t as i128) <= 4 * p as i128
}

impl TraceSeries {
    /// Validates ordering, Hasse at good primes and `|t| <= 1` at bad ones.
    pub fn new(a4: i64, a6: i64, limit: u64, records: Vec<TraceRecord>) -> Result<Self> {
        if records.windows(2).any(|w| w[0].p >= w[1].p) {
            return Err(Error::InvalidInput(
                "trace records must increase in p".into(),
            ));
        }
        if let Some(last) = records.last() {
            if last.p > limit {
                return Err(Error::InvalidInput(format!(
                    "trace record at p = {} beyond limit {limit}",
                    last.p
                )));
            }
        }
        for r in &records {
            if r.good && !within_hasse(r.t, r.p) {
                return Err(Error::DataCorruption(format!(
                    "t_{} = {} violates the Hasse bound",
                    r.p, r.t
                )));
            }
            if !r.good && r.t.abs() > 1 {
                return Err(Error::DataCorruption(format!(
                    "bad prime {} has trace {}",
                    r.p, r.t
                )));
            }
        }
        Ok(Self {
            a4,
            a6,
            limit,
            records,
        })
    }

    pub fn curve(&self) -> (i64, i64) {
        (self.a4, self.a6)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    pub fn get(&self, p: u64) -> Option<&TraceRecord> {
        self.records
            .binary_search_by_key(&p, |r| r.p)
            .ok()
            .map(|i| &self.records[i])
    }

    pub fn bad_primes(&self) -> Vec<u64> {
        self.records
            .iter()
            .filter(|r| !r.good)
            .map(|r| r.p)
            .collect()
    }

    /// Angles at good primes only; bad primes carry no Sato–Tate angle.
    pub fn angles(&self) -> Result<AngleSeries> {
        let recs = self
            .records
            .iter()
            .filter(|r| r.good)
            .map(|r| AngleRecord::from_value(r.p, r.normalized().clamp(-2.0, 2.0)))
            .collect();
        AngleSeries::new(self.limit, recs)
    }
}

/// Traces at every prime up to `limit`, in increasing order of `p`.
pub fn trace_series(curve: &CurveSpec, limit: u64) -> Result<TraceSeries> {
    if limit > MAX_SERIES_LIMIT {
        return Err(Error::Range {
            value: limit,
            limit: MAX_SERIES_LIMIT,
        });
    }
    let primes: Vec<u64> = if limit < 2 {
        Vec::new()
    } else {
        SpfSieve::new(limit)?
            .primes()
            .iter()
            .map(|&p| p as u64)
            .collect()
    };
    let records = primes
        .par_iter()
        .map(|&p| {
            let t = trace_at_prime(curve, p)?;
            Ok(TraceRecord {
                p,
                t,
                good: curve.is_good(p),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    TraceSeries::new(curve.a4, curve.a6, limit, records)
}

/// `ã_n = t_n / √n`: the normalized Hecke recursion at good primes and
/// `(t_p/√p)^k` at bad ones.
pub fn ec_normalized_sequence(
    series: &TraceSeries,
    sieve: &SpfSieve,
    limit: u64,
) -> Result<NormalizedSequence> {
    if series.limit < limit {
        return Err(Error::IncompleteInput(format!(
            "trace series reaches {} but the sequence needs {limit}",
            series.limit
        )));
    }
    assemble_with(sieve, limit, SequenceSource::Elliptic, |p, k| {
        let r = series
            .get(p)
            .ok_or_else(|| Error::IncompleteInput(format!("no trace recorded for {p}")))?;
        let a = r.normalized();
        Ok(if r.good {
            hecke_recursion(a, k)
        } else {
            a.powi(k as i32)
        })
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaEstimate {
    pub x: u64,
    pub value: f64,
    pub zero_primes: Vec<u64>,
}

/// `∏ (1 - 1/p)` over primes `p <= x` with `t_p = 0`, good or bad.
pub fn kappa_partial(series: &TraceSeries, x: u64) -> Result<KappaEstimate> {
    if x > series.limit {
        return Err(Error::Range {
            value: x,
            limit: series.limit,
        });
    }
    let zero_primes: Vec<u64> = series
        .records
        .iter()
        .take_while(|r| r.p <= x)
        .filter(|r| r.t == 0)
        .map(|r| r.p)
        .collect();
    let value = zero_primes
        .iter()
        .fold(1.0, |acc, &p| acc * (1.0 - 1.0 / p as f64));
    Ok(KappaEstimate {
        x,
        value,
        zero_primes,
    })
}

fn census(
    name: &str,
    limit: u64,
    entries: impl Iterator<Item = (u64, bool)>,
) -> VerificationReport {
    // dyadic block j holds p in [2^j, 2^{j+1})
    let mut good = Vec::<u64>::new();
    let mut zero = Vec::<u64>::new();
    for (p, is_zero) in entries {
        let j = 63 - p.leading_zeros() as usize;
        if good.len() <= j {
            good.resize(j + 1, 0);
            zero.resize(j + 1, 0);
        }
        good[j] += 1;
        if is_zero {
            zero[j] += 1;
        }
    }
    let mut table = ReportTable::new(
        "dyadic-blocks",
        &[
            "block_lo",
            "block_hi",
            "good_primes",
            "zero_traces",
            "density",
        ],
    );
    for (j, (&g, &z)) in good.iter().zip(&zero).enumerate() {
        if g == 0 {
            continue;
        }
        table.push(&[
            (1u64 << j) as f64,
            ((1u64 << (j + 1)) - 1) as f64,
            g as f64,
            z as f64,
            z as f64 / g as f64,
        ]);
    }
    let total_good: u64 = good.iter().sum();
    let total_zero: u64 = zero.iter().sum();
    let density = if total_good == 0 {
        0.0
    } else {
        total_zero as f64 / total_good as f64
    };
    let mut report = VerificationReport::new(name);
    report
        .param("limit", limit)
        .param("good_primes", total_good)
        .param("zero_traces", total_zero)
        .param("density", density);
    report.tables.push(table);
    report
}

/// Good primes with `t_p = 0`, counted per dyadic block.
pub fn supersingular_census(series: &TraceSeries) -> VerificationReport {
    census(
        "supersingular-census",
        series.limit,
        series
            .records
            .iter()
            .filter(|r| r.good)
            .map(|r| (r.p, r.t == 0)),
    )
}

/// The same census for any angle series, counting exact zeros `a_p = 0`.
pub fn supersingular_census_angles(angles: &AngleSeries) -> VerificationReport {
    census(
        "supersingular-census",
        angles.limit(),
        angles.records().iter().map(|r| (r.p, r.a_p == 0.0)),
    )
}
