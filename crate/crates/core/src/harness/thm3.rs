use serde::{Deserialize, Serialize};

use super::{prime_factors, SupportFilter, SupportMode};
use crate::arith::{AngleRecord, AngleSeries, NormalizedSequence, SpfSieve};
use crate::numeric::{det_sum, log2_iter, normal_cdf};
use crate::report::{Bound, ReportTable, VerificationReport};
use crate::stats::{ks_statistic, prime_log_moments, Ecdf, STConstants};
use crate::tolerances::{ADDITIVE_IDENTITY_REL, SQUAREFREE_GAP_MAX};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Standardization {
    /// Centre `-½ log₂x`, variance `c log₂x`.
    Asymptotic,
    /// Centre and variance from the prime log moments `μ`, `σ²`.
    FiniteSize,
    /// Sample mean and variance.
    SelfStandardized,
}

impl std::str::FromStr for Standardization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "asymptotic" => Ok(Self::Asymptotic),
            "finite-size" | "finite" => Ok(Self::FiniteSize),
            "self" => Ok(Self::SelfStandardized),
            other => Err(Error::InvalidInput(format!(
                "unknown standardization `{other}`"
            ))),
        }
    }
}

impl Standardization {
    pub fn name(self) -> &'static str {
        match self {
            Self::Asymptotic => "asymptotic",
            Self::FiniteSize => "finite-size",
            Self::SelfStandardized => "self",
        }
    }
}

/// Optional distributional bands; the exact identities are always checked.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Thm3Bounds {
    pub ks_max: Option<f64>,
    pub skew_max: Option<f64>,
    /// `(target, tol)` for `μ / log₂x`.
    pub mu_band: Option<(f64, f64)>,
    /// `(target, tol)` for `σ² / log₂x`.
    pub sigma2_band: Option<(f64, f64)>,
}

/// Gaps `c(n) = log|h(n)| - log|a_n|` against the strongly multiplicative
/// companion `h(p^k) = a_p`, over the filtered support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongMultApprox {
    pub gaps: Vec<(u64, f64)>,
}

impl StrongMultApprox {
    pub fn build(seq: &NormalizedSequence, sieve: &SpfSieve, x: u64, keep: &[bool]) -> Self {
        let gaps = (1..=x)
            .filter(|&n| keep[n as usize] && seq.a(n) != 0.0)
            .map(|n| {
                let log_h: f64 = prime_factors(sieve, n).map(|p| seq.a(p).abs().ln()).sum();
                (n, log_h - seq.a(n).abs().ln())
            })
            .collect();
        Self { gaps }
    }

    /// Largest `|c(n)|` over squarefree `n`.
    pub fn squarefree_max(&self, sieve: &SpfSieve) -> f64 {
        self.gaps
            .iter()
            .filter(|(n, _)| is_squarefree(sieve, *n))
            .map(|(_, c)| c.abs())
            .fold(0.0, f64::max)
    }

    /// Quantiles of `|c(n)|` at the given levels.
    pub fn abs_quantiles(&self, levels: &[f64]) -> Vec<f64> {
        let mut v: Vec<f64> = self.gaps.iter().map(|(_, c)| c.abs()).collect();
        v.sort_by(f64::total_cmp);
        levels
            .iter()
            .map(|&q| {
                if v.is_empty() {
                    return 0.0;
                }
                let i = ((q * (v.len() - 1) as f64).round() as usize).min(v.len() - 1);
                v[i]
            })
            .collect()
    }
}

fn is_squarefree(sieve: &SpfSieve, n: u64) -> bool {
    let mut m = n;
    while m > 1 {
        let (_, k, rest) = sieve.split_spf_power(m);
        if k > 1 {
            return false;
        }
        m = rest;
    }
    true
}

/// Prime values of a sequence as an angle series (for the log moments).
fn prime_series(seq: &NormalizedSequence, sieve: &SpfSieve, x: u64) -> Result<AngleSeries> {
    let recs = sieve
        .primes_up_to(x)
        .iter()
        .map(|&p| AngleRecord::from_value(p as u64, seq.a(p as u64).clamp(-2.0, 2.0)))
        .collect();
    AngleSeries::new(x, recs)
}

/// Standardized `log|a_n|` over the filtered support, compared with the
/// standard normal, plus the exact additive identity for the strongly
/// multiplicative companion.
pub fn verify_thm3(
    seq: &NormalizedSequence,
    x: u64,
    filter: &SupportFilter,
    standardization: Standardization,
    sieve: &SpfSieve,
    bounds: &Thm3Bounds,
) -> Result<VerificationReport> {
    if x > seq.limit() || x < 2 {
        return Err(Error::Range {
            value: x,
            limit: seq.limit(),
        });
    }
    if sieve.limit() < x {
        return Err(Error::Range {
            value: x,
            limit: sieve.limit(),
        });
    }
    if filter.mode == SupportMode::All {
        if let Some(n) = (1..=x).find(|&n| seq.a(n) == 0.0) {
            return Err(Error::InvalidInput(format!(
                "a_{n} = 0, so log|a_n| is undefined; use the nonzero filter"
            )));
        }
    }
    let keep = filter.mask(seq, sieve, x);
    let support: Vec<u64> = (1..=x).filter(|&n| keep[n as usize]).collect();
    if support.is_empty() {
        return Err(Error::InvalidInput("filtered support is empty".into()));
    }
    let nonzero = (1..=x).filter(|&n| seq.a(n) != 0.0).count();
    let l2 = log2_iter(x as f64);
    let floor = filter.prime_floor(x);
    let primes = prime_series(seq, sieve, x)?;
    let moments = prime_log_moments(&primes, x, floor)?;
    let c = STConstants::compute().clt_c;

    let logs: Vec<f64> = support.iter().map(|&n| seq.a(n).abs().ln()).collect();
    let m = logs.len();
    let mean = det_sum(0..m, |i| logs[i]) / m as f64;
    let var = det_sum(0..m, |i| (logs[i] - mean).powi(2)) / m as f64;
    let (centre, scale2) = match standardization {
        Standardization::Asymptotic => (-0.5 * l2, c * l2),
        Standardization::FiniteSize => (moments.mu, moments.sigma2),
        Standardization::SelfStandardized => (mean, var),
    };
    if !(scale2 > 0.0) {
        return Err(Error::InvalidInput(format!(
            "standardization variance is {scale2}; nothing to compare"
        )));
    }
    let sd = scale2.sqrt();
    let z: Vec<f64> = logs.iter().map(|&l| (l - centre) / sd).collect();
    let zm = det_sum(0..m, |i| z[i]) / m as f64;
    let c2 = det_sum(0..m, |i| (z[i] - zm).powi(2)) / m as f64;
    let c3 = det_sum(0..m, |i| (z[i] - zm).powi(3)) / m as f64;
    let c4 = det_sum(0..m, |i| (z[i] - zm).powi(4)) / m as f64;
    let skew = c3 / c2.powf(1.5);
    let kurt = c4 / (c2 * c2) - 3.0;
    let ks = ks_statistic(&Ecdf::new(z)?, normal_cdf);

    // ∑_{n<=x} log|h(n)| = ∑_{p<=x} log|h(p)| ⌊x/p⌋, with log|h(p)| = 0 off
    // the prime support.
    let in_prime_support = |p: u64| {
        let v = seq.a(p).abs();
        v > floor && v != 0.0
    };
    let log_h = |p: u64| {
        if in_prime_support(p) {
            seq.a(p).abs().ln()
        } else {
            0.0
        }
    };
    let lhs = det_sum(1..x as usize + 1, |n| {
        prime_factors(sieve, n as u64).map(log_h).sum::<f64>()
    });
    let plist = sieve.primes_up_to(x);
    let rhs = det_sum(0..plist.len(), |i| {
        let p = plist[i] as u64;
        log_h(p) * (x / p) as f64
    });
    let identity_rel = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1e-300);
    let identity_rel = if lhs == rhs { 0.0 } else { identity_rel };

    let approx = StrongMultApprox::build(seq, sieve, x, &keep);
    let sf_gap = approx.squarefree_max(sieve);

    let mut report = VerificationReport::new("thm3");
    report
        .param("x", x)
        .param("filter", format!("{:?}", filter.mode).to_lowercase())
        .param("standardization", standardization.name())
        .param("source", seq.source().name());
    if filter.mode == SupportMode::FloorA {
        report.param("A", filter.a);
    }
    let mut stats = ReportTable::new(
        "standardized",
        &[
            "x",
            "support",
            "centre",
            "variance",
            "sample_mean",
            "sample_var",
            "ks",
            "skewness",
            "excess_kurtosis",
        ],
    );
    stats.push(&[
        x as f64, m as f64, centre, scale2, mean, var, ks, skew, kurt,
    ]);
    report.tables.push(stats);
    let mut lm = ReportTable::new(
        "log-moments",
        &[
            "x",
            "log2_x",
            "mu",
            "sigma2",
            "mu_over_log2x",
            "sigma2_over_log2x",
            "prime_support",
        ],
    );
    lm.push(&[
        x as f64,
        l2,
        moments.mu,
        moments.sigma2,
        moments.mu / l2,
        moments.sigma2 / l2,
        moments.support as f64,
    ]);
    report.tables.push(lm);
    let mut ident = ReportTable::new("additive-identity", &["lhs", "rhs", "relative_error"]);
    ident.push(&[lhs, rhs, identity_rel]);
    report.tables.push(ident);
    let levels = [0.5, 0.9, 0.99, 1.0];
    let mut gaps = ReportTable::new("strong-mult-gap", &["quantile", "abs_gap"]);
    for (q, v) in levels.iter().zip(approx.abs_quantiles(&levels)) {
        gaps.push(&[*q, v]);
    }
    report.tables.push(gaps);
    let mut counts = ReportTable::new("support", &["x", "nonzero", "filtered"]);
    counts.push(&[x as f64, nonzero as f64, m as f64]);
    report.tables.push(counts);

    report
        .check(
            "additive_identity_rel",
            identity_rel,
            Bound::at_most(ADDITIVE_IDENTITY_REL),
        )
        .check(
            "squarefree_gap_max",
            sf_gap,
            Bound::at_most(SQUAREFREE_GAP_MAX),
        )
        .check(
            "filtered_minus_nonzero",
            m as f64 - nonzero as f64,
            Bound::at_most(0.0),
        );
    if let Some(k) = bounds.ks_max {
        report.check("ks_normal", ks, Bound::at_most(k));
    }
    if let Some(s) = bounds.skew_max {
        report.check("abs_skewness", skew.abs(), Bound::at_most(s));
    }
    if let Some((t, tol)) = bounds.mu_band {
        report.check("mu_over_log2x", moments.mu / l2, Bound::within(t, tol));
    }
    if let Some((t, tol)) = bounds.sigma2_band {
        report.check(
            "sigma2_over_log2x",
            moments.sigma2 / l2,
            Bound::within(t, tol),
        );
    }
    Ok(report)
}
