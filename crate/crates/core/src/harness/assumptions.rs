use std::f64::consts::PI;

use super::Checkpoints;
use crate::arith::{AngleSeries, NormalizedSequence};
use crate::numeric::{det_sum, log2_iter};
use crate::report::{Bound, ReportTable, VerificationReport};
use crate::stats::{st_cdf, sup_gap_on_grid, Ecdf};
use crate::{Error, Result};

/// `n + 1` equally spaced angles covering `[0, π]`.
pub fn default_angle_grid(n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n).map(|i| PI * i as f64 / n as f64).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionOptions {
    /// Exponent `A > 1` of the discrepancy rate `(log₂x)^{-A}`.
    pub a: f64,
    pub grid: Vec<f64>,
    /// Cutoffs for the discrepancy and tail panels (at most the angle limit).
    pub checkpoints: Checkpoints,
    pub k_max: u32,
    /// Bound on the sup-gap at the largest checkpoint.
    pub a2_max: Option<f64>,
}

/// Three panels: the prime-power lower-bound constant, the Sato–Tate
/// discrepancy on an angle grid, and the tail mass of primes with small
/// `|a_p|`.
pub fn check_assumptions(
    seq: &NormalizedSequence,
    angles: &AngleSeries,
    opts: &AssumptionOptions,
) -> Result<VerificationReport> {
    if !(opts.a > 1.0) {
        return Err(Error::InvalidInput(format!(
            "A must exceed 1, got {}",
            opts.a
        )));
    }
    if opts.checkpoints.last() > angles.limit() {
        return Err(Error::Range {
            value: opts.checkpoints.last(),
            limit: angles.limit(),
        });
    }
    if opts.grid.iter().any(|a| !(0.0..=PI).contains(a)) {
        return Err(Error::InvalidInput("angle grid must lie in [0, π]".into()));
    }
    let mut report = VerificationReport::new("assumptions");
    report
        .param("A", opts.a)
        .param("k_max", opts.k_max)
        .param("grid_points", opts.grid.len())
        .param("checkpoints", format!("{:?}", opts.checkpoints.as_slice()))
        .param("source", seq.source().name());

    // A1: −log|a_{p^k}| / (k log p) over nonvanishing a_p.
    let limit = seq.limit();
    let mut a1 = ReportTable::new("a1", &["k", "max_c", "terms", "zero_skipped"]);
    let mut c_all = f64::NEG_INFINITY;
    for k in 1..=opts.k_max.max(1) {
        let mut max_c = f64::NEG_INFINITY;
        let (mut terms, mut zeros) = (0u64, 0u64);
        for rec in angles.records() {
            let p = rec.p;
            let Some(q) = p.checked_pow(k).filter(|&q| q <= limit) else {
                break;
            };
            if seq.a(p) == 0.0 {
                continue;
            }
            let v = seq.a(q).abs();
            if v == 0.0 {
                zeros += 1;
                continue;
            }
            terms += 1;
            max_c = max_c.max(-v.ln() / (k as f64 * (p as f64).ln()));
        }
        a1.push_opt(vec![
            Some(k as f64),
            (terms > 0).then_some(max_c),
            Some(terms as f64),
            Some(zeros as f64),
        ]);
        if terms > 0 {
            c_all = c_all.max(max_c);
        }
    }
    report.tables.push(a1);
    report.check("a1_constant", c_all, Bound::at_most(f64::MAX));

    // A2: sup over the grid of |F_x(α) − F_ST(α)|.
    let cdf = |a: f64| st_cdf(a.clamp(0.0, PI)).unwrap_or(f64::NAN);
    let mut a2 = ReportTable::new("a2", &["x", "primes", "sup_gap", "rate", "gap_over_rate"]);
    let mut last_gap = f64::NAN;
    for &x in opts.checkpoints.as_slice() {
        let recs = angles.up_to(x);
        let rate = log2_iter(x as f64).powf(-opts.a);
        if recs.is_empty() {
            a2.push_opt(vec![Some(x as f64), Some(0.0), None, Some(rate), None]);
            last_gap = f64::NAN;
            continue;
        }
        let ecdf = Ecdf::new(recs.iter().map(|r| r.theta).collect())?;
        let gap = sup_gap_on_grid(&ecdf, cdf, &opts.grid);
        a2.push(&[x as f64, recs.len() as f64, gap, rate, gap / rate]);
        last_gap = gap;
    }
    report.tables.push(a2);
    if let Some(m) = opts.a2_max {
        report.check(
            format!("a2_sup_gap_{}", opts.checkpoints.last()),
            last_gap,
            Bound::at_most(m),
        );
    }

    // Tail mass ∑_{y<=p, |a_p| < (log₂p)^{-A}} 1/p against (log₂y)^{-(A-1)}.
    let recs = angles.records();
    let small: Vec<f64> = recs
        .iter()
        .map(|r| {
            if r.a_p.abs() < log2_iter(r.p as f64).powf(-opts.a) {
                1.0 / r.p as f64
            } else {
                0.0
            }
        })
        .collect();
    let mut tail = ReportTable::new("small-prime-tail", &["y", "tail_sum", "bound", "ratio"]);
    for &y in opts.checkpoints.as_slice() {
        let start = recs.partition_point(|r| r.p < y);
        let s = det_sum(start..small.len(), |i| small[i]);
        let bound = log2_iter(y as f64).powf(-(opts.a - 1.0));
        tail.push(&[y as f64, s, bound, s / bound]);
    }
    report.tables.push(tail);
    report.param("angle_limit", angles.limit());
    Ok(report)
}
