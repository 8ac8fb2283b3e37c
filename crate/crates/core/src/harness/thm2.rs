use super::Checkpoints;
use crate::arith::{NormalizedSequence, SpfSieve};
use crate::numeric::{det_sum, log2_iter, log3_iter};
use crate::report::{Bound, ReportTable, VerificationReport};
use crate::tolerances::TRIANGLE_REL_SLACK;
use crate::Result;

/// Smoothness cutoff `y = exp(4 log x · log₃x / log₂x)`.
pub fn smooth_cutoff(x: u64) -> f64 {
    let x = x as f64;
    (4.0 * x.ln() * log3_iter(x) / log2_iter(x)).exp()
}

/// Dyadic-window cancellation `|S|/T` with `S = ∑_{x/2<n<=x} a_n` and
/// `T = ∑ |a_n|`.
///
/// `|S| <= T` is checked at every checkpoint; `ratio_max`, when given,
/// bounds the ratio at the largest checkpoint.
pub fn verify_thm2(
    seq: &NormalizedSequence,
    checkpoints: &Checkpoints,
    sieve: &SpfSieve,
    ratio_max: Option<f64>,
) -> Result<VerificationReport> {
    if checkpoints.last() > seq.limit() {
        return Err(crate::Error::Range {
            value: checkpoints.last(),
            limit: seq.limit(),
        });
    }
    if checkpoints.last() > 1 && sieve.limit() < checkpoints.last() {
        return Err(crate::Error::Range {
            value: checkpoints.last(),
            limit: sieve.limit(),
        });
    }
    let mut report = VerificationReport::new("thm2");
    report
        .param("checkpoints", format!("{:?}", checkpoints.as_slice()))
        .param("source", seq.source().name());
    if let Some(m) = ratio_max {
        report.param("ratio_max", m);
    }

    let mut table = ReportTable::new(
        "windows",
        &[
            "x",
            "S",
            "T",
            "ratio",
            "support_empty",
            "smooth_y",
            "smooth_fraction",
        ],
    );
    let mut triangle = Vec::new();
    let mut last_ratio = 0.0;
    for &x in checkpoints.as_slice() {
        let lo = (x / 2 + 1) as usize;
        let hi = x as usize + 1;
        let s = det_sum(lo..hi, |n| seq.a(n as u64));
        let t = det_sum(lo..hi, |n| seq.a(n as u64).abs());
        let empty = t == 0.0;
        let ratio = if empty { 0.0 } else { s.abs() / t };
        let y = smooth_cutoff(x);
        let smooth = det_sum(lo..hi, |n| {
            f64::from(n == 1 || (sieve.largest_prime_factor(n as u64) as f64) <= y)
        });
        let width = (hi - lo) as f64;
        table.push(&[
            x as f64,
            s,
            t,
            ratio,
            f64::from(empty),
            y.min(f64::MAX),
            if width > 0.0 { smooth / width } else { 0.0 },
        ]);
        triangle.push((x, s.abs() - t, t));
        last_ratio = ratio;
    }
    report.tables.push(table);
    for (x, excess, t) in triangle {
        report.check(
            format!("triangle_{x}"),
            excess,
            Bound::at_most(TRIANGLE_REL_SLACK * t.max(1.0)),
        );
    }
    if let Some(m) = ratio_max {
        report.check(
            format!("ratio_{}", checkpoints.last()),
            last_ratio,
            Bound::at_most(m),
        );
    }
    Ok(report)
}
