use super::Checkpoints;
use crate::arith::NormalizedSequence;
use crate::numeric::det_sum;
use crate::report::{Bound, ReportTable, VerificationReport};
use crate::{Error, Result};

/// Fractions of `3 <= n <= x` with `|a_n| > (log n)^{-1/2+ε}` (exceedance)
/// and `|a_n| < (log n)^{-1/2-ε}` (the lower tail), per checkpoint.
///
/// With `monotone_slack`, each exceedance fraction may rise by at most that
/// much from the previous checkpoint.
pub fn verify_thm1(
    seq: &NormalizedSequence,
    eps: f64,
    checkpoints: &Checkpoints,
    monotone_slack: Option<f64>,
) -> Result<VerificationReport> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::InvalidInput(format!(
            "ε must lie in (0, 1/2], got {eps}"
        )));
    }
    if checkpoints.last() > seq.limit() {
        return Err(Error::Range {
            value: checkpoints.last(),
            limit: seq.limit(),
        });
    }
    let mut report = VerificationReport::new("thm1");
    report
        .param("epsilon", eps)
        .param("checkpoints", format!("{:?}", checkpoints.as_slice()))
        .param("source", seq.source().name());
    if let Some(s) = monotone_slack {
        report.param("monotone_slack", s);
    }

    let mut table = ReportTable::new(
        "exceedance",
        &[
            "x",
            "count",
            "above_fraction",
            "below_fraction",
            "upper_threshold_at_x",
        ],
    );
    let mut fractions = Vec::new();
    for &x in checkpoints.as_slice() {
        let (above, below, count) = if x < 3 {
            (0.0, 0.0, 0)
        } else {
            let lo = 3usize;
            let hi = x as usize + 1;
            let above = det_sum(lo..hi, |n| {
                let l = (n as f64).ln();
                f64::from(seq.a(n as u64).abs() > l.powf(-0.5 + eps))
            });
            let below = det_sum(lo..hi, |n| {
                let l = (n as f64).ln();
                f64::from(seq.a(n as u64).abs() < l.powf(-0.5 - eps))
            });
            let count = x - 2;
            (above / count as f64, below / count as f64, count)
        };
        table.push(&[
            x as f64,
            count as f64,
            above,
            below,
            (x.max(3) as f64).ln().powf(-0.5 + eps),
        ]);
        fractions.push((x, above, below));
    }
    report.tables.push(table);

    let outside = fractions
        .iter()
        .filter(|&&(_, a, b)| !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || a + b > 1.0)
        .count();
    report.check(
        "fractions_outside_unit_interval",
        outside as f64,
        Bound::at_most(0.0),
    );
    if let Some(slack) = monotone_slack {
        for w in fractions.windows(2) {
            report.check(
                format!("exceedance_step_{}_to_{}", w[0].0, w[1].0),
                w[1].1 - w[0].1,
                Bound::at_most(slack),
            );
        }
    }
    Ok(report)
}
